#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace deconv {

//! Split of the ambient dimension d = d1 + d2 into the two observation
//! blocks.
struct BlockDims
{
  int d1 = 1;
  int d2 = 1;

  int total() const { return d1 + d2; }
  bool operator==(const BlockDims&) const = default;
};

enum class Block
{
  first,
  second
};

//! A multi-index i in N^d together with its order |i|_1.
class MultiIndex
{
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  std::span<const int> entries() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.size()); }
  int order() const { return order_; }
  int operator[](int a) const { return entries_[static_cast<size_t>(a)]; }

  bool operator==(const MultiIndex&) const = default;

private:
  std::vector<int> entries_;
  int order_ = 0;
};

//! All multi-indices of dimension `dim` with order <= `max_order`, stored in
//! graded order: order 0 first, then order 1, ...; inside one order the
//! indices are sorted lexicographically descending. The indices of order
//! <= m therefore form a prefix of the enumeration for every m.
class MultiIndexSet
{
public:
  MultiIndexSet(int dim, int max_order);

  //! Shared instance, memoized per (dim, max_order).
  static std::shared_ptr<const MultiIndexSet> get(int dim, int max_order);

  int dim() const { return dim_; }
  int max_order() const { return max_order_; }
  size_t size() const { return orders_.size(); }

  std::span<const int> operator[](size_t k) const
  {
    return { flat_.data() + k * static_cast<size_t>(dim_),
             static_cast<size_t>(dim_) };
  }
  int order(size_t k) const { return orders_[k]; }
  MultiIndex index(size_t k) const;

  //! Number of indices with order <= m (length of the prefix).
  size_t prefix_size(int m) const;

  std::optional<size_t> find(std::span<const int> entries) const;

private:
  size_t encode(std::span<const int> entries) const;

  int dim_;
  int max_order_;
  std::vector<int> flat_;
  std::vector<int> orders_;
  std::vector<size_t> prefix_;
  // dense lookup table over the encoded box [0, max_order]^dim
  std::vector<long> lookup_;
};

} // namespace deconv
