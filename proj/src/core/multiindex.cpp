#include "core/multiindex.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace deconv {

MultiIndex::MultiIndex(std::vector<int> entries)
  : entries_(std::move(entries))
{
  for (int e : entries_) {
    if (e < 0)
      throw std::invalid_argument("multi-index entries must be nonnegative");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

namespace {

// Appends all indices of dimension `dim` and order exactly `order` in
// lexicographically descending order.
void
enumerate_order(int dim, int order, std::vector<int>& current, std::vector<int>& out)
{
  const int pos = static_cast<int>(current.size());
  if (pos == dim - 1) {
    current.push_back(order);
    out.insert(out.end(), current.begin(), current.end());
    current.pop_back();
    return;
  }
  for (int v = order; v >= 0; --v) {
    current.push_back(v);
    enumerate_order(dim, order - v, current, out);
    current.pop_back();
  }
}

} // namespace

MultiIndexSet::MultiIndexSet(int dim, int max_order)
  : dim_(dim)
  , max_order_(max_order)
{
  if (dim < 1)
    throw std::invalid_argument("multi-index dimension must be >= 1");
  if (max_order < 0)
    throw std::invalid_argument("maximal order must be >= 0");

  std::vector<int> current;
  for (int m = 0; m <= max_order; ++m) {
    enumerate_order(dim, m, current, flat_);
    const size_t count = flat_.size() / static_cast<size_t>(dim);
    orders_.resize(count, m);
    prefix_.push_back(count);
  }

  size_t box = 1;
  for (int a = 0; a < dim; ++a)
    box *= static_cast<size_t>(max_order + 1);
  lookup_.assign(box, -1);
  for (size_t k = 0; k < size(); ++k)
    lookup_[encode((*this)[k])] = static_cast<long>(k);
}

std::shared_ptr<const MultiIndexSet>
MultiIndexSet::get(int dim, int max_order)
{
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexSet>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{ dim, max_order }];
  if (!slot)
    slot = std::make_shared<const MultiIndexSet>(dim, max_order);
  return slot;
}

MultiIndex
MultiIndexSet::index(size_t k) const
{
  auto e = (*this)[k];
  return MultiIndex(std::vector<int>(e.begin(), e.end()));
}

size_t
MultiIndexSet::prefix_size(int m) const
{
  if (m < 0)
    return 0;
  if (m >= max_order_)
    return size();
  return prefix_[static_cast<size_t>(m)];
}

size_t
MultiIndexSet::encode(std::span<const int> entries) const
{
  size_t code = 0;
  for (int e : entries)
    code = code * static_cast<size_t>(max_order_ + 1) + static_cast<size_t>(e);
  return code;
}

std::optional<size_t>
MultiIndexSet::find(std::span<const int> entries) const
{
  if (static_cast<int>(entries.size()) != dim_)
    return std::nullopt;
  int order = 0;
  for (int e : entries) {
    if (e < 0 || e > max_order_)
      return std::nullopt;
    order += e;
  }
  if (order > max_order_)
    return std::nullopt;
  const long k = lookup_[encode(entries)];
  if (k < 0)
    return std::nullopt;
  return static_cast<size_t>(k);
}

} // namespace deconv
