#pragma once

#include "core/multiindex.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace deconv {

struct Rule1D
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

//! n-point Gauss-Legendre rule on [a, b] (Newton iteration on P_n).
Rule1D gauss_legendre(int n, double a, double b);

//! Composite trapezoid rule with n equispaced nodes including the endpoints.
Rule1D trapezoid(int n, double a, double b);

//! Composite Gauss-Legendre: `panels` equal panels with `order` nodes each.
Rule1D composite_gauss(int panels, int order, double a, double b);

enum class QuadratureRule
{
  gauss_legendre,
  trapezoid
};

std::string to_string(QuadratureRule rule);
QuadratureRule quadrature_rule_from_string(const std::string& name);

//! Tensor-product grid on [-nu, nu]^{d1 + d2}, the same 1-D rule on every
//! axis. Full-grid node k has digits (k_0, ..., k_{d-1}) with axis 0 most
//! significant, so its first-block part is k / N^{d2} and its second-block
//! part is k % N^{d2}.
class QuadratureGrid
{
public:
  QuadratureGrid(double nu, int nodes_per_axis, QuadratureRule rule, BlockDims dims);

  double nu() const { return nu_; }
  int nodes_per_axis() const { return n_; }
  QuadratureRule rule() const { return rule_; }
  BlockDims dims() const { return dims_; }
  int dim() const { return dims_.total(); }
  const Rule1D& axis() const { return axis_; }

  size_t full_size() const { return full_size_; }
  size_t first_size() const { return first_size_; }
  size_t second_size() const { return second_size_; }

  size_t first_part(size_t k) const { return k / second_size_; }
  size_t second_part(size_t k) const { return k % second_size_; }

  //! Coordinates of full-grid node k (row of length d).
  std::span<const double> node(size_t k) const
  {
    return { coords_.data() + k * static_cast<size_t>(dim()), static_cast<size_t>(dim()) };
  }
  double weight(size_t k) const { return weights_[k]; }

  //! Block grids: coordinates live in d1 (resp. d2) dimensions.
  std::span<const double> first_node(size_t k) const;
  std::span<const double> second_node(size_t k) const;
  double first_weight(size_t k) const { return first_weights_[k]; }
  double second_weight(size_t k) const { return second_weights_[k]; }

  //! Content identifier; two grids with equal ids have identical nodes.
  const std::string& id() const { return id_; }

  bool operator==(const QuadratureGrid& other) const { return id_ == other.id_; }

private:
  static void build_block(const Rule1D& axis, int d, std::vector<double>& coords,
                          std::vector<double>& weights);

  double nu_;
  int n_;
  QuadratureRule rule_;
  BlockDims dims_;
  Rule1D axis_;
  size_t full_size_ = 0;
  size_t first_size_ = 0;
  size_t second_size_ = 0;
  std::vector<double> coords_;
  std::vector<double> weights_;
  std::vector<double> first_coords_;
  std::vector<double> first_weights_;
  std::vector<double> second_coords_;
  std::vector<double> second_weights_;
  std::string id_;
};

//! Pairwise (tree) summation. The base case adds blocks of at most 8 terms
//! left to right, so the result only depends on the input order.
template<typename T>
T
pairwise_sum(std::span<const T> values)
{
  const size_t n = values.size();
  if (n <= 8) {
    T acc{};
    for (const T& v : values)
      acc += v;
    return acc;
  }
  const size_t half = n / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

} // namespace deconv
