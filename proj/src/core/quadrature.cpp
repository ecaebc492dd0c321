#include "core/quadrature.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace deconv {

Rule1D
gauss_legendre(int n, double a, double b)
{
  if (n < 1)
    throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  Rule1D rule;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const size_t lo = static_cast<size_t>(i);
    const size_t hi = static_cast<size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * x;
    rule.nodes[hi] = mid + half * x;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  if (n == 1) {
    rule.nodes[0] = mid;
    rule.weights[0] = b - a;
  }
  return rule;
}

Rule1D
trapezoid(int n, double a, double b)
{
  if (n < 2)
    throw std::invalid_argument("trapezoid rule needs at least two nodes");
  Rule1D rule;
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(a + h * i);
    rule.weights.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
  }
  return rule;
}

Rule1D
composite_gauss(int panels, int order, double a, double b)
{
  if (panels < 1)
    throw std::invalid_argument("composite rule needs at least one panel");
  const Rule1D base = gauss_legendre(order, 0.0, 1.0);
  Rule1D rule;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double left = a + h * p;
    for (size_t q = 0; q < base.nodes.size(); ++q) {
      rule.nodes.push_back(left + h * base.nodes[q]);
      rule.weights.push_back(h * base.weights[q]);
    }
  }
  return rule;
}

std::string
to_string(QuadratureRule rule)
{
  return rule == QuadratureRule::gauss_legendre ? "gauss_legendre" : "trapezoid";
}

QuadratureRule
quadrature_rule_from_string(const std::string& name)
{
  if (name == "gauss_legendre")
    return QuadratureRule::gauss_legendre;
  if (name == "trapezoid")
    return QuadratureRule::trapezoid;
  throw ConfigError("unknown quadrature rule '" + name + "'");
}

QuadratureGrid::QuadratureGrid(double nu, int nodes_per_axis, QuadratureRule rule,
                               BlockDims dims)
  : nu_(nu)
  , n_(nodes_per_axis)
  , rule_(rule)
  , dims_(dims)
{
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw ConfigError("grid half-width nu must be positive");
  if (nodes_per_axis < 2)
    throw ConfigError("grid needs at least 2 nodes per axis");
  if (dims.d1 < 1 || dims.d2 < 0 || dims.total() > 4)
    throw ConfigError("grid dimensions must satisfy d1 >= 1, d2 >= 0, d <= 4");

  axis_ = (rule == QuadratureRule::gauss_legendre) ? gauss_legendre(n_, -nu, nu)
                                                   : trapezoid(n_, -nu, nu);
  build_block(axis_, dims.total(), coords_, weights_);
  build_block(axis_, dims.d1, first_coords_, first_weights_);
  build_block(axis_, dims.d2, second_coords_, second_weights_);
  full_size_ = weights_.size();
  first_size_ = first_weights_.size();
  second_size_ = second_weights_.size();

  std::ostringstream os;
  os.precision(17);
  os << to_string(rule) << ":" << nu << ":" << n_ << ":" << dims.d1 << "x" << dims.d2;
  id_ = os.str();
}

void
QuadratureGrid::build_block(const Rule1D& axis, int d, std::vector<double>& coords,
                            std::vector<double>& weights)
{
  const size_t n = axis.nodes.size();
  size_t total = 1;
  for (int a = 0; a < d; ++a)
    total *= n;
  coords.assign(total * static_cast<size_t>(d), 0.0);
  weights.assign(total, 1.0);
  for (size_t k = 0; k < total; ++k) {
    size_t rest = k;
    for (int a = d - 1; a >= 0; --a) {
      const size_t digit = rest % n;
      rest /= n;
      coords[k * static_cast<size_t>(d) + static_cast<size_t>(a)] = axis.nodes[digit];
      weights[k] *= axis.weights[digit];
    }
  }
}

std::span<const double>
QuadratureGrid::first_node(size_t k) const
{
  const size_t d = static_cast<size_t>(dims_.d1);
  return { first_coords_.data() + k * d, d };
}

std::span<const double>
QuadratureGrid::second_node(size_t k) const
{
  const size_t d = static_cast<size_t>(dims_.d2);
  return { second_coords_.data() + k * d, d };
}

} // namespace deconv
