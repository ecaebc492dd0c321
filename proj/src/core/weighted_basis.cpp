#include "core/weighted_basis.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace deconv {

namespace {

constexpr double kLogTail = 34.54; // 2 * 34.54 > log(1e30)

double
exponent_power(double kappa)
{
  return 1.0 / (2.0 * (1.0 - kappa));
}

//! ((1 + (x/x0)^2)/2)^p, p = 1/(2(1 - kappa)).
double
g_exponent(const WeightSpec& s, double x)
{
  const double r = x / s.x0;
  return std::pow(0.5 * (1.0 + r * r), exponent_power(s.kappa));
}

double
integrate(const std::function<double(double)>& f, const Rule1D& rule)
{
  double acc = 0.0;
  for (size_t q = 0; q < rule.nodes.size(); ++q)
    acc += rule.weights[q] * f(rule.nodes[q]);
  return acc;
}

void
append(Rule1D& into, const Rule1D& part)
{
  into.nodes.insert(into.nodes.end(), part.nodes.begin(), part.nodes.end());
  into.weights.insert(into.weights.end(), part.weights.begin(), part.weights.end());
}

} // namespace

WeightSpec
make_weight(double kappa, double x0)
{
  if (!(kappa >= 0.5 && kappa <= 1.0))
    throw ConfigError("weight kappa must lie in [1/2, 1]");
  if (!(x0 > 0.0))
    throw ConfigError("weight x0 must be positive");
  WeightSpec s;
  s.kappa = kappa;
  s.x0 = x0;
  if (s.indicator()) {
    s.support = x0;
    s.c_h = 0.5 / x0;
    return s;
  }
  const double p = exponent_power(kappa);
  const double g0 = std::pow(0.5, p);
  s.support = x0 * std::sqrt(2.0 * std::pow(kLogTail + g0, 1.0 / p) - 1.0);
  s.c_h = 1.0;
  const Rule1D rule = composite_gauss(256, 20, -s.support, s.support);
  const double mass = integrate([&](double x) { return h_kappa_eval(s, x); }, rule);
  s.c_h = 1.0 / mass;
  return s;
}

double
h_kappa_eval(const WeightSpec& spec, double x)
{
  if (spec.indicator())
    return std::abs(x) <= spec.x0 ? spec.c_h : 0.0;
  return spec.c_h * std::exp(-g_exponent(spec, x));
}

Rule1D
weight_rule(const WeightSpec& spec, double rel_tol)
{
  if (spec.indicator())
    return gauss_legendre(48, -spec.x0, spec.x0);
  const double L = spec.support;
  auto h2 = [&](double x) {
    const double v = h_kappa_eval(spec, x);
    return v * v;
  };
  const double total = integrate(h2, composite_gauss(512, 20, -L, L));
  Rule1D out;
  std::function<void(double, double, int)> refine = [&](double a, double b, int depth) {
    const Rule1D coarse = gauss_legendre(20, a, b);
    const Rule1D fine = composite_gauss(2, 20, a, b);
    const double err = std::abs(integrate(h2, coarse) - integrate(h2, fine));
    if (err <= rel_tol * total || depth >= 30) {
      append(out, fine);
      return;
    }
    const double mid = 0.5 * (a + b);
    refine(a, mid, depth + 1);
    refine(mid, b, depth + 1);
  };
  const int start = 32;
  for (int k = 0; k < start; ++k)
    refine(-L + 2.0 * L * k / start, -L + 2.0 * L * (k + 1) / start, 0);
  return out;
}

std::vector<double>
WeightedBasis::eval_all(double x) const
{
  std::vector<double> p(K_max + 1);
  p[0] = 1.0 / beta[0];
  if (K_max >= 1)
    p[1] = (x - alpha[0]) * p[0] / beta[1];
  for (int k = 1; k < K_max; ++k)
    p[k + 1] = ((x - alpha[k]) * p[k] - beta[k] * p[k - 1]) / beta[k + 1];
  return p;
}

double
WeightedBasis::eval(int K, double x) const
{
  if (K < 0 || K > K_max)
    throw std::out_of_range("polynomial index outside the basis");
  return eval_all(x)[K];
}

double
WeightedBasis::eval_weighted(int K, double x) const
{
  return eval(K, x) * h_kappa_eval(weight, x);
}

std::vector<std::vector<double>>
weighted_gram(const WeightedBasis& basis, const Rule1D& rule)
{
  const int n = basis.K_max + 1;
  std::vector<std::vector<double>> G(n, std::vector<double>(n, 0.0));
  for (size_t q = 0; q < rule.nodes.size(); ++q) {
    const double h = h_kappa_eval(basis.weight, rule.nodes[q]);
    const double w = rule.weights[q] * h * h;
    if (w == 0.0)
      continue;
    const auto p = basis.eval_all(rule.nodes[q]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        G[i][j] += w * p[i] * p[j];
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      G[i][j] = G[j][i];
  return G;
}

WeightedBasis
build_weighted_basis(const WeightSpec& spec, int K_max, double tol)
{
  if (K_max < 0 || K_max > 16)
    throw ConfigError("K_max must lie in [0, 16]");
  if (spec.c_h <= 0.0)
    throw ConfigError("weight is not normalized, use make_weight");
  const Rule1D rule = weight_rule(spec);
  const size_t Q = rule.nodes.size();
  std::vector<double> w(Q);
  for (size_t q = 0; q < Q; ++q) {
    const double h = h_kappa_eval(spec, rule.nodes[q]);
    w[q] = rule.weights[q] * h * h;
  }

  WeightedBasis B;
  B.weight = spec;
  B.K_max = K_max;
  B.alpha.assign(K_max + 1, 0.0);
  B.beta.assign(K_max + 1, 0.0);
  B.monomial.assign(K_max + 1, std::vector<double>(K_max + 1, 0.0));

  double mass = 0.0;
  for (size_t q = 0; q < Q; ++q)
    mass += w[q];
  B.beta[0] = std::sqrt(mass);
  std::vector<double> prev(Q, 0.0), cur(Q, 1.0 / B.beta[0]), next(Q);
  B.monomial[0][0] = 1.0 / B.beta[0];

  for (int k = 0; k <= K_max; ++k) {
    double a = 0.0;
    for (size_t q = 0; q < Q; ++q)
      a += w[q] * rule.nodes[q] * cur[q] * cur[q];
    B.alpha[k] = a;
    if (k == K_max)
      break;
    const double bk = k == 0 ? 0.0 : B.beta[k];
    double norm = 0.0;
    for (size_t q = 0; q < Q; ++q) {
      next[q] = (rule.nodes[q] - a) * cur[q] - bk * prev[q];
      norm += w[q] * next[q] * next[q];
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0))
      throw NumericalError("Stieltjes recurrence broke down at K = " + std::to_string(k + 1));
    B.beta[k + 1] = norm;
    for (size_t q = 0; q < Q; ++q)
      next[q] /= norm;
    std::swap(prev, cur);
    std::swap(cur, next);

    auto& m = B.monomial[k + 1];
    const auto& mk = B.monomial[k];
    for (int j = 0; j <= k; ++j) {
      m[j + 1] += mk[j];
      m[j] -= a * mk[j];
      if (k > 0)
        m[j] -= bk * B.monomial[k - 1][j];
    }
    for (double& c : m)
      c /= norm;
  }

  Rule1D check;
  if (spec.indicator())
    check = gauss_legendre(64, -spec.x0, spec.x0);
  else
    check = composite_gauss(1024, 24, -spec.support, spec.support);

  const auto G = weighted_gram(B, check);
  std::ostringstream cert;
  cert.precision(3);
  for (int i = 0; i <= K_max; ++i) {
    double err = 0.0;
    for (int j = 0; j <= i; ++j)
      err = std::max(err, std::abs(G[i][j] - (i == j ? 1.0 : 0.0)));
    B.gram_error = std::max(B.gram_error, err);
    if (err > tol)
      throw NumericalError("weighted basis loses orthonormality at K = " + std::to_string(i) +
                           " (error " + std::to_string(err) + ")");
  }
  cert << std::scientific << "kappa=" << spec.kappa << " K_max=" << K_max
       << " max|G-I|=" << B.gram_error << " nodes=" << check.nodes.size();
  B.certificate = cert.str();
  return B;
}

std::vector<double>
scaled_profile(const WeightedBasis& basis, int K, Scaling scaling, const std::vector<double>& x)
{
  if (K < 1 || K > basis.K_max)
    throw ConfigError("profile K must lie in [1, K_max]");
  const double kappa = basis.weight.kappa;
  const double amp = std::pow(double(K), 0.5 * (1.0 - kappa));
  const double stretch =
    scaling == Scaling::stretch ? std::pow(double(K), 1.0 - kappa) : std::pow(double(K), -kappa);
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    out[i] = amp * basis.eval_weighted(K, stretch * x[i]);
  return out;
}

Census
interval_census(const WeightedBasis& basis, int K, double c1, double c2)
{
  if (K < 1 || K > basis.K_max)
    throw ConfigError("census K must lie in [1, K_max]");
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw ConfigError("census constants must be positive");
  const double kappa = basis.weight.kappa;
  const double min_len = c1 * std::pow(double(K), -kappa);
  const double step = min_len / 20.0;
  const double thr = c2 * std::pow(double(K), 0.5 * (kappa - 1.0));
  const int N = int(std::floor(2.0 / step)) + 1;

  Census c;
  int run_start = -1;
  auto close = [&](int end) {
    if (run_start < 0)
      return;
    const double len = (end - run_start) * step;
    if (len >= min_len)
      c.intervals.push_back({-1.0 + run_start * step, -1.0 + (end - 1) * step});
    run_start = -1;
  };
  for (int i = 0; i < N; ++i) {
    const double x = -1.0 + i * step;
    const bool hit = std::abs(basis.eval_weighted(K, x)) >= thr;
    if (hit && run_start < 0)
      run_start = i;
    if (!hit)
      close(i);
  }
  close(N);
  c.count = int(c.intervals.size());
  return c;
}

std::vector<double>
hermite_functions(int K, double x)
{
  std::vector<double> psi(K + 1);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (K >= 1)
    psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int k = 1; k < K; ++k)
    psi[k + 1] = std::sqrt(2.0 / (k + 1)) * x * psi[k] - std::sqrt(double(k) / (k + 1)) * psi[k - 1];
  return psi;
}

} // namespace deconv
