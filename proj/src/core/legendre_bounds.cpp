#include "core/legendre_bounds.hpp"

#include "core/errors.hpp"
#include "core/multiindex.hpp"
#include "core/rng.hpp"
#include "core/taylor.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace deconv {

double
legendre_eval(int i, double nu, double x, bool* outside)
{
  if (i < 0)
    throw std::invalid_argument("Legendre index must be >= 0");
  if (!(nu > 0.0))
    throw std::invalid_argument("Legendre interval half-width must be positive");
  if (outside)
    *outside = std::abs(x) > nu;
  const long double y = static_cast<long double>(x) / nu;
  long double p0 = 1.0L;
  long double p1 = y;
  long double p = (i == 0) ? p0 : p1;
  for (int k = 2; k <= i; ++k) {
    p = ((2.0L * k - 1.0L) * y * p1 - (k - 1.0L) * p0) / k;
    p0 = p1;
    p1 = p;
  }
  return static_cast<double>(std::sqrt((i + 0.5L) / nu) * p);
}

namespace {

//! Coefficient of x^{i-2k} in P_i^norm on [-nu, nu].
long double
legendre_coeff(int i, int k, long double nu)
{
  // 2^{-i} (-1)^k C(i-k, k) C(2i-2k, i-k) nu^{-(i-2k)} (i+1/2)^{1/2} nu^{-1/2}
  const long double lc = std::lgamma(static_cast<long double>(i - k + 1)) -
                         std::lgamma(static_cast<long double>(k + 1)) -
                         std::lgamma(static_cast<long double>(i - 2 * k + 1)) +
                         std::lgamma(static_cast<long double>(2 * i - 2 * k + 1)) -
                         2.0L * std::lgamma(static_cast<long double>(i - k + 1));
  const long double mag = std::exp(lc - i * std::log(2.0L) - (i - 2 * k) * std::log(nu)) *
                          std::sqrt((i + 0.5L) / nu);
  return (k % 2 == 0) ? mag : -mag;
}

} // namespace

LegendreBasis::LegendreBasis(double nu_, int max_index_)
  : nu(nu_)
  , max_index(max_index_)
{
  if (!(nu > 0.0) || max_index < 0)
    throw std::invalid_argument("invalid Legendre basis parameters");
  coeffs.assign(static_cast<size_t>(max_index + 1), {});
  for (int i = 0; i <= max_index; ++i) {
    auto& row = coeffs[static_cast<size_t>(i)];
    row.assign(static_cast<size_t>(i + 1), 0.0);
    for (int k = 0; 2 * k <= i; ++k)
      row[static_cast<size_t>(i - 2 * k)] = static_cast<double>(legendre_coeff(i, k, nu));
  }
}

double
LegendreBasis::eval(int i, double x) const
{
  const auto& row = coeffs.at(static_cast<size_t>(i));
  long double v = 0.0L;
  for (size_t j = row.size(); j-- > 0;)
    v = v * x + row[j];
  return static_cast<double>(v);
}

Eigen::MatrixXd
change_of_basis(int m, double nu, int d)
{
  if (m < 0 || d < 1)
    throw std::invalid_argument("change of basis needs m >= 0 and d >= 1");
  const auto idx = MultiIndexSet::get(d, m);
  const long P = static_cast<long>(idx->size());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(P, P);
  for (long r = 0; r < P; ++r) {
    auto i = (*idx)[static_cast<size_t>(r)];
    for (long c = 0; c < P; ++c) {
      auto j = (*idx)[static_cast<size_t>(c)];
      long double v = 1.0L;
      for (int a = 0; a < d && v != 0.0L; ++a) {
        const int diff = i[static_cast<size_t>(a)] - j[static_cast<size_t>(a)];
        if (diff < 0 || diff % 2 != 0)
          v = 0.0L;
        else
          v *= legendre_coeff(i[static_cast<size_t>(a)], diff / 2, nu);
      }
      B(r, c) = static_cast<double>(v);
    }
  }
  return B;
}

namespace {

//! log of (k + d/kappa)^{-kappa k} u^k
long double
log_fk_term(int k, long double u, long double kappa, int d)
{
  return k * std::log(u) - kappa * k * std::log(k + d / kappa);
}

} // namespace

SeriesValue
f_kappa(double u, double kappa, int d, int terms)
{
  if (!(u >= 0.0))
    throw std::invalid_argument("f_kappa needs u >= 0");
  if (!(kappa > 0.0) || d < 0 || terms < 1)
    throw std::invalid_argument("invalid f_kappa parameters");
  SeriesValue s;
  s.terms = terms;
  if (u == 0.0)
    return s;
  const long double lu = u;
  const long double lk = kappa;
  long double last = 0.0L;
  for (int k = 1; k <= terms; ++k) {
    last = std::exp(log_fk_term(k, lu, lk, d));
    s.value += last;
  }
  const long double q = lu * std::pow(terms + 1 + d / lk, -lk);
  if (q >= 1.0L) {
    s.remainder = INFINITY;
  } else {
    s.remainder = last * q / (1.0L - q);
  }
  if (!(s.remainder <= 1e-15L * std::max(1.0L, s.value)))
    throw NumericalError("f_kappa series not converged after " + std::to_string(terms) +
                         " terms");
  return s;
}

SeriesValue
f_kappa(double u, double kappa, int d)
{
  if (u == 0.0)
    return f_kappa(u, kappa, d, 1);
  SeriesValue s;
  const long double lu = u;
  const long double lk = kappa;
  for (int k = 1; k <= 200000; ++k) {
    const long double term = std::exp(log_fk_term(k, lu, lk, d));
    s.value += term;
    const long double q = lu * std::pow(k + 1 + d / lk, -lk);
    if (q < 1.0L) {
      s.remainder = term * q / (1.0L - q);
      if (s.remainder <= 1e-18L * s.value) {
        s.terms = k;
        return s;
      }
    }
  }
  throw NumericalError("f_kappa series did not converge");
}

long double
f_kappa_envelope(double u, double kappa)
{
  const long double k = kappa;
  const long double u0 = std::pow(4.0L / (3.0L * k), k);
  const long double v = std::pow(std::max<long double>(u, u0), 1.0L / k);
  return 6.0L * v * std::exp(k * v);
}

long double
bound_x0(double kappa, int d)
{
  return std::max(1.0L, std::pow((d + 4.0L / 3.0L) / kappa, static_cast<long double>(kappa)));
}

long double
c_upsilon_bound(double kappa, double S, double nu, int d)
{
  const long double k = kappa;
  const long double base = std::max(static_cast<long double>(S) * nu, bound_x0(kappa, d));
  return 7.0L * std::pow(base, (d + 1.0L) / k) * std::exp(k * std::pow(base, 1.0L / k));
}

SeriesValue
psi_sum(double x, double kappa, int d)
{
  if (!(x > 0.0) || !(kappa > 0.0) || d < 0)
    throw std::invalid_argument("invalid psi-sum parameters");
  SeriesValue s;
  const long double lx = x;
  const long double lk = kappa;
  for (int k = 1; k <= 200000; ++k) {
    const long double lt = d * std::log(static_cast<long double>(k)) + k * std::log(lx) -
                           lk * k * std::log(static_cast<long double>(k));
    const long double term = std::exp(lt);
    s.value += term;
    // every later ratio of consecutive terms is at most ((k+1)/k)^d x (k+1)^{-kappa}
    const long double q = std::pow((k + 1.0L) / k, d) * lx * std::pow(k + 1.0L, -lk);
    if (q < 1.0L && k > 2) {
      s.remainder = term * q / (1.0L - q);
      if (s.remainder <= 1e-18L * s.value) {
        s.terms = k;
        return s;
      }
    }
  }
  throw NumericalError("psi series did not converge");
}

long double
psi_sum_bound(double x, double kappa, int d)
{
  const long double k = kappa;
  const long double base = std::max(static_cast<long double>(x), bound_x0(kappa, d));
  return 6.0L * std::pow(base, (d + 1.0L) / k) * std::exp(k * std::pow(base, 1.0L / k));
}

long double
truncation_bound(double kappa, double S, double nu, int d, int m)
{
  if (m < 1)
    throw std::invalid_argument("truncation bound needs m >= 1");
  if (m < d / kappa)
    throw std::invalid_argument("truncation bound needs m >= d / kappa");
  const long double snu = static_cast<long double>(S) * nu;
  const long double lm = m;
  const long double log_b = d * std::log(2.0L) + m * std::log(snu) +
                            (-static_cast<long double>(kappa) * m + d) * std::log(lm);
  return std::exp(log_b) * f_kappa(static_cast<double>(snu), kappa, d).value;
}

long double
sigma1_bound(double nu, int d, int m)
{
  const long double lnu = nu;
  return std::pow(lnu, -d / 2.0L) * std::pow(static_cast<long double>(m), d) *
         std::pow(4.0L, m) * std::pow(std::max(1.0L / lnu, 1.0L), m);
}

double
sigma1_power(int m, double nu, int d, int max_iter, double tol)
{
  const Eigen::MatrixXd B = change_of_basis(m, nu, d);
  const Eigen::MatrixXd G = B.transpose() * B;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(G.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = G * v;
    const double next = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0)
      return 0.0;
    v = w / nw;
    if (std::abs(next - lambda) <= tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

namespace {

//! Degree-M member of the class with coefficients uniform on [-bound, bound].
TaylorPoly
random_member(int d, int M, const UpsilonParams& params, Rng& rng)
{
  const auto idx = MultiIndexSet::get(d, M);
  std::vector<double> p(idx->size());
  p[0] = 1.0;
  for (size_t k = 1; k < p.size(); ++k) {
    const double b = upsilon_bound(idx->order(k), params);
    p[k] = rng.uniform(-b, b);
  }
  return TaylorPoly(BlockDims{ d, 0 }, M, std::move(p), TaylorPoly::Role::cf_candidate);
}

std::vector<std::vector<double>>
box_points(int d, double nu)
{
  const int n = d == 1 ? 401 : 61;
  std::vector<double> axis(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j)
    axis[static_cast<size_t>(j)] = -nu + 2.0 * nu * j / (n - 1);
  std::vector<std::vector<double>> pts;
  size_t total = 1;
  for (int a = 0; a < d; ++a)
    total *= static_cast<size_t>(n);
  for (size_t k = 0; k < total; ++k) {
    std::vector<double> x(static_cast<size_t>(d));
    size_t rest = k;
    for (int a = d - 1; a >= 0; --a) {
      x[static_cast<size_t>(a)] = axis[rest % static_cast<size_t>(n)];
      rest /= static_cast<size_t>(n);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

} // namespace

std::vector<BoundReport>
bound_suite(double kappa, double S, double nu, int d, int m, uint64_t seed, int members)
{
  const UpsilonParams params{ kappa, S };
  params.validate();
  if (!(nu > 0.0) || d < 1 || d > 2 || m < 1)
    throw ConfigError("bound suite needs nu > 0, d in {1, 2}, m >= 1");

  std::vector<BoundReport> out;
  auto base = [&](const std::string& name) {
    BoundReport r;
    r.name = name;
    r.kappa = kappa;
    r.S = S;
    r.nu = nu;
    r.d = d;
    r.m = m;
    return r;
  };

  const int M = m + 14;
  const auto pts = box_points(d, nu);
  Rng rng(stream_seed(seed, static_cast<uint64_t>(m * 1000 + d)));
  double trunc_sup = 0.0;
  double phi_sup = 0.0;
  for (int s = 0; s < members; ++s) {
    const TaylorPoly phi = random_member(d, M, params, rng);
    std::vector<double> tail(phi.params().begin(), phi.params().end());
    const size_t keep = phi.indices().prefix_size(m);
    for (size_t k = 0; k < keep; ++k)
      tail[k] = 0.0;
    const TaylorPoly rest(phi.dims(), M, std::move(tail));
    for (const auto& x : pts) {
      trunc_sup = std::max(trunc_sup, std::abs(rest.evaluate(x)));
      phi_sup = std::max(phi_sup, std::abs(phi.evaluate(x)));
    }
  }

  {
    BoundReport r = base("truncation");
    r.measured = trunc_sup;
    if (m >= d / kappa) {
      r.bound = static_cast<double>(truncation_bound(kappa, S, nu, d, m));
      r.slack = r.bound - r.measured;
    } else {
      r.applicable = false;
    }
    out.push_back(r);
  }
  {
    BoundReport r = base("c_upsilon");
    r.measured = phi_sup;
    r.bound = static_cast<double>(c_upsilon_bound(kappa, S, nu, d));
    r.slack = r.bound - r.measured;
    out.push_back(r);
  }
  {
    BoundReport r = base("psi_sum");
    const double x = S * nu;
    r.measured = static_cast<double>(psi_sum(x, kappa, d).value);
    r.bound = static_cast<double>(psi_sum_bound(x, kappa, d));
    r.slack = r.bound - r.measured;
    out.push_back(r);
  }
  {
    BoundReport r = base("f_kappa");
    const double u = S * nu;
    r.measured = static_cast<double>(f_kappa(u, kappa, d).value);
    r.bound = static_cast<double>(f_kappa_envelope(u, kappa));
    r.slack = r.bound - r.measured;
    out.push_back(r);
  }
  {
    BoundReport r = base("sigma1");
    r.measured = sigma1_power(m, nu, d);
    r.bound = static_cast<double>(sigma1_bound(nu, d, m));
    r.slack = r.bound - r.measured;
    out.push_back(r);
  }
  return out;
}

void
write_bound_csv(std::ostream& os, const std::vector<BoundReport>& reports)
{
  os << "name,kappa,S,nu,d,m,bound,measured,slack,applicable\n" << std::setprecision(17);
  for (const auto& r : reports)
    os << r.name << "," << r.kappa << "," << r.S << "," << r.nu << "," << r.d << "," << r.m
       << "," << r.bound << "," << r.measured << "," << r.slack << ","
       << (r.applicable ? 1 : 0) << "\n";
}

} // namespace deconv
