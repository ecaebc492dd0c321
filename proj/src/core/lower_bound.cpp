#include "core/lower_bound.hpp"

#include "core/errors.hpp"
#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace deconv {

namespace {

constexpr double kPi = std::numbers::pi;

double
bump(double x)
{
  const double s = 1.0 - x * x;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

//! (1 + cos y)/(pi^2 - y^2)^2 with the removable singularity at |y| = pi.
double
g_shape(double y)
{
  const double e = std::abs(y) - kPi;
  if (std::abs(e) < 1e-3) {
    const double e2 = e * e;
    const double q = 2.0 * kPi + e;
    return (0.5 - e2 / 24.0 + e2 * e2 / 720.0) / (q * q);
  }
  const double den = kPi * kPi - y * y;
  return (1.0 + std::cos(y)) / (den * den);
}

} // namespace

double
mollifier_constant()
{
  static const double c_u = [] {
    const Rule1D r = composite_gauss(64, 20, -1.0, 1.0);
    double s = 0.0;
    for (size_t q = 0; q < r.nodes.size(); ++q)
      s += r.weights[q] * bump(r.nodes[q]);
    return 1.0 / s;
  }();
  return c_u;
}

double
mollifier_eval(double b, double x)
{
  if (!(b > 0.0))
    throw ConfigError("mollifier scale b must be positive");
  return b * mollifier_constant() * bump(b * x);
}

std::function<double(double)>
mollify(std::function<double(double)> f, double b, int panels, int order)
{
  if (!(b > 0.0))
    throw ConfigError("mollifier scale b must be positive");
  const Rule1D r = composite_gauss(panels, order, -1.0 / b, 1.0 / b);
  std::vector<double> w(r.nodes.size());
  for (size_t q = 0; q < w.size(); ++q)
    w[q] = r.weights[q] * mollifier_eval(b, r.nodes[q]);
  return [f = std::move(f), nodes = r.nodes, w](double x) {
    double s = 0.0;
    for (size_t q = 0; q < w.size(); ++q)
      s += w[q] * f(x - nodes[q]);
    return s;
  };
}

double
UniformGrid1D::eval(double x) const
{
  if (v.empty())
    return 0.0;
  const double s = (x - lo) / step;
  if (s < 0.0 || s > double(v.size() - 1))
    return 0.0;
  const size_t i = std::min(size_t(s), v.size() - 1);
  if (i + 1 >= v.size())
    return v.back();
  const double t = s - double(i);
  return (1.0 - t) * v[i] + t * v[i + 1];
}

double
UniformGrid1D::integral() const
{
  double s = 0.0;
  for (double y : v)
    s += y;
  return s * step;
}

double
UniformGrid1D::norm_sq() const
{
  double s = 0.0;
  for (double y : v)
    s += y * y;
  return s * step;
}

UniformGrid1D
sample_uniform(const std::function<double(double)>& f, double lo, double hi, double step)
{
  if (!(step > 0.0) || !(hi > lo))
    throw ConfigError("uniform grid needs lo < hi and step > 0");
  UniformGrid1D g;
  g.lo = lo;
  g.step = step;
  const size_t n = size_t(std::ceil((hi - lo) / step)) + 1;
  g.v.resize(n);
  for (size_t i = 0; i < n; ++i)
    g.v[i] = f(g.x(i));
  return g;
}

UniformGrid1D
convolve_mollifier(const UniformGrid1D& f, double b)
{
  const int r = int(std::floor(1.0 / (b * f.step)));
  if (r < 2)
    throw ConfigError("grid step too coarse for the mollifier width");
  std::vector<double> k(2 * r + 1);
  double ks = 0.0;
  for (int j = -r; j <= r; ++j) {
    k[j + r] = mollifier_eval(b, j * f.step);
    ks += k[j + r];
  }
  for (double& x : k)
    x /= ks;
  UniformGrid1D out = f;
  const long n = long(f.v.size());
  for (long i = 0; i < n; ++i) {
    double s = 0.0;
    const long jlo = std::max(-long(r), i - (n - 1));
    const long jhi = std::min(long(r), i);
    for (long j = jlo; j <= jhi; ++j)
      s += k[j + r] * f.v[i - j];
    out.v[i] = s;
  }
  return out;
}

NormChain
norm_chain(const WeightedBasis& basis, int K, double b, double step)
{
  if (K < 0 || K > basis.K_max)
    throw ConfigError("norm chain K outside the basis");
  if (!(b > 0.0))
    throw ConfigError("mollifier scale b must be positive");
  if (step <= 0.0)
    step = std::min(1e-3, 1.0 / (20.0 * b));
  const double L = basis.weight.support + 2.0 / b;
  const auto f = sample_uniform(
    [&](double x) {
      const double h = h_kappa_eval(basis.weight, x);
      return basis.eval(K, x) * h * h;
    },
    -L, L, step);
  NormChain nc;
  nc.plain = f.norm_sq();
  nc.smoothed = convolve_mollifier(f, b).norm_sq();
  return nc;
}

NoiseG::NoiseG(double c)
  : c_(c)
{
  if (!(c > 0.0))
    throw ConfigError("noise parameter c must be positive");
  const double Y = 2000.0;
  const Rule1D r = composite_gauss(2000, 12, 0.0, Y);
  double s = 0.0;
  for (size_t q = 0; q < r.nodes.size(); ++q)
    s += r.weights[q] * g_shape(r.nodes[q]);
  s = 2.0 * (s + 1.0 / (3.0 * Y * Y * Y));
  c_g_ = c / s;

  y_max_ = 400.0;
  const size_t N = size_t(1) << 16;
  table_.resize(N);
  const double h = 2.0 * y_max_ / double(N - 1);
  double acc = 1.0 / (3.0 * y_max_ * y_max_ * y_max_) / s;
  table_[0] = acc;
  for (size_t i = 1; i < N; ++i) {
    const double a = -y_max_ + double(i - 1) * h;
    acc += h / 6.0 * (g_shape(a) + 4.0 * g_shape(a + 0.5 * h) + g_shape(a + h)) / s;
    table_[i] = acc;
  }
  const double total = acc + table_[0];
  for (double& t : table_)
    t /= total;
}

double
NoiseG::density(double x) const
{
  return c_g_ * g_shape(c_ * x);
}

double
NoiseG::cf(double t) const
{
  const double s = std::abs(t / c_);
  if (s >= 1.0)
    return 0.0;
  return (1.0 - s) * std::cos(kPi * s) + std::sin(kPi * s) / kPi;
}

double
NoiseG::cdf(double x) const
{
  const double y = c_ * x;
  const size_t N = table_.size();
  const double h = 2.0 * y_max_ / double(N - 1);
  if (y <= -y_max_)
    return table_[0] * std::pow(y_max_ / -y, 3.0);
  if (y >= y_max_)
    return 1.0 - table_[0] * std::pow(y_max_ / y, 3.0);
  const double s = (y + y_max_) / h;
  const size_t i = std::min(size_t(s), N - 2);
  const double t = s - double(i);
  return (1.0 - t) * table_[i] + t * table_[i + 1];
}

double
NoiseG::sample(Rng& rng) const
{
  const double u = rng.uniform();
  const size_t N = table_.size();
  const double h = 2.0 * y_max_ / double(N - 1);
  auto it = std::upper_bound(table_.begin(), table_.end(), u);
  if (it == table_.begin())
    return -y_max_ / c_;
  if (it == table_.end())
    return y_max_ / c_;
  const size_t i = size_t(it - table_.begin()) - 1;
  const double t = (u - table_[i]) / (table_[i + 1] - table_[i]);
  return (-y_max_ + (double(i) + t) * h) / c_;
}

void
LowerBoundInstance::validate() const
{
  if (d1 < 1 || d2 < 1)
    throw ConfigError("lower bound needs d1, d2 >= 1");
  if (!(a >= 0.0 && a < 1.0))
    throw ConfigError("mixing scalar a must lie in [0, 1)");
  if (!(c > 0.0))
    throw ConfigError("noise parameter c must be positive");
  if (!(kappa > 0.5 && kappa < 1.0))
    throw ConfigError("lower bound kappa must lie in (1/2, 1)");
  if (!(beta > 0.0))
    throw ConfigError("beta must be positive");
  if (!(n >= 16.0))
    throw ConfigError("lower bound needs n >= 16");
  if (!(c_b > 0.0) || !(step > 0.0) || !(env_window >= 0.0) || !(alpha_scale > 0.0))
    throw ConfigError("c_b, step and alpha_scale must be positive");
}

Eigen::MatrixXd
mixing_matrix(int d1, int d2, double a)
{
  const int d = d1 + d2;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d, d);
  for (int j = d1; j < d; ++j)
    A(0, j) = a;
  for (int j = 0; j < d1; ++j)
    A(d1, j) = a;
  return A;
}

double
TwoPoint::f0(std::span<const double> u) const
{
  const int d = int(A.rows());
  Eigen::VectorXd s = A_inv * Eigen::Map<const Eigen::VectorXd>(u.data(), d);
  double p = 1.0 / std::abs(det_A);
  for (int j = 0; j < d; ++j)
    p *= zeta0.eval(s[j]);
  return p;
}

double
TwoPoint::fn(std::span<const double> u) const
{
  const int d = int(A.rows());
  Eigen::VectorXd s = A_inv * Eigen::Map<const Eigen::VectorXd>(u.data(), d);
  double p = zetan.eval(s[0]) / std::abs(det_A);
  for (int j = 1; j < d; ++j)
    p *= zeta0.eval(s[j]);
  return p;
}

TwoPoint
build_two_point(const LowerBoundInstance& in, const WeightedBasis& basis)
{
  in.validate();
  TwoPoint tp;
  tp.instance = in;
  const double kappa = basis.weight.kappa;
  const double c_K = in.c_K > 0.0 ? in.c_K : basis.weight.c_h;
  const double ln = std::log(in.n);
  tp.K_n = std::max(1, int(std::lround(c_K / kappa * ln / std::log(ln))));
  if (tp.K_n > basis.K_max)
    throw ConfigError("K_n = " + std::to_string(tp.K_n) + " exceeds the basis K_max");
  tp.b_n = in.c_b * std::pow(double(tp.K_n), kappa);

  const double step = std::min(in.step, 1.0 / (10.0 * tp.b_n));
  const double L = basis.weight.support + 2.0 / tp.b_n + in.env_window;
  const auto hgrid = sample_uniform([&](double x) { return h_kappa_eval(basis.weight, x); }, -L,
                                    L, step);
  const size_t N = hgrid.v.size();
  std::vector<double> env(N), pk(N);
  for (size_t i = 0; i < N; ++i) {
    const auto p = basis.eval_all(hgrid.x(i));
    double e = std::abs(p[0]) * hgrid.v[i];
    for (int K = 1; K <= basis.K_max; ++K)
      e = std::max(e, std::pow(double(K), 0.5 * (1.0 - kappa)) * std::abs(p[K]) * hgrid.v[i]);
    env[i] = e;
    pk[i] = p[tp.K_n];
  }
  const long r = long(std::lround(0.5 * in.env_window / step));
  std::vector<double> smooth(N);
  for (long i = 0; i < long(N); ++i) {
    double m = 0.0;
    for (long j = std::max(0L, i - r); j <= std::min(long(N) - 1, i + r); ++j)
      m = std::max(m, env[j]);
    smooth[i] = m;
  }

  UniformGrid1D base = hgrid, pert = hgrid;
  double mass = 0.0;
  for (size_t i = 0; i < N; ++i)
    mass += smooth[i] * hgrid.v[i];
  mass *= step;
  double sup = 0.0;
  tp.cap_nonneg = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < N; ++i) {
    const double h = hgrid.v[i];
    base.v[i] = smooth[i] / mass * h;
    pert.v[i] = pk[i] * h * h;
    const double ph = std::abs(pk[i]) * h;
    sup = std::max(sup, ph);
    if (ph > 0.0)
      tp.cap_nonneg = std::min(tp.cap_nonneg, smooth[i] / mass / ph);
  }
  tp.cap_sup = 1.0 / sup;
  tp.cap_l2 = std::sqrt(basis.weight.c_h * std::pow(tp.b_n, -2.0 * in.beta) / pert.norm_sq());
  tp.alpha_n = in.alpha >= 0.0
                 ? in.alpha
                 : in.alpha_scale * std::min({ tp.cap_sup, tp.cap_l2, tp.cap_nonneg });

  tp.zeta0 = convolve_mollifier(base, tp.b_n);
  tp.perturbation = convolve_mollifier(pert, tp.b_n);
  tp.zetan = tp.zeta0;
  tp.min_zetan = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < N; ++i) {
    tp.zetan.v[i] += tp.alpha_n * tp.perturbation.v[i];
    tp.min_zetan = std::min(tp.min_zetan, tp.zetan.v[i]);
  }
  tp.mass_n = tp.zetan.integral();
  if (tp.min_zetan < -1e-12)
    throw NumericalError("zeta_n is negative (min " + std::to_string(tp.min_zetan) +
                         "), alpha_n is too large");

  tp.A = mixing_matrix(in.d1, in.d2, in.a);
  tp.det_A = tp.A.determinant();
  if (std::abs(tp.det_A) < 1e-12)
    throw ConfigError("mixing matrix is singular");
  tp.A_inv = tp.A.inverse();
  return tp;
}

LeCam
lecam_value(const TwoPoint& tp, const NoiseG& noise, double n, int N, double half_width)
{
  if (!(n >= 0.0))
    throw ConfigError("sample size must be nonnegative");
  const int d = int(tp.A.rows());
  LeCam out;
  const double pert = tp.alpha_n * tp.alpha_n * tp.perturbation.norm_sq();
  out.l2_sq = pert * std::pow(tp.zeta0.norm_sq(), d - 1) / std::abs(tp.det_A);
  if (!std::isfinite(out.l2_sq))
    throw NumericalError("L2 distance is not finite");
  if (d != 2)
    throw ConfigError("the L1 distance is implemented for d1 = d2 = 1");
  if (N < 16 || !(half_width > 0.0))
    throw ConfigError("L1 grid too small");

  const double du = 2.0 * half_width / double(N - 1);
  const double inv_det = 1.0 / std::abs(tp.det_A);
  std::vector<double> D(size_t(N) * N, 0.0);
  std::vector<char> row_used(N, 0), col_used(N, 0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const Eigen::Vector2d u(-half_width + i * du, -half_width + j * du);
      const Eigen::Vector2d s = tp.A_inv * u;
      const double v = -tp.alpha_n * tp.perturbation.eval(s[0]) * tp.zeta0.eval(s[1]) * inv_det;
      if (v != 0.0) {
        D[size_t(i) * N + j] = v;
        row_used[i] = col_used[j] = 1;
      }
    }
  std::vector<double> k(2 * N - 1);
  for (int m = -(N - 1); m <= N - 1; ++m)
    k[m + N - 1] = noise.density(m * du) * du;

  std::vector<double> tmp(size_t(N) * N, 0.0);
  for (int kr = 0; kr < N; ++kr) {
    if (!row_used[kr])
      continue;
    for (int i = 0; i < N; ++i) {
      const double g = k[i - kr + N - 1];
      double* t = &tmp[size_t(i) * N];
      const double* src = &D[size_t(kr) * N];
      for (int j = 0; j < N; ++j)
        t[j] += g * src[j];
    }
  }
  double l1 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double* t = &tmp[size_t(i) * N];
    for (int j = 0; j < N; ++j) {
      double s = 0.0;
      for (int l = 0; l < N; ++l)
        if (col_used[l])
          s += t[l] * k[j - l + N - 1];
      l1 += std::abs(s);
    }
  }
  out.l1 = l1 * du * du;
  if (!std::isfinite(out.l1))
    throw NumericalError("L1 distance is not finite");
  out.value = 0.25 * out.l2_sq * std::pow(std::max(0.0, 1.0 - 0.5 * out.l1), n);
  return out;
}

} // namespace deconv
