#include "core/reconstruct.hpp"

#include "core/errors.hpp"
#include "core/quadrature.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace deconv {

using lcplx = std::complex<long double>;

double
m_rule_value(double log_n, double kappa)
{
  if (!(kappa > 0.0 && kappa <= 1.0))
    throw ConfigError("kappa must lie in (0, 1]");
  // log(n/4) > 1 iff n > 4e, and n >= 12 is the documented domain
  if (!(log_n >= std::log(12.0)))
    throw ConfigError("the degree rule needs n >= 12");
  const long double ln = log_n;
  const long double lln4 = std::log(ln - std::log(4.0L));
  return static_cast<double>(ln / (8.0L * kappa * lln4));
}

int
m_rule_from_log(double log_n, double kappa)
{
  return static_cast<int>(std::floor(m_rule_value(log_n, kappa)));
}

int
m_rule(double n, double kappa)
{
  if (!(n >= 12.0))
    throw ConfigError("the degree rule needs n >= 12");
  return m_rule_from_log(std::log(n), kappa);
}

double
c_kappa_cap(double kappa, double nu_est, int d)
{
  return std::min(nu_est, 2.0 * kappa * std::exp(-(3.0 * d + 5.0) / 2.0));
}

double
omega_rule(int m, double kappa, double S, double c_kappa, double nu_est, int d)
{
  if (m < 1)
    throw ConfigError("the frequency rule needs m >= 1");
  if (!(S > 0.0))
    throw ConfigError("S must be positive");
  if (!(c_kappa > 0.0))
    throw ConfigError("c_kappa must be positive");
  const double cap = c_kappa_cap(kappa, nu_est, d);
  if (c_kappa > cap * (1.0 + 1e-12))
    throw ConfigError("c_kappa exceeds its cap " + std::to_string(cap));
  return c_kappa * std::pow(static_cast<double>(m), kappa) / S;
}

TuningRules
make_tuning(double n, double kappa, double S, double c_kappa, double nu_est, int d,
            int m_override)
{
  TuningRules t;
  t.kappa = kappa;
  t.n = n;
  t.S = S;
  t.c_kappa = c_kappa > 0.0 ? c_kappa : c_kappa_cap(kappa, nu_est, d);
  if (m_override > 0) {
    t.m = m_override;
    t.m_overridden = true;
  } else {
    t.m = m_rule(n, kappa);
  }
  t.omega = t.m >= 1 ? omega_rule(t.m, kappa, S, t.c_kappa, nu_est, d) : 0.0;
  return t;
}

Lattice
Lattice::cube(int d, double lo, double hi, int count)
{
  if (count < 2 || !(hi > lo))
    throw ConfigError("lattice needs at least two points and hi > lo");
  Lattice l;
  l.min.assign(static_cast<size_t>(d), lo);
  l.step.assign(static_cast<size_t>(d), (hi - lo) / (count - 1));
  l.count.assign(static_cast<size_t>(d), count);
  return l;
}

size_t
Lattice::size() const
{
  size_t s = 1;
  for (int c : count)
    s *= static_cast<size_t>(c);
  return s;
}

double
Lattice::cell_volume() const
{
  double v = 1.0;
  for (double s : step)
    v *= s;
  return v;
}

void
Lattice::point(size_t k, std::span<double> x) const
{
  for (int a = dim() - 1; a >= 0; --a) {
    const size_t c = static_cast<size_t>(count[static_cast<size_t>(a)]);
    x[static_cast<size_t>(a)] = min[static_cast<size_t>(a)] +
                                static_cast<double>(k % c) * step[static_cast<size_t>(a)];
    k /= c;
  }
}

namespace {

long double
box_moment(int alpha, long double omega)
{
  if (alpha % 2 != 0)
    return 0.0L;
  return 2.0L * std::pow(omega, static_cast<long double>(alpha + 1)) / (alpha + 1);
}

} // namespace

std::vector<lcplx>
fourier_moments(int k_max, double omega, double x)
{
  std::vector<lcplx> out(static_cast<size_t>(k_max + 1));
  const long double w = omega;
  const long double lx = x;
  if (x == 0.0) {
    for (int k = 0; k <= k_max; ++k)
      out[static_cast<size_t>(k)] = box_moment(k, w);
    return out;
  }
  const long double wx = std::abs(lx) * w;
  if (wx <= k_max + 1.0L) {
    // power series of exp(-i t x)
    for (int k = 0; k <= k_max; ++k) {
      lcplx sum = 0.0L;
      lcplx coef = 1.0L; // (-i x)^j / j!
      for (int j = 0; j < 400; ++j) {
        if (j > 0)
          coef *= lcplx(0.0L, -lx) / static_cast<long double>(j);
        const lcplx term = coef * box_moment(k + j, w);
        sum += term;
        if (j > wx + 2 && std::abs(coef) * 2.0L * std::pow(w, static_cast<long double>(k + j + 1)) <
                            1e-22L * std::max(std::abs(sum), 1e-300L))
          break;
      }
      out[static_cast<size_t>(k)] = sum;
    }
    return out;
  }
  const lcplx e_minus(std::cos(w * lx), -std::sin(w * lx));
  const lcplx e_plus(std::cos(w * lx), std::sin(w * lx));
  const lcplx inv_mix = 1.0L / lcplx(0.0L, -lx);
  out[0] = 2.0L * std::sin(w * lx) / lx;
  long double wk = 1.0L;
  for (int k = 1; k <= k_max; ++k) {
    wk *= w;
    const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
    const lcplx boundary = (wk * e_minus - sign * wk * e_plus) * inv_mix;
    out[static_cast<size_t>(k)] =
      boundary + static_cast<long double>(k) / lcplx(0.0L, lx) * out[static_cast<size_t>(k - 1)];
  }
  return out;
}

namespace {

double
finish_value(lcplx sum, int d)
{
  const long double scale = std::pow(2.0L * std::numbers::pi_v<long double>, -d);
  const lcplx v = sum * scale;
  if (std::abs(v.imag()) > 1e-9L)
    throw NumericalError("inverted density has imaginary residue " +
                         std::to_string(static_cast<double>(v.imag())));
  return static_cast<double>(v.real());
}

lcplx
sum_terms(const TaylorPoly& poly, const std::vector<std::vector<lcplx>>& mom)
{
  lcplx sum = 0.0L;
  const int d = poly.dim();
  for (size_t k = 0; k < poly.size(); ++k) {
    const double p = poly.param(k);
    if (p == 0.0)
      continue;
    auto idx = poly.indices()[k];
    lcplx prod = (poly.indices().order(k) % 2 == 0) ? lcplx(p, 0.0L) : lcplx(0.0L, p);
    for (int a = 0; a < d; ++a)
      prod *= mom[static_cast<size_t>(a)][static_cast<size_t>(idx[static_cast<size_t>(a)])];
    sum += prod;
  }
  return sum;
}

} // namespace

double
invert_at(const TaylorPoly& poly, double omega, std::span<const double> x)
{
  if (!(omega > 0.0))
    throw std::invalid_argument("inversion box omega must be positive");
  const int d = poly.dim();
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("inversion point has wrong dimension");
  std::vector<std::vector<lcplx>> mom(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a)
    mom[static_cast<size_t>(a)] = fourier_moments(poly.max_degree(), omega, x[static_cast<size_t>(a)]);
  return finish_value(sum_terms(poly, mom), d);
}

DensityGrid
invert(const TaylorPoly& poly, double omega, const Lattice& lattice)
{
  if (!(omega > 0.0))
    throw std::invalid_argument("inversion box omega must be positive");
  const int d = poly.dim();
  if (lattice.dim() != d)
    throw std::invalid_argument("lattice dimension differs from the polynomial");
  // moments per axis and lattice coordinate
  std::vector<std::vector<std::vector<lcplx>>> table(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a) {
    const size_t ua = static_cast<size_t>(a);
    for (int j = 0; j < lattice.count[ua]; ++j)
      table[ua].push_back(
        fourier_moments(poly.max_degree(), omega, lattice.min[ua] + j * lattice.step[ua]));
  }
  DensityGrid out;
  out.lattice = lattice;
  out.values.resize(lattice.size());
  std::vector<std::vector<lcplx>> mom(static_cast<size_t>(d));
  for (size_t k = 0; k < lattice.size(); ++k) {
    size_t rest = k;
    for (int a = d - 1; a >= 0; --a) {
      const size_t ua = static_cast<size_t>(a);
      const size_t c = static_cast<size_t>(lattice.count[ua]);
      mom[ua] = table[ua][rest % c];
      rest /= c;
    }
    out.values[k] = finish_value(sum_terms(poly, mom), d);
  }
  return out;
}

namespace {

//! sum_{k,l} c_k conj(c_l) prod_a box_moment(i_a + j_a) over [-omega, omega]^d.
long double
box_gram(const MultiIndexSet& idx, const std::vector<lcplx>& c, long double omega)
{
  const int d = idx.dim();
  const int M = idx.max_order();
  std::vector<long double> mom(static_cast<size_t>(2 * M + 1));
  for (int a = 0; a <= 2 * M; ++a)
    mom[static_cast<size_t>(a)] = box_moment(a, omega);
  long double total = 0.0L;
  for (size_t k = 0; k < c.size(); ++k) {
    if (c[k] == lcplx(0.0L))
      continue;
    auto ik = idx[k];
    for (size_t l = 0; l < c.size(); ++l) {
      if (c[l] == lcplx(0.0L))
        continue;
      auto il = idx[l];
      long double m = 1.0L;
      for (int a = 0; a < d; ++a) {
        m *= mom[static_cast<size_t>(ik[static_cast<size_t>(a)] + il[static_cast<size_t>(a)])];
        if (m == 0.0L)
          break;
      }
      if (m != 0.0L)
        total += (c[k] * std::conj(c[l])).real() * m;
    }
  }
  return total;
}

//! Coefficients of `p` placed in the index set of degree M >= p.max_degree().
std::vector<lcplx>
embed(const TaylorPoly& p, const MultiIndexSet& idx)
{
  std::vector<lcplx> c(idx.size(), lcplx(0.0L));
  for (size_t k = 0; k < p.size(); ++k) {
    const auto pos = idx.find(p.indices()[k]);
    const cplx v = p.coeff(k);
    c[*pos] = lcplx(v.real(), v.imag());
  }
  return c;
}

} // namespace

double
spectral_norm_sq(const SpectralEstimate& a)
{
  const auto idx = MultiIndexSet::get(a.poly.dim(), a.poly.max_degree());
  const long double scale = std::pow(2.0L * std::numbers::pi_v<long double>, -a.poly.dim());
  return static_cast<double>(scale * box_gram(*idx, embed(a.poly, *idx), a.omega));
}

double
l2_distance_sq(const SpectralEstimate& a, const SpectralEstimate& b)
{
  if (!(a.poly.dims() == b.poly.dims()))
    throw std::invalid_argument("spectral estimates live in different dimensions");
  const SpectralEstimate& lo = a.omega <= b.omega ? a : b;
  const SpectralEstimate& hi = a.omega <= b.omega ? b : a;
  const int M = std::max(a.poly.max_degree(), b.poly.max_degree());
  const auto idx = MultiIndexSet::get(a.poly.dim(), M);
  const auto c_lo = embed(lo.poly, *idx);
  const auto c_hi = embed(hi.poly, *idx);
  std::vector<lcplx> diff(c_lo.size());
  for (size_t k = 0; k < diff.size(); ++k)
    diff[k] = c_lo[k] - c_hi[k];
  long double total = box_gram(*idx, diff, lo.omega);
  if (hi.omega > lo.omega)
    total += box_gram(*idx, c_hi, hi.omega) - box_gram(*idx, c_hi, lo.omega);
  const long double scale = std::pow(2.0L * std::numbers::pi_v<long double>, -a.poly.dim());
  return std::max(0.0, static_cast<double>(scale * total));
}

double
l2_distance_sq(const DensityGrid& a, const DensityGrid& b)
{
  if (!(a.lattice == b.lattice))
    throw std::invalid_argument("density grids have incompatible lattices");
  std::vector<double> sq(a.values.size());
  for (size_t k = 0; k < sq.size(); ++k) {
    const double e = a.values[k] - b.values[k];
    sq[k] = e * e;
  }
  return pairwise_sum(std::span<const double>(sq)) * a.lattice.cell_volume();
}

double
l2_distance_sq(const DensityGrid& a, const std::function<double(std::span<const double>)>& f)
{
  std::vector<double> sq(a.values.size());
  std::vector<double> x(static_cast<size_t>(a.dim()));
  for (size_t k = 0; k < sq.size(); ++k) {
    a.lattice.point(k, x);
    const double e = a.values[k] - f(x);
    sq[k] = e * e;
  }
  return pairwise_sum(std::span<const double>(sq)) * a.lattice.cell_volume();
}

double
l2_distance(const SpectralEstimate& a, const SpectralEstimate& b)
{
  return std::sqrt(l2_distance_sq(a, b));
}

double
l2_distance(const DensityGrid& a, const DensityGrid& b)
{
  return std::sqrt(l2_distance_sq(a, b));
}

double
l2_distance(const DensityGrid& a, const std::function<double(std::span<const double>)>& f)
{
  return std::sqrt(l2_distance_sq(a, f));
}

SmoothnessResult
smoothness_integral(const CfFunction& phi, int d, double beta, double radius, int panels,
                    int order)
{
  if (!(beta > 0.0))
    throw ConfigError("beta must be positive");
  if (!(radius > 0.0))
    throw ConfigError("smoothness radius must be positive");
  if (d < 1 || d > 4)
    throw ConfigError("smoothness integral supports 1 <= d <= 4");
  const Rule1D rule = composite_gauss(panels, order, -radius, radius);
  const size_t N = rule.nodes.size();
  size_t total = 1;
  for (int a = 0; a < d; ++a)
    total *= N;
  std::vector<double> all(total), shell(total, 0.0);
  std::vector<double> t(static_cast<size_t>(d));
  for (size_t k = 0; k < total; ++k) {
    size_t rest = k;
    double w = 1.0;
    double norm2 = 0.0;
    double tmax = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      const size_t j = rest % N;
      rest /= N;
      t[static_cast<size_t>(a)] = rule.nodes[j];
      w *= rule.weights[j];
      norm2 += rule.nodes[j] * rule.nodes[j];
      tmax = std::max(tmax, std::abs(rule.nodes[j]));
    }
    const double v = w * std::norm(phi(t)) * std::pow(1.0 + norm2, beta);
    all[k] = v;
    if (tmax > 0.9 * radius)
      shell[k] = v;
  }
  SmoothnessResult r;
  r.value = pairwise_sum(std::span<const double>(all));
  const double s = pairwise_sum(std::span<const double>(shell));
  r.shell_fraction = r.value > 0.0 ? s / r.value : 0.0;
  r.tail_flag = r.shell_fraction > 0.01;
  return r;
}

DensityGrid
clip_nonneg(const DensityGrid& grid)
{
  DensityGrid out = grid;
  for (double& v : out.values)
    v = std::max(v, 0.0);
  return out;
}

nlohmann::json
lattice_to_json(const Lattice& lattice)
{
  return { { "min", lattice.min }, { "step", lattice.step }, { "count", lattice.count } };
}

Lattice
lattice_from_json(const nlohmann::json& j)
{
  Lattice l;
  l.min = j.at("min").get<std::vector<double>>();
  l.step = j.at("step").get<std::vector<double>>();
  l.count = j.at("count").get<std::vector<int>>();
  if (l.min.size() != l.step.size() || l.min.size() != l.count.size() || l.min.empty())
    throw ConfigError("inconsistent lattice record");
  for (size_t a = 0; a < l.min.size(); ++a) {
    if (!(l.step[a] > 0.0) || l.count[a] < 1)
      throw ConfigError("lattice steps must be positive");
  }
  return l;
}

void
write_density(const std::string& csv_path, const std::string& json_path, const DensityGrid& grid,
              const DensityMeta& meta)
{
  std::ofstream os(csv_path);
  if (!os)
    throw IoError("cannot open '" + csv_path + "' for writing");
  const int d = grid.dim();
  for (int a = 0; a < d; ++a)
    os << "x" << (a + 1) << ",";
  os << "value\n" << std::setprecision(17);
  std::vector<double> x(static_cast<size_t>(d));
  for (size_t k = 0; k < grid.values.size(); ++k) {
    grid.lattice.point(k, x);
    for (double v : x)
      os << v << ",";
    os << grid.values[k] << "\n";
  }
  if (!os)
    throw IoError("write to '" + csv_path + "' failed");

  nlohmann::json j;
  j["lattice"] = lattice_to_json(grid.lattice);
  j["omega"] = meta.omega;
  j["m"] = meta.m;
  j["kappa"] = meta.kappa;
  j["n"] = meta.n;
  j["seed"] = meta.seed;
  std::ofstream js(json_path);
  if (!js)
    throw IoError("cannot open '" + json_path + "' for writing");
  js << std::setw(2) << j << "\n";
}

DensityGrid
read_density(const std::string& csv_path, const std::string& json_path, DensityMeta* meta)
{
  std::ifstream js(json_path);
  if (!js)
    throw IoError("cannot open '" + json_path + "'");
  nlohmann::json j;
  try {
    js >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad density sidecar: ") + e.what());
  }
  DensityGrid g;
  g.lattice = lattice_from_json(j.at("lattice"));
  if (meta) {
    meta->omega = j.value("omega", 0.0);
    meta->m = j.value("m", 0);
    meta->kappa = j.value("kappa", 0.0);
    meta->n = j.value("n", 0.0);
    meta->seed = j.value("seed", uint64_t{ 0 });
  }
  std::ifstream is(csv_path);
  if (!is)
    throw IoError("cannot open '" + csv_path + "'");
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    const auto pos = line.rfind(',');
    g.values.push_back(std::stod(line.substr(pos + 1)));
  }
  if (g.values.size() != g.lattice.size())
    throw IoError("density CSV row count does not match its lattice");
  return g;
}

} // namespace deconv
