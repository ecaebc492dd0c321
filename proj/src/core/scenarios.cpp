#include "core/scenarios.hpp"

#include "core/errors.hpp"
#include "core/weighted_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace deconv {

namespace {

cplx
phase(double x)
{
  return { std::cos(x), std::sin(x) };
}

cplx
rule_cf(const Rule1D& r, double t)
{
  cplx s = 0.0;
  for (size_t q = 0; q < r.nodes.size(); ++q)
    s += r.weights[q] * phase(t * r.nodes[q]);
  return s;
}

template<class E>
E
kind_from(const std::string& name, std::initializer_list<std::pair<const char*, E>> table,
          const char* what)
{
  for (const auto& [n, k] : table)
    if (name == n)
      return k;
  throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
}

} // namespace

std::string
to_string(SourceSpec::Kind kind)
{
  switch (kind) {
    case SourceSpec::Kind::point_mass: return "point_mass";
    case SourceSpec::Kind::uniform: return "uniform";
    case SourceSpec::Kind::two_point: return "two_point";
    case SourceSpec::Kind::bump: return "bump";
    case SourceSpec::Kind::h_kappa: return "h_kappa";
    case SourceSpec::Kind::custom: return "custom";
  }
  return "?";
}

SourceSpec::Kind
source_kind_from_string(const std::string& name)
{
  using K = SourceSpec::Kind;
  return kind_from<K>(name,
                      { { "point_mass", K::point_mass },
                        { "uniform", K::uniform },
                        { "two_point", K::two_point },
                        { "bump", K::bump },
                        { "h_kappa", K::h_kappa },
                        { "custom", K::custom } },
                      "signal kind");
}

std::string
to_string(NoiseComponent::Kind kind)
{
  switch (kind) {
    case NoiseComponent::Kind::g_density: return "g_density";
    case NoiseComponent::Kind::uniform: return "uniform";
    case NoiseComponent::Kind::laplace: return "laplace";
    case NoiseComponent::Kind::point_mass: return "point_mass";
    case NoiseComponent::Kind::gaussian: return "gaussian";
  }
  return "?";
}

NoiseComponent::Kind
noise_kind_from_string(const std::string& name)
{
  using K = NoiseComponent::Kind;
  return kind_from<K>(name,
                      { { "g_density", K::g_density },
                        { "uniform", K::uniform },
                        { "laplace", K::laplace },
                        { "point_mass", K::point_mass },
                        { "gaussian", K::gaussian } },
                      "noise kind");
}

std::string
to_string(ScenarioSpec::Kind kind)
{
  switch (kind) {
    case ScenarioSpec::Kind::repeated: return "repeated";
    case ScenarioSpec::Kind::eiv: return "eiv";
    case ScenarioSpec::Kind::ica: return "ica";
    case ScenarioSpec::Kind::two_point_dependent: return "two_point_dependent";
  }
  return "?";
}

ScenarioSpec::Kind
scenario_kind_from_string(const std::string& name)
{
  using K = ScenarioSpec::Kind;
  return kind_from<K>(name,
                      { { "repeated", K::repeated },
                        { "eiv", K::eiv },
                        { "ica", K::ica },
                        { "two_point_dependent", K::two_point_dependent } },
                      "scenario kind");
}

void
SourceSpec::validate() const
{
  switch (kind) {
    case Kind::point_mass: break;
    case Kind::uniform:
    case Kind::two_point:
      if (!(hi > lo))
        throw ConfigError("signal needs lo < hi");
      if (kind == Kind::two_point && !(p >= 0.0 && p <= 1.0))
        throw ConfigError("two_point probability must lie in [0, 1]");
      break;
    case Kind::bump:
      if (!(b > 0.0))
        throw ConfigError("bump scale b must be positive");
      break;
    case Kind::h_kappa:
      if (!(kappa >= 0.5 && kappa <= 1.0) || !(x0 > 0.0))
        throw ConfigError("h_kappa signal needs kappa in [1/2, 1] and x0 > 0");
      break;
    case Kind::custom:
      if (grid_x.size() < 2 || grid_x.size() != grid_density.size())
        throw ConfigError("custom density needs matching grid_x and density of length >= 2");
      for (size_t i = 0; i < grid_x.size(); ++i) {
        if (i > 0 && !(grid_x[i] > grid_x[i - 1]))
          throw ConfigError("custom grid_x must be increasing");
        if (!(grid_density[i] >= 0.0))
          throw ConfigError("custom density must be nonnegative");
      }
      break;
  }
}

Source::Source(const SourceSpec& spec)
  : spec_(spec)
{
  spec.validate();
  using K = SourceSpec::Kind;
  switch (spec.kind) {
    case K::point_mass:
      rule_ = { { spec.loc }, { 1.0 } };
      break;
    case K::two_point:
      rule_ = { { spec.lo, spec.hi }, { 1.0 - spec.p, spec.p } };
      break;
    case K::uniform:
      rule_ = composite_gauss(64, 20, spec.lo, spec.hi);
      for (double& w : rule_.weights)
        w /= spec.hi - spec.lo;
      break;
    case K::bump: {
      rule_ = composite_gauss(64, 20, -1.0 / spec.b, 1.0 / spec.b);
      for (size_t q = 0; q < rule_.nodes.size(); ++q)
        rule_.weights[q] *= mollifier_eval(spec.b, rule_.nodes[q]);
      bump_max_ = mollifier_eval(spec.b, 0.0);
      break;
    }
    case K::h_kappa:
    case K::custom: {
      double lo = 0.0, hi = 0.0;
      std::function<double(double)> dens;
      if (spec.kind == K::h_kappa) {
        const WeightSpec w = make_weight(spec.kappa, spec.x0);
        lo = -w.support;
        hi = w.support;
        dens = [w](double x) { return h_kappa_eval(w, x); };
      } else {
        lo = spec.grid_x.front();
        hi = spec.grid_x.back();
        dens = [this](double x) { return density(x); };
      }
      if (spec.kind == K::h_kappa && spec.kappa == 1.0)
        rule_ = gauss_legendre(64, lo, hi);
      else
        rule_ = composite_gauss(256, 20, lo, hi);
      double mass = 0.0;
      for (size_t q = 0; q < rule_.nodes.size(); ++q) {
        rule_.weights[q] *= dens(rule_.nodes[q]);
        mass += rule_.weights[q];
      }
      if (!(mass > 0.0))
        throw ConfigError("signal density has zero mass");
      for (double& w : rule_.weights)
        w /= mass;
      if (spec.kind == K::custom)
        c_norm_ = 1.0 / mass;
      const size_t N = size_t(1) << 14;
      cdf_x_.resize(N);
      cdf_.resize(N);
      const double h = (hi - lo) / double(N - 1);
      double acc = 0.0;
      for (size_t i = 0; i < N; ++i) {
        cdf_x_[i] = lo + double(i) * h;
        if (i > 0) {
          const double a = cdf_x_[i - 1];
          acc += h / 6.0 * (dens(a) + 4.0 * dens(a + 0.5 * h) + dens(a + h));
        }
        cdf_[i] = acc;
      }
      for (double& c : cdf_)
        c /= acc;
      break;
    }
  }
}

bool
Source::has_density() const
{
  using K = SourceSpec::Kind;
  return spec_.kind != K::point_mass && spec_.kind != K::two_point;
}

double
Source::density(double x) const
{
  using K = SourceSpec::Kind;
  switch (spec_.kind) {
    case K::point_mass:
    case K::two_point:
      throw ConfigError("signal law has no density");
    case K::uniform:
      return (x >= spec_.lo && x <= spec_.hi) ? 1.0 / (spec_.hi - spec_.lo) : 0.0;
    case K::bump:
      return mollifier_eval(spec_.b, x);
    case K::h_kappa:
      return h_kappa_eval(make_weight(spec_.kappa, spec_.x0), x);
    case K::custom: {
      const auto& gx = spec_.grid_x;
      if (x < gx.front() || x > gx.back())
        return 0.0;
      const size_t i = std::min(size_t(std::upper_bound(gx.begin(), gx.end(), x) - gx.begin()),
                                gx.size() - 1);
      const size_t j = i == 0 ? 1 : i;
      const double t = (x - gx[j - 1]) / (gx[j] - gx[j - 1]);
      return c_norm_ * ((1.0 - t) * spec_.grid_density[j - 1] + t * spec_.grid_density[j]);
    }
  }
  return 0.0;
}

double
Source::sample(Rng& rng) const
{
  using K = SourceSpec::Kind;
  switch (spec_.kind) {
    case K::point_mass:
      return spec_.loc;
    case K::two_point:
      return rng.uniform() < spec_.p ? spec_.hi : spec_.lo;
    case K::uniform:
      return rng.uniform(spec_.lo, spec_.hi);
    case K::bump:
      for (;;) {
        const double x = rng.uniform(-1.0 / spec_.b, 1.0 / spec_.b);
        if (rng.uniform() * bump_max_ <= mollifier_eval(spec_.b, x))
          return x;
      }
    case K::h_kappa:
    case K::custom: {
      const double u = rng.uniform();
      auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      if (it == cdf_.end())
        return cdf_x_.back();
      const size_t i = std::max<size_t>(1, size_t(it - cdf_.begin()));
      const double span = cdf_[i] - cdf_[i - 1];
      const double t = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.0;
      return cdf_x_[i - 1] + t * (cdf_x_[i] - cdf_x_[i - 1]);
    }
  }
  return 0.0;
}

cplx
Source::cf(double t) const
{
  using K = SourceSpec::Kind;
  if (spec_.kind == K::uniform) {
    const double c = 0.5 * (spec_.lo + spec_.hi);
    const double w = 0.5 * (spec_.hi - spec_.lo);
    const double s = t * w;
    const double sinc = std::abs(s) < 1e-4 ? 1.0 - s * s / 6.0 : std::sin(s) / s;
    return phase(t * c) * sinc;
  }
  return rule_cf(rule_, t);
}

double
Source::mean() const
{
  double m = 0.0;
  for (size_t q = 0; q < rule_.nodes.size(); ++q)
    m += rule_.weights[q] * rule_.nodes[q];
  return m;
}

void
NoiseComponent::validate() const
{
  if (kind != Kind::point_mass && !(param > 0.0))
    throw ConfigError("noise parameter must be positive for " + to_string(kind));
}

void
ScenarioSpec::validate() const
{
  if (dims.d1 < 1 || dims.d2 < 1)
    throw ConfigError("both blocks need at least one coordinate");
  if (dims.total() > 4)
    throw ConfigError("total dimension above 4 is not supported");
  noise.first.validate();
  noise.second.validate();
  switch (kind) {
    case Kind::repeated:
      if (dims.d1 != dims.d2)
        throw ConfigError("repeated measurements need d1 = d2");
      source.validate();
      break;
    case Kind::eiv:
      if (dims.d1 != 1 || dims.d2 != 1)
        throw ConfigError("errors-in-variables needs d1 = d2 = 1");
      if (eiv_a < 0.0 || eiv_b < 0.0 || (eiv_a == 0.0 && eiv_b == 0.0))
        throw ConfigError("eiv map must be increasing (a, b >= 0, not both 0)");
      source.validate();
      break;
    case Kind::ica: {
      const int d = dims.total();
      if (A.rows() != d || A.cols() != d)
        throw ConfigError("mixing matrix must be d x d");
      if (int(sources.size()) != d)
        throw ConfigError("ica needs one source per coordinate");
      for (const auto& s : sources)
        s.validate();
      if (std::abs(A.determinant()) < 1e-12)
        throw ConfigError("mixing matrix is singular");
      for (int j = 0; j < d; ++j) {
        if (A.block(0, j, dims.d1, 1).norm() == 0.0)
          throw ConfigError("column " + std::to_string(j) + " of the first row block of A is zero");
        if (A.block(dims.d1, j, dims.d2, 1).norm() == 0.0)
          throw ConfigError("column " + std::to_string(j) +
                            " of the second row block of A is zero");
      }
      break;
    }
    case Kind::two_point_dependent:
      if (dims.d1 != 1 || dims.d2 != 1)
        throw ConfigError("two_point_dependent needs d1 = d2 = 1");
      if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError("two_point_dependent probability must lie in [0, 1]");
      break;
  }
}

Scenario::Scenario(ScenarioSpec spec)
  : spec_(std::move(spec))
{
  spec_.validate();
  if (spec_.noise.centered) {
    if (spec_.noise.first.kind == NoiseComponent::Kind::point_mass)
      spec_.noise.first.loc = 0.0;
    if (spec_.noise.second.kind == NoiseComponent::Kind::point_mass)
      spec_.noise.second.loc = 0.0;
  }
  if (spec_.kind == ScenarioSpec::Kind::ica) {
    for (const auto& s : spec_.sources)
      sources_.emplace_back(s);
    A_inv_ = spec_.A.inverse();
    det_A_ = spec_.A.determinant();
  } else if (spec_.kind != ScenarioSpec::Kind::two_point_dependent) {
    sources_.emplace_back(spec_.source);
  }
  if (spec_.noise.first.kind == NoiseComponent::Kind::g_density)
    g1_ = std::make_shared<NoiseG>(spec_.noise.first.param);
  if (spec_.noise.second.kind == NoiseComponent::Kind::g_density)
    g2_ = std::make_shared<NoiseG>(spec_.noise.second.param);
  if (!(slice_probe() > 1e-8))
    throw ConfigError("signal CF vanishes on a whole probe slice");
}

double
Scenario::noise_draw(const NoiseComponent& c, Rng& rng) const
{
  using K = NoiseComponent::Kind;
  switch (c.kind) {
    case K::g_density:
      return (&c == &spec_.noise.first ? g1_ : g2_)->sample(rng);
    case K::uniform:
      return rng.uniform(-c.param, c.param);
    case K::laplace:
      return c.param * rng.laplace();
    case K::point_mass:
      return c.loc;
    case K::gaussian:
      return c.param * rng.normal();
  }
  return 0.0;
}

cplx
Scenario::noise_cf_1d(const NoiseComponent& c, double t) const
{
  using K = NoiseComponent::Kind;
  switch (c.kind) {
    case K::g_density:
      return (&c == &spec_.noise.first ? g1_ : g2_)->cf(t);
    case K::uniform: {
      const double s = t * c.param;
      return std::abs(s) < 1e-4 ? 1.0 - s * s / 6.0 : std::sin(s) / s;
    }
    case K::laplace:
      return 1.0 / (1.0 + c.param * c.param * t * t);
    case K::point_mass:
      return phase(t * c.loc);
    case K::gaussian:
      return std::exp(-0.5 * c.param * c.param * t * t);
  }
  return 0.0;
}

SampleSet
Scenario::sample(size_t n, uint64_t seed) const
{
  if (n < 1)
    throw ConfigError("sample size must be >= 1");
  const int d1 = spec_.dims.d1, d2 = spec_.dims.d2, d = d1 + d2;
  std::vector<double> data(n * size_t(d));
  std::vector<double> x(d), s(d);
  Rng rng(seed);
  for (size_t l = 0; l < n; ++l) {
    double* row = &data[l * size_t(d)];
    switch (spec_.kind) {
      case ScenarioSpec::Kind::repeated:
        for (int a = 0; a < d1; ++a) {
          const double v = sources_[0].sample(rng);
          row[a] = v;
          row[d1 + a] = v;
        }
        break;
      case ScenarioSpec::Kind::eiv: {
        const double v = sources_[0].sample(rng);
        row[0] = v;
        row[1] = eiv_g(v);
        break;
      }
      case ScenarioSpec::Kind::ica:
        for (int j = 0; j < d; ++j)
          s[j] = sources_[j].sample(rng);
        for (int i = 0; i < d; ++i) {
          double acc = 0.0;
          for (int j = 0; j < d; ++j)
            acc += spec_.A(i, j) * s[j];
          row[i] = acc;
        }
        break;
      case ScenarioSpec::Kind::two_point_dependent: {
        const double x1 = rng.uniform() < 0.5 ? -1.0 : 1.0;
        row[0] = x1;
        row[1] = rng.uniform() < spec_.p ? x1 : -x1;
        break;
      }
    }
    for (int a = 0; a < d1; ++a)
      row[a] += noise_draw(spec_.noise.first, rng);
    for (int a = 0; a < d2; ++a)
      row[d1 + a] += noise_draw(spec_.noise.second, rng);
  }
  return SampleSet(spec_.dims, std::move(data));
}

cplx
Scenario::signal_cf(std::span<const double> t) const
{
  const int d1 = spec_.dims.d1, d = spec_.dims.total();
  if (int(t.size()) != d)
    throw std::invalid_argument("CF argument has the wrong dimension");
  switch (spec_.kind) {
    case ScenarioSpec::Kind::repeated: {
      cplx p = 1.0;
      for (int a = 0; a < d1; ++a)
        p *= sources_[0].cf(t[a] + t[d1 + a]);
      return p;
    }
    case ScenarioSpec::Kind::eiv: {
      const Rule1D& r = sources_[0].rule();
      cplx s = 0.0;
      for (size_t q = 0; q < r.nodes.size(); ++q)
        s += r.weights[q] * phase(t[0] * r.nodes[q] + t[1] * eiv_g(r.nodes[q]));
      return s;
    }
    case ScenarioSpec::Kind::ica: {
      cplx p = 1.0;
      for (int j = 0; j < d; ++j) {
        double z = 0.0;
        for (int i = 0; i < d; ++i)
          z += spec_.A(i, j) * t[i];
        p *= sources_[j].cf(z);
      }
      return p;
    }
    case ScenarioSpec::Kind::two_point_dependent:
      return spec_.p * std::cos(t[0] + t[1]) + (1.0 - spec_.p) * std::cos(t[0] - t[1]);
  }
  return 0.0;
}

cplx
Scenario::noise_cf(Block block, std::span<const double> t) const
{
  const NoiseComponent& c = block == Block::first ? spec_.noise.first : spec_.noise.second;
  cplx p = 1.0;
  for (double v : t)
    p *= noise_cf_1d(c, v);
  return p;
}

cplx
Scenario::observation_cf(std::span<const double> t) const
{
  const int d1 = spec_.dims.d1;
  return signal_cf(t) * noise_cf(Block::first, t.subspan(0, d1)) *
         noise_cf(Block::second, t.subspan(d1));
}

OracleModel
Scenario::true_cf() const
{
  auto self = std::make_shared<Scenario>(*this);
  OracleModel m;
  m.phi_R = [self](std::span<const double> t) { return self->signal_cf(t); };
  m.phi_Q1 = [self](std::span<const double> t) { return self->noise_cf(Block::first, t); };
  m.phi_Q2 = [self](std::span<const double> t) { return self->noise_cf(Block::second, t); };
  return m;
}

bool
Scenario::has_density() const
{
  if (spec_.kind != ScenarioSpec::Kind::ica)
    return false;
  for (const auto& s : sources_)
    if (!s.has_density())
      return false;
  return true;
}

double
Scenario::density(std::span<const double> x) const
{
  if (!has_density())
    throw ConfigError("this scenario has no signal density");
  const int d = spec_.dims.total();
  double p = 1.0 / std::abs(det_A_);
  for (int j = 0; j < d; ++j) {
    double s = 0.0;
    for (int i = 0; i < d; ++i)
      s += A_inv_(j, i) * x[i];
    p *= sources_[j].density(s);
  }
  return p;
}

double
Scenario::slice_probe() const
{
  const int d1 = spec_.dims.d1, d2 = spec_.dims.d2, d = d1 + d2;
  std::vector<double> probe;
  for (int k = -3; k <= 3; ++k)
    probe.push_back(0.5 * k);
  const size_t P = probe.size();
  auto count = [&](int dim) {
    size_t c = 1;
    for (int a = 0; a < dim; ++a)
      c *= P;
    return c;
  };
  auto fill = [&](size_t code, int dim, double* out) {
    for (int a = dim - 1; a >= 0; --a) {
      out[a] = probe[code % P];
      code /= P;
    }
  };
  std::vector<double> t(d);
  double worst = std::numeric_limits<double>::infinity();
  for (int side = 0; side < 2; ++side) {
    const int da = side == 0 ? d1 : d2, db = side == 0 ? d2 : d1;
    for (size_t i = 0; i < count(da); ++i) {
      double best = 0.0;
      for (size_t j = 0; j < count(db); ++j) {
        if (side == 0) {
          fill(i, d1, t.data());
          fill(j, d2, t.data() + d1);
        } else {
          fill(j, d1, t.data());
          fill(i, d2, t.data() + d1);
        }
        best = std::max(best, std::abs(signal_cf(t)));
      }
      worst = std::min(worst, best);
    }
  }
  return worst;
}

double
Scenario::noise_floor(double nu) const
{
  if (!(nu > 0.0))
    throw ConfigError("nu must be positive");
  double lo = std::numeric_limits<double>::infinity();
  for (int side = 0; side < 2; ++side) {
    const NoiseComponent& c = side == 0 ? spec_.noise.first : spec_.noise.second;
    const int dim = side == 0 ? spec_.dims.d1 : spec_.dims.d2;
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 200; ++k)
      m = std::min(m, std::abs(noise_cf_1d(c, -nu + 2.0 * nu * k / 200.0)));
    lo = std::min(lo, std::pow(m, dim));
  }
  return lo;
}

Alignment
translation_align(const DensityGrid& estimate,
                  const std::function<double(std::span<const double>)>& truth, double window,
                  double step)
{
  if (!(step > 0.0) || !(window > 0.0))
    throw ConfigError("alignment window and step must be positive");
  if (window < step)
    throw ConfigError("alignment window is smaller than its step");
  const int d = estimate.dim();
  const Lattice& lat = estimate.lattice;
  std::vector<double> x(d), y(d);
  auto error = [&](const std::vector<double>& s) {
    double acc = 0.0;
    for (size_t k = 0; k < lat.size(); ++k) {
      lat.point(k, x);
      for (int a = 0; a < d; ++a)
        y[a] = x[a] - s[a];
      const double e = estimate.values[k] - truth(y);
      acc += e * e;
    }
    return std::sqrt(acc * lat.cell_volume());
  };
  Alignment out;
  out.shift.assign(d, 0.0);
  out.raw_error = error(out.shift);
  out.error = out.raw_error;
  const int half = int(std::floor(window / step + 1e-9));
  for (int sweep = 0; sweep < 2; ++sweep)
    for (int a = 0; a < d; ++a) {
      std::vector<double> s = out.shift;
      for (int k = -half; k <= half; ++k) {
        s[a] = k * step;
        const double e = error(s);
        if (e < out.error) {
          out.error = e;
          out.shift = s;
        }
      }
    }
  return out;
}

} // namespace deconv
