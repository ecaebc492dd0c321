#include "core/config.hpp"

#include "core/errors.hpp"

#include <cmath>

namespace deconv {

using nlohmann::json;

ConfigObject::ConfigObject(const json& j, std::string path)
  : j_(j)
  , path_(std::move(path))
{
  if (!j_.is_object())
    throw ConfigError((path_.empty() ? std::string("config") : path_) + " must be a JSON object");
}

std::string
ConfigObject::key_path(const std::string& key) const
{
  return path_.empty() ? key : path_ + "." + key;
}

bool
ConfigObject::has(const std::string& key) const
{
  return j_.contains(key) && !j_.at(key).is_null();
}

const json&
ConfigObject::raw(const std::string& key) const
{
  used_.insert(key);
  if (!j_.contains(key))
    throw ConfigError("missing key " + key_path(key));
  return j_.at(key);
}

double
ConfigObject::number(const std::string& key) const
{
  const json& v = raw(key);
  if (!v.is_number())
    throw ConfigError(key_path(key) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    throw ConfigError(key_path(key) + " must be finite");
  return x;
}

double
ConfigObject::number(const std::string& key, double fallback) const
{
  used_.insert(key);
  return has(key) ? number(key) : fallback;
}

int
ConfigObject::integer(const std::string& key) const
{
  const json& v = raw(key);
  if (!v.is_number_integer())
    throw ConfigError(key_path(key) + " must be an integer");
  return v.get<int>();
}

int
ConfigObject::integer(const std::string& key, int fallback) const
{
  used_.insert(key);
  return has(key) ? integer(key) : fallback;
}

uint64_t
ConfigObject::seed(const std::string& key, uint64_t fallback) const
{
  used_.insert(key);
  if (!has(key))
    return fallback;
  const json& v = raw(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError(key_path(key) + " must be a nonnegative integer");
  return v.get<uint64_t>();
}

bool
ConfigObject::boolean(const std::string& key, bool fallback) const
{
  used_.insert(key);
  if (!has(key))
    return fallback;
  const json& v = raw(key);
  if (!v.is_boolean())
    throw ConfigError(key_path(key) + " must be true or false");
  return v.get<bool>();
}

std::string
ConfigObject::string(const std::string& key) const
{
  const json& v = raw(key);
  if (!v.is_string())
    throw ConfigError(key_path(key) + " must be a string");
  return v.get<std::string>();
}

std::string
ConfigObject::string(const std::string& key, const std::string& fallback) const
{
  used_.insert(key);
  return has(key) ? string(key) : fallback;
}

std::vector<double>
ConfigObject::numbers(const std::string& key) const
{
  const json& v = raw(key);
  if (!v.is_array())
    throw ConfigError(key_path(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number())
      throw ConfigError(key_path(key) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

ConfigObject
ConfigObject::object(const std::string& key) const
{
  return ConfigObject(raw(key), key_path(key));
}

void
ConfigObject::finish() const
{
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (!used_.count(it.key()))
      throw ConfigError("unknown key " + key_path(it.key()));
}

namespace {

SourceSpec
parse_source(const ConfigObject& o)
{
  SourceSpec s;
  s.kind = source_kind_from_string(o.string("kind"));
  using K = SourceSpec::Kind;
  switch (s.kind) {
    case K::point_mass:
      s.loc = o.number("loc", 0.0);
      break;
    case K::uniform:
      s.lo = o.number("lo", -1.0);
      s.hi = o.number("hi", 1.0);
      break;
    case K::two_point:
      s.lo = o.number("lo", -1.0);
      s.hi = o.number("hi", 1.0);
      s.p = o.number("p", 0.5);
      break;
    case K::bump:
      s.b = o.number("b", 1.0);
      break;
    case K::h_kappa:
      s.kappa = o.number("kappa");
      s.x0 = o.number("x0", 1.0);
      break;
    case K::custom:
      s.grid_x = o.numbers("x");
      s.grid_density = o.numbers("density");
      break;
  }
  o.finish();
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(o.key_path("kind") + ": " + e.what());
  }
  return s;
}

NoiseComponent
parse_noise_component(const ConfigObject& o)
{
  NoiseComponent c;
  c.kind = noise_kind_from_string(o.string("kind"));
  if (c.kind == NoiseComponent::Kind::point_mass)
    c.loc = o.number("loc", 0.0);
  else
    c.param = o.number("param");
  o.finish();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(o.key_path("param") + ": " + e.what());
  }
  return c;
}

Lattice
parse_lattice(const ConfigObject& o, int d)
{
  const double lo = o.number("min");
  const double hi = o.number("max");
  const int pts = o.integer("points");
  o.finish();
  if (pts < 2 || !(hi > lo))
    throw ConfigError(o.key_path("points") + ": lattice needs points >= 2 and max > min");
  return Lattice::cube(d, lo, hi, pts);
}

KappaGrid
parse_kappa_grid(const ConfigObject& o, const std::string& key, bool strict)
{
  KappaGrid g;
  g.values = o.numbers(key);
  if (g.values.empty())
    throw ConfigError(o.key_path(key) + " is empty");
  g.kappa0 = o.number("kappa0", g.values.front());
  for (double k : g.values)
    if (!(k > 0.0 && k <= 1.0))
      throw ConfigError(o.key_path(key) + ": kappa must lie in (0, 1]");
  if (strict) {
    try {
      g.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(o.key_path(key) + ": " + e.what());
    }
  }
  return g;
}

void
check_kappa(const ConfigObject& o, const std::string& key, double kappa)
{
  if (!(kappa > 0.0 && kappa <= 1.0))
    throw ConfigError(o.key_path(key) + " must lie in (0, 1]");
}

void
check_c_kappa(const ConfigObject& o, const EstimatorSettings& e, double kappa, int d)
{
  if (e.c_kappa > 0.0 && e.c_kappa > c_kappa_cap(kappa, e.nu_est, d))
    throw ConfigError(o.key_path("estimator.c_kappa") + " exceeds its cap " +
                      std::to_string(c_kappa_cap(kappa, e.nu_est, d)));
}

BlockDims
parse_dims(const ConfigObject& o)
{
  BlockDims d{ o.integer("d1", 1), o.integer("d2", 1) };
  if (d.d1 < 1 || d.d2 < 1 || d.total() > 4)
    throw ConfigError(o.key_path("d1") + ": need d1, d2 >= 1 and d1 + d2 <= 4");
  return d;
}

} // namespace

ScenarioSpec
parse_scenario(const ConfigObject& o)
{
  ScenarioSpec s;
  s.kind = scenario_kind_from_string(o.string("kind"));
  s.dims = parse_dims(o);
  using K = ScenarioSpec::Kind;
  switch (s.kind) {
    case K::repeated:
      s.source = parse_source(o.object("signal"));
      break;
    case K::eiv:
      s.source = parse_source(o.object("signal"));
      s.eiv_a = o.number("eiv_a", 1.0);
      s.eiv_b = o.number("eiv_b", 1.0);
      break;
    case K::ica: {
      const json& A = o.raw("A");
      const int d = s.dims.total();
      if (!A.is_array() || int(A.size()) != d)
        throw ConfigError(o.key_path("A") + " must be a d x d array");
      s.A.resize(d, d);
      for (int i = 0; i < d; ++i) {
        if (!A[i].is_array() || int(A[i].size()) != d)
          throw ConfigError(o.key_path("A") + " must be a d x d array");
        for (int j = 0; j < d; ++j) {
          if (!A[i][j].is_number())
            throw ConfigError(o.key_path("A") + " entries must be numbers");
          s.A(i, j) = A[i][j].get<double>();
        }
      }
      const json& src = o.raw("sources");
      if (!src.is_array())
        throw ConfigError(o.key_path("sources") + " must be an array");
      for (size_t k = 0; k < src.size(); ++k)
        s.sources.push_back(
          parse_source(ConfigObject(src[k], o.key_path("sources") + "[" + std::to_string(k) + "]")));
      break;
    }
    case K::two_point_dependent:
      s.p = o.number("p", 0.75);
      break;
  }
  const ConfigObject noise = o.object("noise");
  s.noise.first = parse_noise_component(noise.object("first"));
  s.noise.second = parse_noise_component(noise.object("second"));
  s.noise.centered = noise.boolean("centered", true);
  noise.finish();
  o.finish();
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(o.key_path("kind") + ": " + e.what());
  }
  return s;
}

EstimatorSettings
parse_estimator(const ConfigObject& o)
{
  EstimatorSettings e;
  e.S = o.number("S", e.S);
  if (!(e.S > 0.0))
    throw ConfigError(o.key_path("S") + " must be positive");
  e.nu = o.number("nu", e.nu);
  if (!(e.nu > 0.0))
    throw ConfigError(o.key_path("nu") + " must be positive");
  e.nodes = o.integer("nodes", e.nodes);
  if (e.nodes < 2)
    throw ConfigError(o.key_path("nodes") + " must be >= 2");
  e.rule = quadrature_rule_from_string(o.string("rule", to_string(e.rule)));
  e.m_opt = o.integer("m_opt", e.m_opt);
  if (e.m_opt < 1)
    throw ConfigError(o.key_path("m_opt") + " must be >= 1");
  e.restarts = o.integer("restarts", e.restarts);
  e.max_iters = o.integer("max_iters", e.max_iters);
  if (e.restarts < 1 || e.max_iters < 1)
    throw ConfigError(o.key_path("restarts") + " and max_iters must be >= 1");
  e.tol = o.number("tol", e.tol);
  e.c_kappa = o.number("c_kappa", e.c_kappa);
  e.nu_est = o.number("nu_est", e.nu_est);
  if (!(e.nu_est > 0.0))
    throw ConfigError(o.key_path("nu_est") + " must be positive");
  e.m_override = o.integer("m_override", e.m_override);
  e.omega_override = o.number("omega_override", e.omega_override);
  if (e.m_override < 0 || e.omega_override < 0.0)
    throw ConfigError(o.key_path("m_override") + " and omega_override must be >= 0");
  o.finish();
  return e;
}

SimulateConfig
parse_simulate(const json& j)
{
  const ConfigObject o(j, "");
  SimulateConfig c;
  c.scenario = parse_scenario(o.object("scenario"));
  const int n = o.integer("n");
  if (n < 1)
    throw ConfigError("n must be >= 1");
  c.n = size_t(n);
  c.seed = o.seed("seed", 1);
  o.allow("output_dir");
  o.finish();
  return c;
}

EstimateConfig
parse_estimate(const json& j)
{
  const ConfigObject o(j, "");
  EstimateConfig c;
  c.samples = o.string("samples");
  c.dims = parse_dims(o);
  c.kappa = o.number("kappa");
  check_kappa(o, "kappa", c.kappa);
  c.estimator = o.has("estimator") ? parse_estimator(o.object("estimator")) : EstimatorSettings{};
  o.allow("estimator");
  check_c_kappa(o, c.estimator, c.kappa, c.dims.total());
  c.seed = o.seed("seed", 1);
  c.lattice = o.has("lattice") ? parse_lattice(o.object("lattice"), c.dims.total())
                               : Lattice::cube(c.dims.total(), -3.0, 3.0, 61);
  o.allow("lattice");
  o.allow("output_dir");
  o.finish();
  return c;
}

AdaptConfig
parse_adapt(const json& j)
{
  const ConfigObject o(j, "");
  AdaptConfig c;
  c.samples = o.string("samples");
  c.dims = parse_dims(o);
  c.kappas = o.has("kappas") ? parse_kappa_grid(o, "kappas", true) : KappaGrid::standard();
  o.allow("kappas");
  o.allow("kappa0");
  c.beta = o.number("beta", 1.0);
  if (!(c.beta > 0.0))
    throw ConfigError("beta must be positive");
  c.c_sigma = o.number("c_sigma", 0.0);
  c.estimator = o.has("estimator") ? parse_estimator(o.object("estimator")) : EstimatorSettings{};
  o.allow("estimator");
  for (double k : c.kappas.values)
    check_c_kappa(o, c.estimator, k, c.dims.total());
  c.seed = o.seed("seed", 1);
  c.lattice = o.has("lattice") ? parse_lattice(o.object("lattice"), c.dims.total())
                               : Lattice::cube(c.dims.total(), -3.0, 3.0, 61);
  o.allow("lattice");
  o.allow("output_dir");
  o.finish();
  return c;
}

ConjectureConfig
parse_conjecture(const json& j)
{
  const ConfigObject o(j, "");
  ConjectureConfig c;
  if (o.has("kappas")) {
    c.kappas = o.numbers("kappas");
    if (c.kappas.empty())
      throw ConfigError("kappas is empty");
    for (double k : c.kappas)
      if (!(k >= 0.5 && k <= 1.0))
        throw ConfigError("kappas must lie in [1/2, 1] for the weighted basis");
  }
  o.allow("kappas");
  c.K_max = o.integer("K_max", c.K_max);
  if (c.K_max < 1 || c.K_max > 16)
    throw ConfigError("K_max must lie in [1, 16]");
  c.x0 = o.number("x0", c.x0);
  c.x_min = o.number("x_min", c.x_min);
  c.x_max = o.number("x_max", c.x_max);
  c.points = o.integer("points", c.points);
  if (!(c.x0 > 0.0) || !(c.x_max > c.x_min) || c.points < 2)
    throw ConfigError("profile grid needs x0 > 0, x_max > x_min and points >= 2");
  c.c1 = o.number("c1", c.c1);
  c.c2 = o.number("c2", c.c2);
  c.c_b = o.number("c_b", c.c_b);
  if (!(c.c1 > 0.0) || !(c.c2 > 0.0) || !(c.c_b > 0.0))
    throw ConfigError("c1, c2 and c_b must be positive");
  o.allow("output_dir");
  o.finish();
  return c;
}

BoundsConfig
parse_bounds(const json& j)
{
  const ConfigObject o(j, "");
  BoundsConfig c;
  auto list = [&](const char* key, std::vector<double>& into) {
    if (o.has(key))
      into = o.numbers(key);
    o.allow(key);
    if (into.empty())
      throw ConfigError(std::string(key) + " is empty");
  };
  list("kappas", c.kappas);
  list("S", c.S);
  list("nu", c.nu);
  list("m", c.m);
  list("d", c.d);
  for (double k : c.kappas)
    if (!(k > 0.0 && k <= 1.0))
      throw ConfigError("kappas must lie in (0, 1]");
  for (double s : c.S)
    if (!(s > 0.0))
      throw ConfigError("S must be positive");
  for (double v : c.nu)
    if (!(v > 0.0))
      throw ConfigError("nu must be positive");
  for (double m : c.m)
    if (!(m >= 1.0 && m <= 12.0 && m == std::floor(m)))
      throw ConfigError("m must be integers in [1, 12]");
  for (double d : c.d)
    if (!(d == 1.0 || d == 2.0))
      throw ConfigError("d must be 1 or 2");
  c.members = o.integer("members", c.members);
  if (c.members < 1)
    throw ConfigError("members must be >= 1");
  c.seed = o.seed("seed", c.seed);
  o.allow("output_dir");
  o.finish();
  return c;
}

ExperimentPlan
parse_experiment(const json& j)
{
  const ConfigObject o(j, "");
  ExperimentPlan p;
  p.scenario = parse_scenario(o.object("scenario"));
  for (double n : o.numbers("n_list")) {
    if (!(n >= 1.0) || n != std::floor(n))
      throw ConfigError("n_list entries must be positive integers");
    p.n_list.push_back(size_t(n));
  }
  p.replicates = o.integer("replicates", 1);
  p.adaptive = o.boolean("adaptive", false);
  p.kappas = o.has("kappas") ? parse_kappa_grid(o, "kappas", p.adaptive) : KappaGrid::standard();
  o.allow("kappas");
  o.allow("kappa0");
  p.beta = o.number("beta", 1.0);
  p.estimator = o.has("estimator") ? parse_estimator(o.object("estimator")) : EstimatorSettings{};
  o.allow("estimator");
  for (double k : p.kappas.values)
    check_c_kappa(o, p.estimator, k, p.scenario.dims.total());
  p.seed = o.seed("seed", 1);
  if (o.has("lattice"))
    p.lattice = parse_lattice(o.object("lattice"), p.scenario.dims.total());
  o.allow("lattice");
  p.align_window = o.number("align_window", p.align_window);
  p.align_step = o.number("align_step", p.align_step);
  p.cell_budget = o.number("cell_budget", 0.0);
  o.allow("output_dir");
  o.finish();
  p.validate();
  return p;
}

json
parse_json_text(const std::string& text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

} // namespace deconv
