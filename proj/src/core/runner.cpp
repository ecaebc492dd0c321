#include "core/runner.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace deconv {

void
EstimatorSettings::validate() const
{
  if (!(S > 0.0))
    throw ConfigError("S must be positive");
  if (!(nu > 0.0))
    throw ConfigError("nu must be positive");
  if (nodes < 2)
    throw ConfigError("nodes must be >= 2");
  if (m_opt < 1)
    throw ConfigError("m_opt must be >= 1");
  if (restarts < 1 || max_iters < 1)
    throw ConfigError("restarts and max_iters must be >= 1");
  if (!(nu_est > 0.0))
    throw ConfigError("nu_est must be positive");
  if (m_override < 0 || omega_override < 0.0)
    throw ConfigError("overrides must be nonnegative");
}

EstimateResult
estimate_at(const EcfTable& ecf, const QuadratureGrid& grid, double n,
            const EstimatorSettings& settings, double kappa, uint64_t seed)
{
  settings.validate();
  MinimizeConfig mc;
  mc.params = { kappa, settings.S };
  mc.params.validate();
  mc.m_opt = settings.m_opt;
  mc.restarts = settings.restarts;
  mc.max_iters = settings.max_iters;
  mc.tol = settings.tol;
  mc.seed = seed;
  const MinimizeResult mr = minimize_contrast(ecf, grid, mc);

  EstimateResult r;
  r.kappa = kappa;
  r.phi = mr.estimate;
  r.contrast = mr.value;
  r.restart = mr.restart;
  r.trace = mr.trace;
  const int d = grid.dim();
  if (settings.omega_override > 0.0) {
    const int m = settings.m_override > 0 ? settings.m_override : m_rule(n, kappa);
    r.tuning.kappa = kappa;
    r.tuning.n = n;
    r.tuning.S = settings.S;
    r.tuning.c_kappa = settings.c_kappa > 0.0 ? settings.c_kappa
                                              : c_kappa_cap(kappa, settings.nu_est, d);
    r.tuning.m = m;
    r.tuning.m_overridden = settings.m_override > 0;
    r.tuning.omega = settings.omega_override;
  } else {
    r.tuning = make_tuning(n, kappa, settings.S, settings.c_kappa, settings.nu_est, d,
                           settings.m_override);
  }
  r.spectral.poly = truncate(r.phi, std::min(r.tuning.m, r.phi.max_degree()));
  r.spectral.omega = r.tuning.omega;
  return r;
}

EstimateResult
estimate_at(const SampleSet& samples, const EstimatorSettings& settings, double kappa,
            uint64_t seed)
{
  settings.validate();
  const QuadratureGrid grid(settings.nu, settings.nodes, settings.rule, samples.dims());
  const EcfTable ecf = ecf_on_grid(samples, grid);
  return estimate_at(ecf, grid, double(samples.size()), settings, kappa, seed);
}

AdaptiveResult
adapt(const SampleSet& samples, const EstimatorSettings& settings, const KappaGrid& grid,
      double beta, uint64_t seed, double c_sigma)
{
  grid.validate();
  if (!(beta > 0.0))
    throw ConfigError("beta must be positive");
  const QuadratureGrid qg(settings.nu, settings.nodes, settings.rule, samples.dims());
  const double n = double(samples.size());
  AdaptiveResult out;
  {
    const EcfTable ecf = ecf_on_grid(samples, qg);
    for (size_t i = 0; i < grid.values.size(); ++i)
      out.estimates.push_back(
        estimate_at(ecf, qg, n, settings, grid.values[i], stream_seed(seed, i)));
  }
  if (c_sigma > 0.0) {
    out.c_sigma = c_sigma;
  } else if (grid.values.size() > 1) {
    const size_t half = samples.size() / 2;
    if (half < 1)
      throw ConfigError("c_sigma calibration needs at least two observations");
    const SampleSet a = samples.subset(0, half), b = samples.subset(half, samples.size());
    const EcfTable ea = ecf_on_grid(a, qg), eb = ecf_on_grid(b, qg);
    std::vector<double> split;
    for (size_t i = 0; i < grid.values.size(); ++i) {
      // the halves use the full-sample tuning so that the boxes match
      EstimatorSettings s = settings;
      s.m_override = out.estimates[i].tuning.m;
      s.omega_override = out.estimates[i].tuning.omega;
      if (s.m_override < 1 || !(s.omega_override > 0.0)) {
        split.push_back(0.0);
        continue;
      }
      const auto ra = estimate_at(ea, qg, n, s, grid.values[i], stream_seed(seed, 1000 + i));
      const auto rb = estimate_at(eb, qg, n, s, grid.values[i], stream_seed(seed, 2000 + i));
      split.push_back(l2_distance(ra.spectral, rb.spectral));
    }
    // identical halves would give 0; keep sigma positive
    out.c_sigma = std::max(calibrate_c_sigma(split, grid, n, beta),
                           std::numeric_limits<double>::min());
  }
  std::vector<SpectralEstimate> spectral;
  for (const auto& e : out.estimates)
    spectral.push_back(e.spectral);
  const AdaptInput input = AdaptInput::from_estimates(spectral, n, beta, out.c_sigma);
  out.selection = select_kappa(input, grid);
  return out;
}

void
ExperimentPlan::validate() const
{
  scenario.validate();
  estimator.validate();
  if (adaptive) {
    kappas.validate();
  } else {
    if (kappas.values.empty())
      throw ConfigError("kappa grid is empty");
    for (double k : kappas.values)
      if (!(k > 0.0 && k <= 1.0))
        throw ConfigError("kappa values must lie in (0, 1]");
  }
  if (n_list.empty())
    throw ConfigError("n_list is empty");
  for (size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1)
      throw ConfigError("sample sizes must be >= 1");
    if (i > 0 && !(n_list[i] > n_list[i - 1]))
      throw ConfigError("n_list must be increasing");
  }
  if (replicates < 1)
    throw ConfigError("replicates must be >= 1");
  if (!(beta > 0.0))
    throw ConfigError("beta must be positive");
  if (lattice && lattice->dim() != scenario.dims.total())
    throw ConfigError("lattice dimension differs from the scenario dimension");
  if (!(align_window > 0.0) || !(align_step > 0.0) || align_window < align_step)
    throw ConfigError("alignment needs 0 < step <= window");
  if (cell_budget < 0.0)
    throw ConfigError("cell_budget must be nonnegative");
}

std::string
kappa_label(double kappa)
{
  std::ostringstream os;
  os << std::setprecision(6) << kappa;
  return os.str();
}

namespace {

double
cf_error(const TaylorPoly& phi, const Scenario& sc, const QuadratureGrid& grid)
{
  double acc = 0.0;
  for (size_t k = 0; k < grid.full_size(); ++k) {
    const auto t = grid.node(k);
    acc += grid.weight(k) * std::norm(phi.evaluate(t) - sc.signal_cf(t));
  }
  return std::sqrt(acc);
}

void
fill_density_errors(CellRow& row, const SpectralEstimate& est, const Scenario& sc,
                    const ExperimentPlan& plan)
{
  if (!plan.lattice || !sc.has_density() || !(est.omega > 0.0)) {
    row.density_error = std::nan("");
    row.aligned_error = std::nan("");
    return;
  }
  const DensityGrid g = invert(est.poly, est.omega, *plan.lattice);
  const auto truth = [&sc](std::span<const double> x) { return sc.density(x); };
  const Alignment al = translation_align(g, truth, plan.align_window, plan.align_step);
  row.density_error = al.raw_error;
  row.aligned_error = al.error;
}

double
quantile(std::vector<double> v, double q)
{
  std::sort(v.begin(), v.end());
  if (v.empty())
    return std::nan("");
  const double pos = q * double(v.size() - 1);
  const size_t i = size_t(std::floor(pos));
  const size_t j = std::min(i + 1, v.size() - 1);
  return v[i] + (pos - double(i)) * (v[j] - v[i]);
}

double
row_value(const CellRow& r, const std::string& quantity)
{
  if (quantity == "cf_error")
    return r.cf_error;
  if (quantity == "density_error")
    return r.density_error;
  if (quantity == "aligned_error")
    return r.aligned_error;
  if (quantity == "contrast")
    return r.contrast;
  throw ConfigError("unknown report quantity '" + quantity + "'");
}

} // namespace

double
median(std::vector<double> v)
{
  return quantile(std::move(v), 0.5);
}

ExperimentReport
run(const ExperimentPlan& plan)
{
  plan.validate();
  const Scenario sc(plan.scenario);
  const QuadratureGrid grid(plan.estimator.nu, plan.estimator.nodes, plan.estimator.rule,
                            sc.dims());
  ExperimentReport rep;
  for (size_t ni = 0; ni < plan.n_list.size(); ++ni) {
    const size_t n = plan.n_list[ni];
    for (int r = 0; r < plan.replicates; ++r) {
      const uint64_t cell_seed = stream_seed(plan.seed, (uint64_t(ni) << 20) + uint64_t(r));
      const auto start = std::chrono::steady_clock::now();
      std::vector<CellRow> cell;
      auto base_row = [&](double kappa, const std::string& label) {
        CellRow row;
        row.n = n;
        row.kappa = kappa;
        row.label = label;
        row.replicate = r;
        return row;
      };
      try {
        const SampleSet samples = sc.sample(n, cell_seed);
        if (plan.adaptive) {
          const AdaptiveResult ar =
            adapt(samples, plan.estimator, plan.kappas, plan.beta, stream_seed(cell_seed, 1));
          for (const auto& e : ar.estimates) {
            CellRow row = base_row(e.kappa, kappa_label(e.kappa));
            row.status = "ok";
            row.contrast = e.contrast;
            row.cf_error = cf_error(e.phi, sc, grid);
            row.m = e.tuning.m;
            row.omega = e.tuning.omega;
            fill_density_errors(row, e.spectral, sc, plan);
            cell.push_back(row);
          }
          CellRow sel = cell[ar.selection.index];
          sel.label = "adaptive";
          cell.push_back(sel);
        } else {
          const EcfTable ecf = ecf_on_grid(samples, grid);
          for (size_t k = 0; k < plan.kappas.values.size(); ++k) {
            const double kappa = plan.kappas.values[k];
            const EstimateResult e = estimate_at(ecf, grid, double(n), plan.estimator, kappa,
                                                 stream_seed(cell_seed, 1 + k));
            CellRow row = base_row(kappa, kappa_label(kappa));
            row.status = "ok";
            row.contrast = e.contrast;
            row.cf_error = cf_error(e.phi, sc, grid);
            row.m = e.tuning.m;
            row.omega = e.tuning.omega;
            fill_density_errors(row, e.spectral, sc, plan);
            cell.push_back(row);
          }
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& ex) {
        cell.clear();
        for (double kappa : plan.kappas.values) {
          CellRow row = base_row(kappa, kappa_label(kappa));
          row.status = "failed";
          row.message = ex.what();
          cell.push_back(row);
        }
      }
      const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (plan.cell_budget > 0.0 && secs > plan.cell_budget)
        for (auto& row : cell) {
          row.status = "timeout";
          row.message = "cell exceeded its wall-clock budget";
        }
      rep.rows.insert(rep.rows.end(), cell.begin(), cell.end());
    }
  }
  rep.aggregates = aggregate(rep.rows);
  if (plan.n_list.size() >= 3) {
    std::vector<std::string> labels;
    for (const auto& a : rep.aggregates)
      if (std::find(labels.begin(), labels.end(), a.label) == labels.end())
        labels.push_back(a.label);
    for (const auto& l : labels) {
      try {
        rep.cf_slopes.emplace_back(l, fit_rate(rep, l, "cf_error"));
      } catch (const NumericalError&) {
        rep.cf_slopes.emplace_back(l, RateFit{ std::nan(""), std::nan(""), std::nan("") });
      }
    }
  }
  return rep;
}

std::vector<Aggregate>
aggregate(const std::vector<CellRow>& rows)
{
  std::vector<Aggregate> out;
  std::vector<std::pair<size_t, std::string>> keys;
  for (const auto& r : rows) {
    const std::pair<size_t, std::string> key{ r.n, r.label };
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      keys.push_back(key);
  }
  for (const auto& [n, label] : keys) {
    Aggregate a;
    a.n = n;
    a.label = label;
    std::vector<double> cf, dens, al, con;
    for (const auto& r : rows) {
      if (r.n != n || r.label != label)
        continue;
      if (r.status != "ok") {
        ++a.excluded;
        continue;
      }
      ++a.ok;
      cf.push_back(r.cf_error);
      con.push_back(r.contrast);
      if (!std::isnan(r.density_error)) {
        dens.push_back(r.density_error);
        al.push_back(r.aligned_error);
      }
    }
    a.median_cf_error = median(cf);
    a.iqr_cf_error = quantile(cf, 0.75) - quantile(cf, 0.25);
    a.median_contrast = median(con);
    a.median_density_error = median(dens);
    a.median_aligned_error = median(al);
    out.push_back(a);
  }
  return out;
}

RateFit
fit_rate(const std::vector<double>& n, const std::vector<std::vector<double>>& errors,
         uint64_t seed, int boot)
{
  if (n.size() < 3 || errors.size() != n.size())
    throw ConfigError("a rate fit needs at least three sample sizes");
  auto slope_of = [&](const std::vector<double>& med) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = double(n.size());
    for (size_t i = 0; i < n.size(); ++i) {
      if (!(med[i] > 0.0))
        throw NumericalError("rate fit needs positive errors");
      const double x = std::log(n[i]), y = std::log(med[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
  };
  std::vector<double> med(n.size());
  for (size_t i = 0; i < n.size(); ++i) {
    if (errors[i].empty())
      throw NumericalError("rate fit has a sample size without errors");
    med[i] = median(errors[i]);
  }
  RateFit f;
  f.slope = slope_of(med);
  Rng rng(stream_seed(seed, 0xb007));
  std::vector<double> slopes;
  for (int b = 0; b < boot; ++b) {
    std::vector<double> m(n.size());
    for (size_t i = 0; i < n.size(); ++i) {
      std::vector<double> res(errors[i].size());
      for (double& v : res)
        v = errors[i][size_t(rng.uniform() * double(errors[i].size()))];
      m[i] = median(res);
    }
    slopes.push_back(slope_of(m));
  }
  f.lo = boot > 0 ? quantile(slopes, 0.025) : f.slope;
  f.hi = boot > 0 ? quantile(slopes, 0.975) : f.slope;
  return f;
}

RateFit
fit_rate(const ExperimentReport& report, const std::string& label, const std::string& quantity)
{
  std::vector<double> ns;
  std::vector<std::vector<double>> errs;
  for (const auto& r : report.rows) {
    if (r.label != label || r.status != "ok")
      continue;
    const double v = row_value(r, quantity);
    if (std::isnan(v))
      continue;
    if (ns.empty() || ns.back() != double(r.n)) {
      ns.push_back(double(r.n));
      errs.emplace_back();
    }
    errs.back().push_back(v);
  }
  return fit_rate(ns, errs);
}

void
write_report_csv(std::ostream& os, const ExperimentReport& report)
{
  os << "n,label,kappa,replicate,status,contrast,cf_error,density_error,aligned_error,m,omega,"
        "message\n";
  os << std::setprecision(17);
  for (const auto& r : report.rows) {
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    os << r.n << "," << r.label << "," << r.kappa << "," << r.replicate << "," << r.status
       << "," << r.contrast << "," << r.cf_error << "," << r.density_error << ","
       << r.aligned_error << "," << r.m << "," << r.omega << "," << msg << "\n";
  }
}

nlohmann::json
report_summary(const ExperimentReport& report)
{
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v))
      return nullptr;
    return v;
  };
  nlohmann::json j;
  j["aggregates"] = nlohmann::json::array();
  for (const auto& a : report.aggregates)
    j["aggregates"].push_back({ { "n", a.n },
                                { "label", a.label },
                                { "ok", a.ok },
                                { "excluded", a.excluded },
                                { "median_cf_error", num(a.median_cf_error) },
                                { "iqr_cf_error", num(a.iqr_cf_error) },
                                { "median_density_error", num(a.median_density_error) },
                                { "median_aligned_error", num(a.median_aligned_error) },
                                { "median_contrast", num(a.median_contrast) } });
  j["cf_error_slopes"] = nlohmann::json::array();
  for (const auto& [label, f] : report.cf_slopes)
    j["cf_error_slopes"].push_back(
      { { "label", label }, { "slope", num(f.slope) }, { "lo", num(f.lo) }, { "hi", num(f.hi) } });
  return j;
}

} // namespace deconv
