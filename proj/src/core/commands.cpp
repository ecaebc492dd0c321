#include "core/commands.hpp"

#include "core/errors.hpp"
#include "core/legendre_bounds.hpp"
#include "core/weighted_basis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

namespace deconv {

namespace fs = std::filesystem;

ConjectureData
conjecture_data(const ConjectureConfig& c)
{
  ConjectureData out;
  std::vector<double> x(c.points);
  for (int i = 0; i < c.points; ++i)
    x[i] = c.x_min + (c.x_max - c.x_min) * i / (c.points - 1);
  for (double kappa : c.kappas) {
    const WeightedBasis basis = build_weighted_basis(make_weight(kappa, c.x0), c.K_max);
    out.certificates.push_back(basis.certificate);
    for (int K = 1; K <= c.K_max; ++K) {
      ConjectureRow row;
      row.kappa = kappa;
      row.K = K;
      for (Scaling s : { Scaling::stretch, Scaling::squeeze }) {
        FigurePanel p;
        p.kappa = kappa;
        p.K = K;
        p.scaling = s == Scaling::stretch ? "stretch" : "squeeze";
        std::ostringstream name;
        name << "profile_" << p.scaling << "_kappa" << kappa_label(kappa) << "_K" << std::setw(2)
             << std::setfill('0') << K;
        p.name = name.str();
        p.x = x;
        p.value = scaled_profile(basis, K, s, x);
        double sup = 0.0;
        for (double v : p.value)
          sup = std::max(sup, std::abs(v));
        (s == Scaling::stretch ? row.sup_stretch : row.sup_squeeze) = sup;
        out.panels.push_back(std::move(p));
      }
      row.intervals = interval_census(basis, K, c.c1, c.c2).count;
      const NormChain nc = norm_chain(basis, K, c.c_b * std::pow(double(K), kappa));
      row.norm_plain = nc.plain;
      row.norm_smoothed = nc.smoothed;
      out.summary.push_back(row);
    }
  }
  return out;
}

namespace {

std::string
path_in(const std::string& dir, const std::string& file)
{
  return (fs::path(dir) / file).string();
}

nlohmann::json
estimate_json(const EstimateResult& e)
{
  return { { "kappa", e.kappa },
           { "contrast", e.contrast },
           { "restart", e.restart },
           { "m", e.tuning.m },
           { "m_rule", e.tuning.m_overridden ? "override" : "theoretical" },
           { "omega", e.tuning.omega },
           { "c_kappa", e.tuning.c_kappa },
           { "poly", to_json(e.phi) } };
}

void
write_estimate(const std::string& dir, const std::string& stem, const EstimateResult& e,
               const Lattice& lattice, double n, uint64_t seed, nlohmann::json& files)
{
  write_json_file(path_in(dir, stem + ".json"), estimate_json(e));
  files.push_back(stem + ".json");
  if (e.tuning.omega > 0.0) {
    const DensityGrid g = invert(e.spectral.poly, e.spectral.omega, lattice);
    DensityMeta meta{ e.tuning.omega, e.tuning.m, e.kappa, n, seed };
    write_density(path_in(dir, stem + "_density.csv"), path_in(dir, stem + "_density.json"), g,
                  meta);
    files.push_back(stem + "_density.csv");
    files.push_back(stem + "_density.json");
  }
}

} // namespace

CommandOutcome
run_command(const std::string& name, const nlohmann::json& config, const std::string& out_dir)
{
  CommandOutcome outcome;
  nlohmann::json files = nlohmann::json::array();
  nlohmann::json extra;

  // parse before touching the output directory
  if (name == "simulate") {
    const SimulateConfig c = parse_simulate(config);
    ensure_directory(out_dir);
    const Scenario sc(c.scenario);
    const SampleSet s = sc.sample(c.n, c.seed);
    write_samples_csv(path_in(out_dir, "samples.csv"), s);
    files.push_back("samples.csv");
    outcome.message = "wrote " + std::to_string(s.size()) + " samples";
  } else if (name == "estimate") {
    const EstimateConfig c = parse_estimate(config);
    const SampleSet s = read_samples_csv(c.samples, c.dims);
    const EstimateResult e = estimate_at(s, c.estimator, c.kappa, c.seed);
    ensure_directory(out_dir);
    write_estimate(out_dir, "estimate", e, c.lattice, double(s.size()), c.seed, files);
    std::ostringstream tr;
    write_trace_csv(tr, e.trace);
    write_text_file(path_in(out_dir, "trace.csv"), tr.str());
    files.push_back("trace.csv");
    std::ostringstream msg;
    msg << std::setprecision(6) << "contrast " << e.contrast << ", m " << e.tuning.m
        << ", omega " << e.tuning.omega;
    outcome.message = msg.str();
  } else if (name == "adapt") {
    const AdaptConfig c = parse_adapt(config);
    const SampleSet s = read_samples_csv(c.samples, c.dims);
    const AdaptiveResult r = adapt(s, c.estimator, c.kappas, c.beta, c.seed, c.c_sigma);
    ensure_directory(out_dir);
    std::ostringstream sel;
    write_selection_csv(sel, r.selection);
    write_text_file(path_in(out_dir, "selection.csv"), sel.str());
    files.push_back("selection.csv");
    write_estimate(out_dir, "selected", r.estimates[r.selection.index], c.lattice,
                   double(s.size()), c.seed, files);
    extra["c_sigma"] = r.c_sigma;
    extra["selected_kappa"] = r.selection.kappa;
    std::ostringstream msg;
    msg << std::setprecision(6) << "selected kappa " << r.selection.kappa << ", c_sigma "
        << r.c_sigma;
    outcome.message = msg.str();
  } else if (name == "conjecture") {
    const ConjectureConfig c = parse_conjecture(config);
    const ConjectureData data = conjecture_data(c);
    ensure_directory(out_dir);
    emit_figure_data(data.panels, path_in(out_dir, "figures"));
    files.push_back("figures/MANIFEST.json");
    std::ostringstream os;
    os << "kappa,K,sup_stretch,sup_squeeze,intervals,norm_plain,norm_smoothed\n"
       << std::setprecision(17);
    for (const auto& r : data.summary)
      os << r.kappa << "," << r.K << "," << r.sup_stretch << "," << r.sup_squeeze << ","
         << r.intervals << "," << r.norm_plain << "," << r.norm_smoothed << "\n";
    write_text_file(path_in(out_dir, "summary.csv"), os.str());
    files.push_back("summary.csv");
    extra["certificates"] = data.certificates;
    outcome.message = std::to_string(data.panels.size()) + " profile panels";
  } else if (name == "bounds-check") {
    const BoundsConfig c = parse_bounds(config);
    std::vector<BoundReport> all;
    for (double kappa : c.kappas)
      for (double S : c.S)
        for (double nu : c.nu)
          for (double d : c.d)
            for (double m : c.m) {
              const auto r = bound_suite(kappa, S, nu, int(d), int(m), c.seed, c.members);
              all.insert(all.end(), r.begin(), r.end());
            }
    for (const auto& r : all)
      if (r.applicable && r.measured > r.bound)
        ++outcome.violations;
    ensure_directory(out_dir);
    std::ostringstream os;
    write_bound_csv(os, all);
    write_text_file(path_in(out_dir, "bounds.csv"), os.str());
    files.push_back("bounds.csv");
    extra["rows"] = all.size();
    extra["violations"] = outcome.violations;
    outcome.message = std::to_string(all.size()) + " checks, " +
                      std::to_string(outcome.violations) + " violations";
  } else if (name == "experiment") {
    const ExperimentPlan plan = parse_experiment(config);
    const ExperimentReport rep = run(plan);
    ensure_directory(out_dir);
    std::ostringstream os;
    write_report_csv(os, rep);
    write_text_file(path_in(out_dir, "report.csv"), os.str());
    write_json_file(path_in(out_dir, "summary.json"), report_summary(rep));
    files.push_back("report.csv");
    files.push_back("summary.json");
    outcome.message = std::to_string(rep.rows.size()) + " report rows";
  } else {
    throw ConfigError("unknown subcommand '" + name + "'");
  }

  write_json_file(path_in(out_dir, "config.json"), config);
  nlohmann::json manifest;
  manifest["command"] = name;
  manifest["files"] = files;
  if (!extra.is_null())
    manifest["results"] = extra;
  write_json_file(path_in(out_dir, "MANIFEST.json"), manifest);
  return outcome;
}

} // namespace deconv
