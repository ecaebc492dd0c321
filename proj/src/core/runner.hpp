#pragma once

#include "core/adaptive.hpp"
#include "core/minimize.hpp"
#include "core/reconstruct.hpp"
#include "core/scenarios.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace deconv {

//! Everything needed to turn a sample into an estimate at one kappa.
struct EstimatorSettings
{
  double S = 2.0;
  double nu = 1.0; //!< contrast box [-nu, nu]^d
  int nodes = 48;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  int m_opt = 4;
  int restarts = 4;
  int max_iters = 400;
  double tol = 0.0;
  double c_kappa = 0.0; //!< <= 0: the cap
  double nu_est = 1.0;
  int m_override = 0;          //!< > 0 replaces the theoretical m
  double omega_override = 0.0; //!< > 0 replaces the omega rule

  void validate() const;
};

struct EstimateResult
{
  double kappa = 0.0;
  TaylorPoly phi;
  double contrast = 0.0;
  int restart = 0;
  TuningRules tuning;
  SpectralEstimate spectral; //!< T_m phi on the box [-omega, omega]^d
  std::vector<TraceEntry> trace;
};

EstimateResult estimate_at(const SampleSet& samples, const EstimatorSettings& settings,
                           double kappa, uint64_t seed);
//! Same with a precomputed ECF table on `grid`.
EstimateResult estimate_at(const EcfTable& ecf, const QuadratureGrid& grid, double n,
                           const EstimatorSettings& settings, double kappa, uint64_t seed);

struct AdaptiveResult
{
  std::vector<EstimateResult> estimates; //!< one per grid kappa
  double c_sigma = 0.0;
  Selection selection;
};

//! Estimates on the whole grid, c_sigma calibrated from the two halves of
//! the sample unless `c_sigma` > 0, then the selection.
AdaptiveResult adapt(const SampleSet& samples, const EstimatorSettings& settings,
                     const KappaGrid& grid, double beta, uint64_t seed, double c_sigma = 0.0);

struct ExperimentPlan
{
  ScenarioSpec scenario;
  std::vector<size_t> n_list;
  int replicates = 1;
  KappaGrid kappas;
  double beta = 1.0;
  EstimatorSettings estimator;
  uint64_t seed = 1;
  bool adaptive = false;
  //! Density errors on this lattice when the scenario has a density.
  std::optional<Lattice> lattice;
  double align_window = 0.5;
  double align_step = 0.05;
  double cell_budget = 0.0; //!< seconds, 0 = unlimited

  void validate() const;
};

struct CellRow
{
  size_t n = 0;
  std::string label; //!< kappa as text, or "adaptive"
  double kappa = 0.0;
  int replicate = 0;
  std::string status; //!< ok, failed, timeout
  double contrast = 0.0;
  double cf_error = 0.0;
  double density_error = 0.0;
  double aligned_error = 0.0;
  int m = 0;
  double omega = 0.0;
  std::string message;
};

struct Aggregate
{
  size_t n = 0;
  std::string label;
  int ok = 0;
  int excluded = 0;
  double median_cf_error = 0.0;
  double iqr_cf_error = 0.0;
  double median_density_error = 0.0;
  double median_aligned_error = 0.0;
  double median_contrast = 0.0;
};

struct RateFit
{
  double slope = 0.0;
  double lo = 0.0; //!< 2.5% bootstrap quantile
  double hi = 0.0; //!< 97.5% bootstrap quantile
};

struct ExperimentReport
{
  std::vector<CellRow> rows;
  std::vector<Aggregate> aggregates;
  //! label -> fit of the cf_error medians (only with >= 3 sample sizes).
  std::vector<std::pair<std::string, RateFit>> cf_slopes;
};

//! Cell (n_i, replicate r) draws its sample with seed stream_seed(seed, i * 2^20 + r);
//! the minimizer seed is stream_seed(that, 1).
ExperimentReport run(const ExperimentPlan& plan);

std::vector<Aggregate> aggregate(const std::vector<CellRow>& rows);

//! Least squares slope of log(median error) against log n; the interval comes
//! from `boot` resamples of the replicates at each n.
RateFit fit_rate(const std::vector<double>& n, const std::vector<std::vector<double>>& errors,
                 uint64_t seed = 0, int boot = 200);
//! From a report, for one label and quantity ("cf_error", "density_error",
//! "aligned_error", "contrast").
RateFit fit_rate(const ExperimentReport& report, const std::string& label,
                 const std::string& quantity);

double median(std::vector<double> v);

void write_report_csv(std::ostream& os, const ExperimentReport& report);
nlohmann::json report_summary(const ExperimentReport& report);

std::string kappa_label(double kappa);

} // namespace deconv
