#pragma once

#include "core/reconstruct.hpp"

#include <iosfwd>
#include <vector>

namespace deconv {

struct KappaGrid
{
  double kappa0 = 0.55;
  std::vector<double> values;

  //! {0.55, 0.60, ..., 1.00}.
  static KappaGrid standard();
  void validate() const;
};

//! c_sigma (log n / log log n)^{-kappa' beta}; needs n >= 16.
double sigma(double kappa_prime, double n, double c_sigma, double beta);
//! Same with ratio = log n / log log n given directly.
double sigma_from_ratio(double kappa_prime, double ratio, double c_sigma, double beta);
double log_ratio(double n);

//! Per-kappa estimates aligned with a KappaGrid; `distance[i][j]` is the
//! L2 distance between estimates i and j.
struct AdaptInput
{
  std::vector<std::vector<double>> distance;
  double n = 0.0;
  double beta = 1.0;
  double c_sigma = 1.0;

  static AdaptInput from_estimates(const std::vector<SpectralEstimate>& estimates, double n,
                                   double beta, double c_sigma);
};

//! max(0, max_{j <= i} {distance[j][i] - sigma(kappa_j)}).
double bias_proxy(size_t i, const AdaptInput& input, const KappaGrid& grid);

struct SelectionRow
{
  double kappa;
  double A;
  double sigma;
  double criterion;
  bool selected;
};

struct Selection
{
  size_t index = 0;
  double kappa = 0.0;
  std::vector<SelectionRow> rows;
};

//! argmin of A + sigma over the grid, ties to the smallest kappa.
Selection select_kappa(const AdaptInput& input, const KappaGrid& grid);

//! max_i split_distance[i] * ratio^{kappa_i beta}, with split_distance the
//! distance between estimates fitted on the two halves of the sample.
double calibrate_c_sigma(const std::vector<double>& split_distance, const KappaGrid& grid,
                         double n, double beta);

void write_selection_csv(std::ostream& os, const Selection& selection);

} // namespace deconv
