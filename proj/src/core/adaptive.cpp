#include "core/adaptive.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace deconv {

KappaGrid
KappaGrid::standard()
{
  KappaGrid g;
  g.kappa0 = 0.55;
  for (int k = 0; k <= 9; ++k)
    g.values.push_back(0.55 + 0.05 * k);
  return g;
}

void
KappaGrid::validate() const
{
  if (values.empty())
    throw ConfigError("kappa grid is empty");
  if (!(kappa0 > 0.5 && kappa0 <= 1.0))
    throw ConfigError("kappa0 must lie in (1/2, 1]");
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.5 && values[i] <= 1.0))
      throw ConfigError("kappa grid values must lie in (1/2, 1]");
    if (values[i] < kappa0 - 1e-12)
      throw ConfigError("kappa grid values must be >= kappa0");
    if (i > 0 && !(values[i] > values[i - 1]))
      throw ConfigError("kappa grid must be strictly increasing");
  }
}

double
log_ratio(double n)
{
  if (!(n >= 16.0))
    throw ConfigError("the variance proxy needs n >= 16");
  const double ln = std::log(n);
  return ln / std::log(ln);
}

double
sigma_from_ratio(double kappa_prime, double ratio, double c_sigma, double beta)
{
  if (!(c_sigma > 0.0))
    throw ConfigError("c_sigma must be positive");
  return c_sigma * std::pow(ratio, -kappa_prime * beta);
}

double
sigma(double kappa_prime, double n, double c_sigma, double beta)
{
  return sigma_from_ratio(kappa_prime, log_ratio(n), c_sigma, beta);
}

AdaptInput
AdaptInput::from_estimates(const std::vector<SpectralEstimate>& estimates, double n, double beta,
                           double c_sigma)
{
  AdaptInput in;
  in.n = n;
  in.beta = beta;
  in.c_sigma = c_sigma;
  const size_t K = estimates.size();
  in.distance.assign(K, std::vector<double>(K, 0.0));
  for (size_t i = 0; i < K; ++i)
    for (size_t j = i + 1; j < K; ++j) {
      const double v = l2_distance(estimates[i], estimates[j]);
      in.distance[i][j] = v;
      in.distance[j][i] = v;
    }
  return in;
}

namespace {

void
check_input(const AdaptInput& input, const KappaGrid& grid)
{
  grid.validate();
  if (input.distance.size() != grid.values.size())
    throw std::invalid_argument("missing estimate for some kappa of the grid");
  for (const auto& row : input.distance)
    if (row.size() != grid.values.size())
      throw std::invalid_argument("distance table is not square");
}

} // namespace

double
bias_proxy(size_t i, const AdaptInput& input, const KappaGrid& grid)
{
  check_input(input, grid);
  if (i >= grid.values.size())
    throw std::out_of_range("kappa index outside the grid");
  double a = 0.0;
  for (size_t j = 0; j <= i; ++j) {
    const double s = sigma(grid.values[j], input.n, input.c_sigma, input.beta);
    a = std::max(a, input.distance[j][i] - s);
  }
  return a;
}

Selection
select_kappa(const AdaptInput& input, const KappaGrid& grid)
{
  check_input(input, grid);
  Selection sel;
  if (grid.values.size() == 1) {
    // nothing to compare; sigma only when it is defined
    SelectionRow row{ grid.values[0], 0.0, std::nan(""), std::nan(""), true };
    if (input.n >= 16.0 && input.c_sigma > 0.0) {
      row.sigma = sigma(row.kappa, input.n, input.c_sigma, input.beta);
      row.criterion = row.sigma;
    }
    sel.rows.push_back(row);
    sel.kappa = row.kappa;
    return sel;
  }
  double best = 0.0;
  for (size_t i = 0; i < grid.values.size(); ++i) {
    SelectionRow row;
    row.kappa = grid.values[i];
    row.A = bias_proxy(i, input, grid);
    row.sigma = sigma(grid.values[i], input.n, input.c_sigma, input.beta);
    row.criterion = row.A + row.sigma;
    row.selected = false;
    if (i == 0 || row.criterion < best) {
      best = row.criterion;
      sel.index = i;
    }
    sel.rows.push_back(row);
  }
  sel.rows[sel.index].selected = true;
  sel.kappa = grid.values[sel.index];
  return sel;
}

double
calibrate_c_sigma(const std::vector<double>& split_distance, const KappaGrid& grid, double n,
                  double beta)
{
  grid.validate();
  if (split_distance.size() != grid.values.size())
    throw std::invalid_argument("one split distance per grid kappa is needed");
  const double ratio = log_ratio(n);
  double c = 0.0;
  for (size_t i = 0; i < split_distance.size(); ++i)
    c = std::max(c, split_distance[i] * std::pow(ratio, grid.values[i] * beta));
  if (!(c > 0.0))
    throw NumericalError("pilot split gave zero distances, c_sigma cannot be calibrated");
  return c;
}

void
write_selection_csv(std::ostream& os, const Selection& selection)
{
  os << "kappa,A_n,sigma_n,criterion,selected\n" << std::setprecision(17);
  for (const auto& r : selection.rows)
    os << r.kappa << "," << r.A << "," << r.sigma << "," << r.criterion << ","
       << (r.selected ? 1 : 0) << "\n";
}

} // namespace deconv
