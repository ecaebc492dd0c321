#include "core/minimize.hpp"

#include "core/errors.hpp"
#include "core/rng.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace deconv {

void
MinimizeConfig::validate() const
{
  params.validate();
  if (m_opt < 1)
    throw ConfigError("m_opt must be >= 1");
  if (restarts < 1)
    throw ConfigError("restarts must be >= 1");
  if (max_iters < 1)
    throw ConfigError("max_iters must be >= 1");
  if (stall_window < 1)
    throw ConfigError("stall_window must be >= 1");
}

std::vector<double>
contrast_gradient(const TaylorPoly& poly, const GridValues& ref, const QuadratureGrid& grid,
                  const std::vector<double>* extra)
{
  const auto basis = GridBasis::get(grid, poly.dims(), poly.max_degree());
  const GridValues phi = poly_on_grid(poly, grid);
  const size_t K = grid.full_size();

  Eigen::VectorXd alpha_re(static_cast<long>(K)), alpha_im(static_cast<long>(K));
  Eigen::VectorXd beta_re = Eigen::VectorXd::Zero(static_cast<long>(grid.first_size()));
  Eigen::VectorXd beta_im = beta_re;
  Eigen::VectorXd gamma_re = Eigen::VectorXd::Zero(static_cast<long>(grid.second_size()));
  Eigen::VectorXd gamma_im = gamma_re;
  for (size_t k = 0; k < K; ++k) {
    const size_t j1 = grid.first_part(k);
    const size_t j2 = grid.second_part(k);
    const cplx a = ref.first[j1] * ref.second[j2];
    const cplx e = ref.full[k];
    const cplx r = phi.full[k] * a - e * phi.first[j1] * phi.second[j2];
    double w = grid.weight(k);
    if (extra)
      w *= (*extra)[k];
    const cplx s = w * std::conj(r);
    const cplx al = s * a;
    const cplx be = s * e * phi.second[j2];
    const cplx ga = s * e * phi.first[j1];
    const long kk = static_cast<long>(k);
    alpha_re[kk] = al.real();
    alpha_im[kk] = al.imag();
    beta_re[static_cast<long>(j1)] += be.real();
    beta_im[static_cast<long>(j1)] += be.imag();
    gamma_re[static_cast<long>(j2)] += ga.real();
    gamma_im[static_cast<long>(j2)] += ga.imag();
  }
  const Eigen::VectorXd x_re = basis->full.transpose() * alpha_re -
                               basis->first.transpose() * beta_re -
                               basis->second.transpose() * gamma_re;
  const Eigen::VectorXd x_im = basis->full.transpose() * alpha_im -
                               basis->first.transpose() * beta_im -
                               basis->second.transpose() * gamma_im;
  std::vector<double> g(poly.size());
  for (size_t k = 0; k < g.size(); ++k) {
    const long kk = static_cast<long>(k);
    g[k] = basis->odd[k] ? -2.0 * x_im[kk] : 2.0 * x_re[kk];
  }
  return g;
}

std::vector<double>
contrast_gradient(const TaylorPoly& poly, const EcfTable& ecf, const QuadratureGrid& grid)
{
  if (ecf.grid_id != grid.id())
    throw std::invalid_argument("empirical CF table was computed on a different grid");
  return contrast_gradient(poly, values_from_table(ecf), grid);
}

TaylorPoly
fit_initializer(const EcfTable& ecf, const QuadratureGrid& grid, int m,
                const UpsilonParams& params)
{
  const BlockDims dims = grid.dims();
  const auto basis = GridBasis::get(grid, dims, m);
  const long K = static_cast<long>(grid.full_size());
  const long P = basis->full.cols();

  std::vector<long> even_cols, odd_cols;
  for (long k = 1; k < P; ++k)
    (basis->odd[static_cast<size_t>(k)] ? odd_cols : even_cols).push_back(k);

  Eigen::VectorXd sw(K), re(K), im(K);
  for (long j = 0; j < K; ++j) {
    sw[j] = std::sqrt(grid.weight(static_cast<size_t>(j)));
    re[j] = sw[j] * (ecf.full[static_cast<size_t>(j)].real() - basis->full(j, 0));
    im[j] = sw[j] * ecf.full[static_cast<size_t>(j)].imag();
  }

  std::vector<double> p(static_cast<size_t>(P), 0.0);
  p[0] = 1.0;
  auto solve = [&](const std::vector<long>& cols, const Eigen::VectorXd& rhs) {
    if (cols.empty())
      return;
    Eigen::MatrixXd a(K, static_cast<long>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
      a.col(static_cast<long>(c)) = sw.cwiseProduct(basis->full.col(cols[c]));
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(rhs);
    for (size_t c = 0; c < cols.size(); ++c)
      p[static_cast<size_t>(cols[c])] = std::isfinite(x[static_cast<long>(c)]) ? x[static_cast<long>(c)] : 0.0;
  };
  solve(even_cols, re);
  solve(odd_cols, im);
  return project_upsilon(TaylorPoly(dims, m, std::move(p)), params);
}

namespace {

std::string
describe(const std::vector<double>& p)
{
  std::ostringstream os;
  os << std::setprecision(17) << "[";
  for (size_t k = 0; k < p.size(); ++k)
    os << (k ? ", " : "") << p[k];
  os << "]";
  return os.str();
}

struct Descent
{
  const GridValues& ref;
  const QuadratureGrid& grid;
  const MinimizeConfig& config;
  BlockDims dims;
  double tol;
  std::vector<double> bounds;

  TaylorPoly poly(const std::vector<double>& p) const
  {
    return TaylorPoly(dims, config.m_opt, p, TaylorPoly::Role::cf_candidate);
  }

  double value(const std::vector<double>& p) const
  {
    const double v = contrast_from_values(poly_on_grid(poly(p), grid), ref, grid);
    if (!std::isfinite(v))
      throw NumericalError("non-finite contrast value at coefficients " + describe(p));
    return v;
  }

  void project(std::vector<double>& p) const
  {
    p[0] = 1.0;
    for (size_t k = 1; k < p.size(); ++k) {
      if (std::abs(p[k]) > bounds[k])
        p[k] = std::copysign(bounds[k], p[k]);
    }
  }

  //! Runs one restart; returns the final parameters and value.
  std::pair<std::vector<double>, double> run(std::vector<double> p, int restart,
                                             std::vector<TraceEntry>& trace) const
  {
    project(p);
    double val = value(p);
    std::vector<double> g = contrast_gradient(poly(p), ref, grid);
    g[0] = 0.0;
    std::vector<double> history{ val };
    double step = 1.0;
    bool have_bb = false;
    for (int it = 0; it < config.max_iters; ++it) {
      double gn = 0.0;
      for (size_t k = 1; k < g.size(); ++k)
        gn += g[k] * g[k];
      gn = std::sqrt(gn);
      trace.push_back({ restart, it, val, gn });
      if (gn < config.grad_tol)
        break;

      double trial = have_bb ? step : 1.0;
      std::vector<double> q(p.size());
      double fq = 0.0;
      bool accepted = false;
      for (int h = 0; h <= config.max_halvings; ++h, trial *= 0.5) {
        for (size_t k = 0; k < p.size(); ++k)
          q[k] = p[k] - trial * g[k];
        project(q);
        if (config.admissible && !config.admissible(poly(q)))
          continue;
        double decrease = 0.0;
        for (size_t k = 0; k < p.size(); ++k)
          decrease += g[k] * (q[k] - p[k]);
        if (decrease >= 0.0)
          break;
        fq = value(q);
        if (fq <= val + config.armijo * decrease) {
          accepted = true;
          break;
        }
      }
      if (!accepted)
        break;

      std::vector<double> gq = contrast_gradient(poly(q), ref, grid);
      gq[0] = 0.0;
      double ss = 0.0, sy = 0.0;
      for (size_t k = 1; k < p.size(); ++k) {
        const double s = q[k] - p[k];
        ss += s * s;
        sy += s * (gq[k] - g[k]);
      }
      if (sy > 0.0 && std::isfinite(ss / sy)) {
        step = ss / sy;
        have_bb = true;
      } else {
        step = 2.0 * trial;
        have_bb = true;
      }
      p.swap(q);
      g.swap(gq);
      val = fq;
      history.push_back(val);
      const size_t w = static_cast<size_t>(config.stall_window);
      if (history.size() > w && history[history.size() - 1 - w] - val < tol)
        break;
    }
    return { p, val };
  }
};

} // namespace

MinimizeResult
minimize_contrast(const EcfTable& ecf, const QuadratureGrid& grid, const MinimizeConfig& config)
{
  config.validate();
  if (ecf.grid_id != grid.id())
    throw std::invalid_argument("empirical CF table was computed on a different grid");
  const GridValues ref = values_from_table(ecf);
  const BlockDims dims = grid.dims();

  double tol = config.tol;
  if (!(tol > 0.0))
    tol = ecf.n > 0 ? 1.0 / static_cast<double>(ecf.n) : 1e-12;

  const auto idx = MultiIndexSet::get(dims.total(), config.m_opt);
  std::vector<double> bounds(idx->size(), 1.0);
  for (size_t k = 1; k < bounds.size(); ++k)
    bounds[k] = upsilon_bound(idx->order(k), config.params);

  Descent descent{ ref, grid, config, dims, tol, bounds };

  MinimizeResult result;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_p;
  for (int r = 0; r < config.restarts; ++r) {
    std::vector<double> start;
    if (r == 0) {
      const TaylorPoly init = fit_initializer(ecf, grid, config.m_opt, config.params);
      start.assign(init.params().begin(), init.params().end());
    } else {
      Rng rng(stream_seed(config.seed, static_cast<uint64_t>(r)));
      start.assign(bounds.size(), 1.0);
      for (size_t k = 1; k < start.size(); ++k)
        start[k] = rng.uniform(-bounds[k], bounds[k]);
    }
    if (config.admissible && !config.admissible(descent.poly(start)))
      continue;
    auto [p, val] = descent.run(std::move(start), r, result.trace);
    ++result.restarts_used;
    if (val < best) {
      best = val;
      best_p = std::move(p);
      result.restart = r;
    }
  }
  if (best_p.empty())
    throw NumericalError("no admissible starting point for the contrast minimization");
  result.estimate = descent.poly(best_p);
  result.value = contrast_empirical(result.estimate, ecf, grid);
  return result;
}

void
write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace)
{
  os << "restart,iter,value,grad_norm\n" << std::setprecision(17);
  for (const auto& e : trace)
    os << e.restart << "," << e.iter << "," << e.value << "," << e.grad_norm << "\n";
}

} // namespace deconv
