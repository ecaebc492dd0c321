#include "core/contrast.hpp"

#include "core/errors.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace deconv {

QuadratureGrid
make_grid(double nu, int nodes_per_axis, QuadratureRule rule, BlockDims dims)
{
  return QuadratureGrid(nu, nodes_per_axis, rule, dims);
}

std::shared_ptr<const GridBasis>
GridBasis::get(const QuadratureGrid& grid, BlockDims dims, int max_degree)
{
  if (!(dims == grid.dims()))
    throw std::invalid_argument("polynomial and grid dimensions differ");

  using Key = std::tuple<std::string, int, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const GridBasis>> cache;
  const Key key{ grid.id(), dims.d1, dims.d2, max_degree };
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end())
      return it->second;
  }

  const auto idx = MultiIndexSet::get(dims.total(), max_degree);
  const int d = dims.total();
  const int d1 = dims.d1;
  const size_t P = idx->size();
  auto basis = std::make_shared<GridBasis>();
  basis->odd.resize(P);
  for (size_t k = 0; k < P; ++k)
    basis->odd[k] = static_cast<char>(idx->order(k) % 2);

  auto monomial = [&](size_t k, std::span<const double> t, int offset) {
    auto e = (*idx)[k];
    double v = 1.0;
    for (int a = 0; a < d; ++a) {
      const int p = e[static_cast<size_t>(a)];
      const int local = a - offset;
      if (local < 0 || local >= static_cast<int>(t.size())) {
        if (p != 0)
          return 0.0;
        continue;
      }
      for (int q = 0; q < p; ++q)
        v *= t[static_cast<size_t>(local)];
    }
    return v;
  };

  basis->full.resize(static_cast<long>(grid.full_size()), static_cast<long>(P));
  for (size_t j = 0; j < grid.full_size(); ++j)
    for (size_t k = 0; k < P; ++k)
      basis->full(static_cast<long>(j), static_cast<long>(k)) = monomial(k, grid.node(j), 0);
  basis->first.resize(static_cast<long>(grid.first_size()), static_cast<long>(P));
  for (size_t j = 0; j < grid.first_size(); ++j)
    for (size_t k = 0; k < P; ++k)
      basis->first(static_cast<long>(j), static_cast<long>(k)) =
        monomial(k, grid.first_node(j), 0);
  basis->second.resize(static_cast<long>(grid.second_size()), static_cast<long>(P));
  for (size_t j = 0; j < grid.second_size(); ++j)
    for (size_t k = 0; k < P; ++k)
      basis->second(static_cast<long>(j), static_cast<long>(k)) =
        monomial(k, grid.second_node(j), d1);

  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[key];
  if (!slot)
    slot = basis;
  return slot;
}

namespace {

std::vector<cplx>
combine(const Eigen::MatrixXd& m, const Eigen::VectorXd& even, const Eigen::VectorXd& odd)
{
  const Eigen::VectorXd re = m * even;
  const Eigen::VectorXd im = m * odd;
  std::vector<cplx> out(static_cast<size_t>(m.rows()));
  for (long j = 0; j < m.rows(); ++j)
    out[static_cast<size_t>(j)] = cplx(re[j], im[j]);
  return out;
}

void
require_two_blocks(BlockDims dims)
{
  if (dims.d1 < 1 || dims.d2 < 1)
    throw std::invalid_argument("contrasts need two nonempty blocks");
}

} // namespace

GridValues
poly_on_grid(const TaylorPoly& poly, const QuadratureGrid& grid)
{
  const auto basis = GridBasis::get(grid, poly.dims(), poly.max_degree());
  const size_t P = poly.size();
  Eigen::VectorXd even = Eigen::VectorXd::Zero(static_cast<long>(P));
  Eigen::VectorXd odd = Eigen::VectorXd::Zero(static_cast<long>(P));
  for (size_t k = 0; k < P; ++k)
    (basis->odd[k] ? odd : even)[static_cast<long>(k)] = poly.param(k);
  return { combine(basis->full, even, odd), combine(basis->first, even, odd),
           combine(basis->second, even, odd) };
}

GridValues
function_on_grid(const CfFunction& f, const QuadratureGrid& grid)
{
  const EcfTable t = cf_table(f, grid);
  return { t.full, t.first, t.second };
}

GridValues
values_from_table(const EcfTable& table)
{
  return { table.full, table.first, table.second };
}

double
contrast_from_values(const GridValues& phi, const GridValues& ref, const QuadratureGrid& grid,
                     const std::vector<double>* extra)
{
  require_two_blocks(grid.dims());
  const size_t K = grid.full_size();
  if (phi.full.size() != K || ref.full.size() != K)
    throw std::invalid_argument("grid value tables do not match the grid");
  std::vector<double> terms(K);
  for (size_t k = 0; k < K; ++k) {
    const size_t j1 = grid.first_part(k);
    const size_t j2 = grid.second_part(k);
    const cplx r = phi.full[k] * ref.first[j1] * ref.second[j2] -
                   ref.full[k] * phi.first[j1] * phi.second[j2];
    double v = grid.weight(k) * std::norm(r);
    if (extra)
      v *= (*extra)[k];
    terms[k] = v;
  }
  return pairwise_sum(std::span<const double>(terms));
}

double
contrast_empirical(const TaylorPoly& poly, const EcfTable& ecf, const QuadratureGrid& grid)
{
  if (ecf.grid_id != grid.id())
    throw std::invalid_argument("empirical CF table was computed on a different grid");
  return contrast_from_values(poly_on_grid(poly, grid), values_from_table(ecf), grid);
}

std::vector<double>
noise_weight(const OracleModel& model, const QuadratureGrid& grid)
{
  std::vector<double> q1(grid.first_size());
  std::vector<double> q2(grid.second_size());
  for (size_t j = 0; j < q1.size(); ++j)
    q1[j] = std::norm(model.phi_Q1(grid.first_node(j)));
  for (size_t j = 0; j < q2.size(); ++j)
    q2[j] = std::norm(model.phi_Q2(grid.second_node(j)));
  std::vector<double> w(grid.full_size());
  for (size_t k = 0; k < w.size(); ++k)
    w[k] = q1[grid.first_part(k)] * q2[grid.second_part(k)];
  return w;
}

double
contrast_oracle(const TaylorPoly& poly, const OracleModel& model, const QuadratureGrid& grid)
{
  const auto w = noise_weight(model, grid);
  return contrast_from_values(poly_on_grid(poly, grid), function_on_grid(model.phi_R, grid),
                              grid, &w);
}

double
contrast_oracle(const CfFunction& phi, const OracleModel& model, const QuadratureGrid& grid)
{
  const auto w = noise_weight(model, grid);
  return contrast_from_values(function_on_grid(phi, grid),
                              function_on_grid(model.phi_R, grid), grid, &w);
}

double
contrast_linearized(const TaylorPoly& h, const TaylorPoly& phi, const QuadratureGrid& grid)
{
  require_two_blocks(grid.dims());
  if (!(h.dims() == phi.dims()))
    throw std::invalid_argument("h and phi live in different dimensions");
  const GridValues hv = poly_on_grid(h, grid);
  const GridValues pv = poly_on_grid(phi, grid);
  std::vector<double> terms(grid.full_size());
  for (size_t k = 0; k < terms.size(); ++k) {
    const size_t j1 = grid.first_part(k);
    const size_t j2 = grid.second_part(k);
    const cplx r = hv.full[k] * pv.first[j1] * pv.second[j2] -
                   pv.full[k] * hv.first[j1] * pv.second[j2] -
                   pv.full[k] * pv.first[j1] * hv.second[j2];
    terms[k] = grid.weight(k) * std::norm(r);
  }
  return pairwise_sum(std::span<const double>(terms));
}

} // namespace deconv
