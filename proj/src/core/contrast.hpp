#pragma once

#include "core/ecf.hpp"
#include "core/quadrature.hpp"
#include "core/taylor.hpp"

#include <Eigen/Dense>

#include <memory>

namespace deconv {

//! True model: signal CF on R^d and the two noise-block CFs.
struct OracleModel
{
  CfFunction phi_R;
  CfFunction phi_Q1;
  CfFunction phi_Q2;
};

QuadratureGrid make_grid(double nu, int nodes_per_axis, QuadratureRule rule, BlockDims dims);

//! Monomials of a (dims, max_degree) TaylorPoly tabulated on a grid. Column k
//! is prod_a t_a^{i_a} for the k-th multi-index; the block tables hold the
//! monomial at (t1, 0) resp. (0, t2), which is zero unless the index lives on
//! that block. Shared through a cache keyed by (grid id, dims, degree).
struct GridBasis
{
  Eigen::MatrixXd full;
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;
  std::vector<char> odd;

  static std::shared_ptr<const GridBasis> get(const QuadratureGrid& grid, BlockDims dims,
                                              int max_degree);
};

//! Values of a function on the full grid and on its two slices.
struct GridValues
{
  std::vector<cplx> full;
  std::vector<cplx> first;
  std::vector<cplx> second;
};

GridValues poly_on_grid(const TaylorPoly& poly, const QuadratureGrid& grid);
GridValues function_on_grid(const CfFunction& f, const QuadratureGrid& grid);
GridValues values_from_table(const EcfTable& table);

//! sum_k w_k |phi a1 a2 - e phi1 phi2|^2 (times `extra[k]` when given), where
//! (e, a1, a2) are the reference values and phi the candidate.
double contrast_from_values(const GridValues& phi, const GridValues& ref,
                            const QuadratureGrid& grid,
                            const std::vector<double>* extra = nullptr);

double contrast_empirical(const TaylorPoly& poly, const EcfTable& ecf,
                          const QuadratureGrid& grid);

double contrast_oracle(const TaylorPoly& poly, const OracleModel& model,
                       const QuadratureGrid& grid);
double contrast_oracle(const CfFunction& phi, const OracleModel& model,
                       const QuadratureGrid& grid);

//! |Phi_Q1(t1) Phi_Q2(t2)|^2 on the full grid.
std::vector<double> noise_weight(const OracleModel& model, const QuadratureGrid& grid);

double contrast_linearized(const TaylorPoly& h, const TaylorPoly& phi,
                           const QuadratureGrid& grid);

} // namespace deconv
