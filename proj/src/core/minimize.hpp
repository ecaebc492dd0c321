#pragma once

#include "core/contrast.hpp"
#include "core/taylor.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace deconv {

struct MinimizeConfig
{
  UpsilonParams params;
  int m_opt = 4;
  int restarts = 4;
  int max_iters = 400;
  //! Stop when the value improved by less than `tol` over `stall_window`
  //! iterations; tol <= 0 means 1/n of the ECF table.
  double tol = 0.0;
  int stall_window = 25;
  double grad_tol = 1e-9;
  double armijo = 1e-4;
  int max_halvings = 60;
  uint64_t seed = 0;
  //! Extra closed constraint on candidates; empty means none.
  std::function<bool(const TaylorPoly&)> admissible;

  void validate() const;
};

struct TraceEntry
{
  int restart;
  int iter;
  double value;
  double grad_norm;
};

struct MinimizeResult
{
  TaylorPoly estimate;
  double value = 0.0;
  int restart = 0;
  int restarts_used = 0;
  std::vector<TraceEntry> trace;
};

//! Gradient of contrast_from_values(phi, ref) with respect to the parity
//! reduced parameters of phi. `extra` weights as in contrast_from_values.
std::vector<double> contrast_gradient(const TaylorPoly& poly, const GridValues& ref,
                                      const QuadratureGrid& grid,
                                      const std::vector<double>* extra = nullptr);

std::vector<double> contrast_gradient(const TaylorPoly& poly, const EcfTable& ecf,
                                      const QuadratureGrid& grid);

//! Weighted least-squares fit of the degree-m coefficients to the table,
//! then projected on the class.
TaylorPoly fit_initializer(const EcfTable& ecf, const QuadratureGrid& grid, int m,
                           const UpsilonParams& params);

//! Multi-start projected gradient descent on the empirical contrast.
MinimizeResult minimize_contrast(const EcfTable& ecf, const QuadratureGrid& grid,
                                 const MinimizeConfig& config);

//! iter,value,grad_norm rows (restart column first).
void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace);

} // namespace deconv
