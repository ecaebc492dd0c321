#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace deconv {

//! (i + 1/2)^{1/2} nu^{-1/2} P_i(x / nu) by the three-term recurrence. When
//! |x| > nu the value is still returned and *outside is set.
double legendre_eval(int i, double nu, double x, bool* outside = nullptr);

//! Normalized Legendre polynomials on [-nu, nu] as monomial coefficient rows.
struct LegendreBasis
{
  double nu = 1.0;
  int max_index = 0;
  //! coeffs[i][j]: coefficient of x^j in P_i^norm.
  std::vector<std::vector<double>> coeffs;

  LegendreBasis(double nu, int max_index);
  double eval(int i, double x) const;
};

//! Change of basis from monomials to tensor normalized Legendre polynomials,
//! rows and columns indexed by MultiIndexSet(d, m).
Eigen::MatrixXd change_of_basis(int m, double nu, int d);

struct SeriesValue
{
  long double value = 0.0L;
  long double remainder = 0.0L; //!< certified bound on the omitted tail
  int terms = 0;
};

//! sum_{k=1}^{terms} (k + d/kappa)^{-kappa k} u^k with a ratio-test tail bound.
//! Throws NumericalError when the tail bound exceeds 1e-15 (relative).
SeriesValue f_kappa(double u, double kappa, int d, int terms);
//! Adds terms until the tail bound is below 1e-18 relative.
SeriesValue f_kappa(double u, double kappa, int d);

//! 6 (u v u0)^{1/kappa} exp(kappa (u v u0)^{1/kappa}), u0 = (4/(3 kappa))^kappa.
long double f_kappa_envelope(double u, double kappa);

//! 1 v ((d + 4/3)/kappa)^kappa.
long double bound_x0(double kappa, int d);

//! 7 (S nu v x0)^{(d+1)/kappa} exp(kappa (S nu v x0)^{1/kappa}).
long double c_upsilon_bound(double kappa, double S, double nu, int d);

//! sum_{m >= 1} m^d x^m m^{-kappa m}, summed until the ratio-test tail is
//! negligible.
SeriesValue psi_sum(double x, double kappa, int d);
//! 6 (x v x0)^{(d+1)/kappa} exp(kappa (x v x0)^{1/kappa}).
long double psi_sum_bound(double x, double kappa, int d);

//! 2^d (S nu)^m m^{-kappa m + d} f_kappa(S nu).
long double truncation_bound(double kappa, double S, double nu, int d, int m);

//! nu^{-d/2} m^d 4^m (1/nu v 1)^m.
long double sigma1_bound(double nu, int d, int m);
//! Largest singular value of the degree <= m block of the change of basis,
//! by power iteration on B^T B.
double sigma1_power(int m, double nu, int d, int max_iter = 10000, double tol = 1e-14);

struct BoundReport
{
  std::string name;
  double kappa = 0.0;
  double S = 0.0;
  double nu = 0.0;
  int d = 0;
  int m = 0;
  double bound = 0.0;
  double measured = 0.0;
  double slack = 0.0;
  bool applicable = true;
};

//! Truncation, C_Upsilon, psi-sum and sigma_1 checks for one parameter cell.
//! Random class members use `members` draws from `seed`.
std::vector<BoundReport> bound_suite(double kappa, double S, double nu, int d, int m,
                                     uint64_t seed = 1, int members = 25);

void write_bound_csv(std::ostream& os, const std::vector<BoundReport>& reports);

} // namespace deconv
