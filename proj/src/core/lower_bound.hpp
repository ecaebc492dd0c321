#pragma once

#include "core/rng.hpp"
#include "core/weighted_basis.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace deconv {

//! c_u with int u = 1, u(x) = c_u exp(-1/(1 - x^2)) on (-1, 1).
double mollifier_constant();
//! u_b(x) = b u(b x).
double mollifier_eval(double b, double x);
//! x -> (f * u_b)(x) by Gauss quadrature over [-1/b, 1/b].
std::function<double(double)> mollify(std::function<double(double)> f, double b,
                                      int panels = 16, int order = 20);

//! Samples v[i] = f(lo + i step), zero outside, linear interpolation inside.
struct UniformGrid1D
{
  double lo = 0.0;
  double step = 1.0;
  std::vector<double> v;

  double x(size_t i) const { return lo + double(i) * step; }
  double eval(double x) const;
  double integral() const;
  double norm_sq() const;
};

UniformGrid1D sample_uniform(const std::function<double(double)>& f, double lo, double hi,
                             double step);
//! Discrete convolution with u_b sampled on the same step and rescaled to sum 1,
//! so that the l2 norm can only shrink.
UniformGrid1D convolve_mollifier(const UniformGrid1D& f, double b);

struct NormChain
{
  double plain = 0.0;    //!< ||P_K h^2||^2
  double smoothed = 0.0; //!< ||(P_K h^2) * u_b||^2
};

//! step <= 0 picks min(1e-3, 1/(20 b)).
NormChain norm_chain(const WeightedBasis& basis, int K, double b, double step = 0.0);

//! Density c_g (1 + cos cx)/(pi^2 - (cx)^2)^2 with CF supported on [-c, c].
class NoiseG
{
public:
  explicit NoiseG(double c);

  double c() const { return c_; }
  double c_g() const { return c_g_; }
  double density(double x) const;
  double cf(double t) const;
  double cdf(double x) const;
  double sample(Rng& rng) const;

private:
  double c_;
  double c_g_;
  double y_max_;
  std::vector<double> table_; //!< CDF at 2^16 equispaced points of cx
};

struct LowerBoundInstance
{
  int d1 = 1;
  int d2 = 1;
  double a = 0.25;
  double c = 1.0; //!< noise parameter of g
  double kappa = 0.7;
  double beta = 1.0;
  double n = 1e4;
  double c_K = 0.0;       //!< K_n = round((c_K/kappa) log n / log log n); 0 means c_h
  double c_b = 4.0;       //!< b_n = c_b K_n^kappa
  double alpha_scale = 1.0;
  double alpha = -1.0;    //!< >= 0 overrides the cap
  double step = 1e-3;     //!< 1-D grid step for zeta
  double env_window = 0.05;

  void validate() const;
};

struct TwoPoint
{
  LowerBoundInstance instance;
  int K_n = 0;
  double b_n = 0.0;
  double alpha_n = 0.0;
  double cap_sup = 0.0;
  double cap_l2 = 0.0;
  double cap_nonneg = 0.0;
  UniformGrid1D zeta0;
  UniformGrid1D perturbation; //!< (P_K h^2) * u_b
  UniformGrid1D zetan;
  Eigen::MatrixXd A;
  Eigen::MatrixXd A_inv;
  double det_A = 1.0;
  double min_zetan = 0.0;
  double mass_n = 0.0;

  double f0(std::span<const double> u) const;
  double fn(std::span<const double> u) const;
};

//! The mixing matrix: identity plus `a` across the first row of each
//! off-diagonal block.
Eigen::MatrixXd mixing_matrix(int d1, int d2, double a);

//! Throws NumericalError when zeta_n dips below -1e-12.
TwoPoint build_two_point(const LowerBoundInstance& instance, const WeightedBasis& basis);

struct LeCam
{
  double l2_sq = 0.0; //!< ||f0 - fn||^2
  double l1 = 0.0;    //!< ||(f0 - fn) * Q||_1, one copy
  double value = 0.0; //!< (1/4) l2_sq (1 - l1/2)_+^n
};

//! Q = g (x) g; the L1 part needs d1 = d2 = 1 and is computed on an
//! N x N grid over [-half_width, half_width]^2.
LeCam lecam_value(const TwoPoint& tp, const NoiseG& noise, double n, int N = 512,
                  double half_width = 30.0);

} // namespace deconv
