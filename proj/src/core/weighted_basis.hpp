#pragma once

#include "core/quadrature.hpp"

#include <string>
#include <vector>

namespace deconv {

//! h(x) = c_h exp(-(sqrt((1 + (x/x0)^2)/2))^{1/(1-kappa)}); kappa = 1 is the
//! limit (1/2) 1_{[-1,1]}.
struct WeightSpec
{
  double kappa = 0.75;
  double x0 = 1.0;
  double c_h = 0.0;     //!< set by make_weight
  double support = 0.0; //!< h^2 < 1e-30 * max h^2 beyond this radius

  bool indicator() const { return kappa == 1.0; }
};

WeightSpec make_weight(double kappa, double x0 = 1.0);

double h_kappa_eval(const WeightSpec& spec, double x);

//! Adaptive composite Gauss rule for integrals against h^2 on the support.
Rule1D weight_rule(const WeightSpec& spec, double rel_tol = 1e-15);

//! Orthonormal polynomials for <f, g> = int f g h^2, from the discretized
//! Stieltjes procedure. P_K is evaluated by its recurrence; `monomial[K]`
//! holds the same polynomial in the power basis.
struct WeightedBasis
{
  WeightSpec weight;
  int K_max = 0;
  //! p_{k+1} = ((x - alpha_k) p_k - beta_k p_{k-1}) / beta_{k+1}, p_0 = 1/beta_0.
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<std::vector<double>> monomial;
  //! Certificate: max |Gram - I| on an independent finer rule.
  double gram_error = 0.0;
  std::string certificate;

  //! P_0..P_{K_max} at x.
  std::vector<double> eval_all(double x) const;
  double eval(int K, double x) const;
  //! (P_K h)(x).
  double eval_weighted(int K, double x) const;
};

//! Throws NumericalError naming the first K whose orthonormality error on the
//! certifying rule exceeds `tol`.
WeightedBasis build_weighted_basis(const WeightSpec& spec, int K_max, double tol = 1e-6);

//! Gram matrix of P_0..P_K_max on a given rule (weights already include dx).
std::vector<std::vector<double>> weighted_gram(const WeightedBasis& basis, const Rule1D& rule);

enum class Scaling
{
  stretch, //!< K^{(1-kappa)/2} (P_K h)(K^{1-kappa} x)
  squeeze  //!< K^{(1-kappa)/2} (P_K h)(K^{-kappa} x)
};

std::vector<double> scaled_profile(const WeightedBasis& basis, int K, Scaling scaling,
                                   const std::vector<double>& x);

struct Interval
{
  double lo;
  double hi;
};

struct Census
{
  int count = 0;
  std::vector<Interval> intervals;
};

//! Maximal runs in [-1, 1] (grid step c1 K^{-kappa}/20) where
//! |P_K h| >= c2 K^{(kappa-1)/2}, kept when the run spans >= c1 K^{-kappa}.
//! A run of r grid points spans r * step.
Census interval_census(const WeightedBasis& basis, int K, double c1, double c2);

//! Orthonormal Hermite functions psi_0..psi_K at x.
std::vector<double> hermite_functions(int K, double x);

} // namespace deconv
