#pragma once

#include "core/ecf.hpp"
#include "core/taylor.hpp"

#include "json.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace deconv {

//! floor((1/(8 kappa)) log n / log log(n/4)); needs n >= 12.
int m_rule(double n, double kappa);
//! Same rule from log n, for sample sizes beyond double range.
int m_rule_from_log(double log_n, double kappa);
//! Unfloored rule value.
double m_rule_value(double log_n, double kappa);

//! min(nu_est, 2 kappa exp(-(3d+5)/2)).
double c_kappa_cap(double kappa, double nu_est, int d);

//! c_kappa m^kappa / S; throws ConfigError when c_kappa exceeds its cap.
double omega_rule(int m, double kappa, double S, double c_kappa, double nu_est, int d);

struct TuningRules
{
  double kappa = 0.0;
  double n = 0.0;
  double S = 0.0;
  double c_kappa = 0.0;
  int m = 0;
  double omega = 0.0;
  bool m_overridden = false;
};

//! Theoretical m unless m_override > 0; c_kappa <= 0 selects the cap.
TuningRules make_tuning(double n, double kappa, double S, double c_kappa, double nu_est,
                        int d, int m_override = 0);

//! Regular lattice; axis a has count[a] points min[a] + j step[a].
struct Lattice
{
  std::vector<double> min;
  std::vector<double> step;
  std::vector<int> count;

  static Lattice cube(int d, double lo, double hi, int count);
  int dim() const { return static_cast<int>(min.size()); }
  size_t size() const;
  double cell_volume() const;
  //! Coordinates of point k, axis 0 most significant.
  void point(size_t k, std::span<double> x) const;
  bool operator==(const Lattice&) const = default;
};

struct DensityGrid
{
  Lattice lattice;
  std::vector<double> values;

  int dim() const { return lattice.dim(); }
  bool operator==(const DensityGrid&) const = default;
};

//! int_{-omega}^{omega} t^k exp(-i t x) dt for k = 0..k_max.
std::vector<std::complex<long double>> fourier_moments(int k_max, double omega, double x);

//! (2 pi)^{-d} int_{[-omega, omega]^d} exp(-i t.x) poly(t) dt at one point.
double invert_at(const TaylorPoly& poly, double omega, std::span<const double> x);

DensityGrid invert(const TaylorPoly& poly, double omega, const Lattice& lattice);

//! Estimate kept in Fourier form: the density is the inversion of `poly`
//! over the box [-omega, omega]^d.
struct SpectralEstimate
{
  TaylorPoly poly;
  double omega = 0.0;
};

//! Squared L2 distances. The spectral form is exact (Plancherel with
//! closed-form box moments); lattice forms are Riemann sums.
double l2_distance_sq(const SpectralEstimate& a, const SpectralEstimate& b);
double l2_distance_sq(const DensityGrid& a, const DensityGrid& b);
double l2_distance_sq(const DensityGrid& a, const std::function<double(std::span<const double>)>& f);

double l2_distance(const SpectralEstimate& a, const SpectralEstimate& b);
double l2_distance(const DensityGrid& a, const DensityGrid& b);
double l2_distance(const DensityGrid& a, const std::function<double(std::span<const double>)>& f);

//! (2 pi)^{-d} int_box |poly|^2 for the box [-omega, omega]^d.
double spectral_norm_sq(const SpectralEstimate& a);

struct SmoothnessResult
{
  double value = 0.0;
  //! Share of the integral coming from the shell |t|_inf > 0.9 radius.
  double shell_fraction = 0.0;
  bool tail_flag = false;
};

//! int_{|t|_inf <= radius} |phi(t)|^2 (1 + |t|^2)^beta dt by composite Gauss.
SmoothnessResult smoothness_integral(const CfFunction& phi, int d, double beta, double radius,
                                     int panels = 16, int order = 16);

DensityGrid clip_nonneg(const DensityGrid& grid);

struct DensityMeta
{
  double omega = 0.0;
  int m = 0;
  double kappa = 0.0;
  double n = 0.0;
  uint64_t seed = 0;
};

//! CSV x1..xd,value plus a JSON sidecar with the lattice and `meta`.
void write_density(const std::string& csv_path, const std::string& json_path,
                   const DensityGrid& grid, const DensityMeta& meta);
DensityGrid read_density(const std::string& csv_path, const std::string& json_path,
                         DensityMeta* meta = nullptr);
nlohmann::json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const nlohmann::json& j);

} // namespace deconv
