#pragma once

#include "core/contrast.hpp"
#include "core/ecf.hpp"
#include "core/lower_bound.hpp"
#include "core/quadrature.hpp"
#include "core/reconstruct.hpp"
#include "core/rng.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace deconv {

//! One-dimensional law used for signal coordinates and ICA sources.
struct SourceSpec
{
  enum class Kind
  {
    point_mass, //!< at `loc`
    uniform,    //!< on [lo, hi]
    two_point,  //!< lo with probability 1 - p, hi with probability p
    bump,       //!< mollifier density u_b, b = `b`
    h_kappa,    //!< h_kappa weight density (kappa, x0)
    custom      //!< tabulated density on `grid_x` (linear interpolation)
  };
  Kind kind = Kind::uniform;
  double loc = 0.0;
  double lo = -1.0;
  double hi = 1.0;
  double p = 0.5;
  double b = 1.0;
  double kappa = 0.75;
  double x0 = 1.0;
  std::vector<double> grid_x;
  std::vector<double> grid_density;

  void validate() const;
};

std::string to_string(SourceSpec::Kind kind);
SourceSpec::Kind source_kind_from_string(const std::string& name);

//! Sampler, CF and (when absolutely continuous) density of a SourceSpec.
//! `rule` is a discrete law with E f(X) ~ sum_q w_q f(x_q).
class Source
{
public:
  explicit Source(const SourceSpec& spec);

  const SourceSpec& spec() const { return spec_; }
  double sample(Rng& rng) const;
  cplx cf(double t) const;
  bool has_density() const;
  double density(double x) const;
  const Rule1D& rule() const { return rule_; }
  double mean() const;

private:
  SourceSpec spec_;
  Rule1D rule_;
  std::vector<double> cdf_x_;
  std::vector<double> cdf_;
  double bump_max_ = 0.0;
  double c_norm_ = 1.0;
};

struct NoiseComponent
{
  enum class Kind
  {
    g_density, //!< parameter c
    uniform,   //!< half width
    laplace,   //!< scale
    point_mass,
    gaussian //!< standard deviation
  };
  Kind kind = Kind::g_density;
  double param = 1.0;
  double loc = 0.0; //!< point mass location

  void validate() const;
};

std::string to_string(NoiseComponent::Kind kind);
NoiseComponent::Kind noise_kind_from_string(const std::string& name);

//! Independent noise blocks, iid coordinates within a block.
struct NoiseSpec
{
  NoiseComponent first;
  NoiseComponent second;
  bool centered = true;
};

struct ScenarioSpec
{
  enum class Kind
  {
    repeated, //!< (X + e1, X + e2), X in R^{d1} with iid coordinates
    eiv,      //!< (X + e1, g(X) + e2), g(x) = eiv_a x^3 + eiv_b x
    ica,      //!< A S + e
    two_point_dependent //!< (X1, X2) in {-1, 1}^2, P(X1 = X2) = p
  };
  Kind kind = Kind::repeated;
  BlockDims dims{ 1, 1 };
  SourceSpec source;               //!< repeated, eiv
  std::vector<SourceSpec> sources; //!< ica, one per coordinate
  Eigen::MatrixXd A;               //!< ica
  double eiv_a = 1.0;
  double eiv_b = 1.0;
  double p = 0.75; //!< two_point_dependent
  NoiseSpec noise;

  //! Throws ConfigError on inconsistent dimensions, a zero column in a block
  //! of A, or a signal CF that fails the slice probe.
  void validate() const;
};

std::string to_string(ScenarioSpec::Kind kind);
ScenarioSpec::Kind scenario_kind_from_string(const std::string& name);

class Scenario
{
public:
  explicit Scenario(ScenarioSpec spec);

  const ScenarioSpec& spec() const { return spec_; }
  BlockDims dims() const { return spec_.dims; }

  //! Rows drawn in order; per row the signal first, then block 1 noise, then
  //! block 2 noise. Rng(seed) drives everything.
  SampleSet sample(size_t n, uint64_t seed) const;

  cplx signal_cf(std::span<const double> t) const;
  cplx noise_cf(Block block, std::span<const double> t) const;
  //! Observation CF: signal CF times both noise CFs.
  cplx observation_cf(std::span<const double> t) const;
  OracleModel true_cf() const;

  bool has_density() const;
  //! Density of the signal (ica with absolutely continuous sources).
  double density(std::span<const double> x) const;

  //! min_{z1} max_{z2} |Phi_R(z1, z2)| and the mirrored quantity, on the
  //! probe grid {-1.5, -1, ..., 1.5}^{d_i}.
  double slice_probe() const;
  //! min |Phi_Q^{(i)}| over [-nu, nu]^{d_i} for both blocks (grid of 201
  //! points per axis, coordinates iid so the minimum is a power).
  double noise_floor(double nu) const;

private:
  double noise_draw(const NoiseComponent& c, Rng& rng) const;
  cplx noise_cf_1d(const NoiseComponent& c, double t) const;
  double eiv_g(double x) const { return spec_.eiv_a * x * x * x + spec_.eiv_b * x; }

  ScenarioSpec spec_;
  std::vector<Source> sources_;
  std::shared_ptr<const NoiseG> g1_;
  std::shared_ptr<const NoiseG> g2_;
  Eigen::MatrixXd A_inv_;
  double det_A_ = 1.0;
};

struct Alignment
{
  std::vector<double> shift;
  double error = 0.0;     //!< aligned L2 error
  double raw_error = 0.0; //!< at zero shift
};

//! Coordinate-wise grid search of the shift s minimizing
//! ||estimate(x) - truth(x - s)|| over s in [-window, window]^d (two sweeps).
Alignment translation_align(const DensityGrid& estimate,
                            const std::function<double(std::span<const double>)>& truth,
                            double window, double step);

} // namespace deconv
