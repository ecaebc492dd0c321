#include "doctest.h"

#include "core/errors.hpp"
#include "core/scenarios.hpp"

#include <cmath>

using namespace deconv;

namespace {

NoiseComponent
pm()
{
  return { NoiseComponent::Kind::point_mass, 0.0, 0.0 };
}

ScenarioSpec
repeated(SourceSpec src, NoiseComponent n1, NoiseComponent n2)
{
  ScenarioSpec s;
  s.kind = ScenarioSpec::Kind::repeated;
  s.source = src;
  s.noise.first = n1;
  s.noise.second = n2;
  return s;
}

SourceSpec
uniform11()
{
  SourceSpec s;
  s.kind = SourceSpec::Kind::uniform;
  s.lo = -1.0;
  s.hi = 1.0;
  return s;
}

} // namespace

TEST_CASE("point-mass repeated scenario gives zero rows")
{
  SourceSpec src;
  src.kind = SourceSpec::Kind::point_mass;
  const Scenario sc(repeated(src, pm(), pm()));
  const auto s = sc.sample(50, 1);
  for (double v : s.data())
    CHECK(v == 0.0);
  const double t[2] = { 0.8, -1.9 };
  CHECK(sc.signal_cf(t) == cplx(1.0, 0.0));
}

TEST_CASE("noise-free ica returns the mixed sources")
{
  ScenarioSpec spec;
  spec.kind = ScenarioSpec::Kind::ica;
  spec.sources = { uniform11(), uniform11() };
  spec.sources[1].lo = -2.0;
  spec.sources[1].hi = 0.5;
  // identity mixing leaves a zero column in each row block, which the class
  // excludes; a full mixing matrix keeps the check meaningful
  spec.A.resize(2, 2);
  spec.A << 1.0, 0.5, -0.25, 1.0;
  spec.noise.first = pm();
  spec.noise.second = pm();
  spec.noise.centered = false;
  const Scenario sc(spec);
  const auto s = sc.sample(100, 17);
  Rng rng(17);
  const Source a(spec.sources[0]), b(spec.sources[1]);
  for (size_t l = 0; l < s.size(); ++l) {
    const double x0 = a.sample(rng);
    const double x1 = b.sample(rng);
    CHECK(s.row(l)[0] == 1.0 * x0 + 0.5 * x1);
    CHECK(s.row(l)[1] == -0.25 * x0 + 1.0 * x1);
  }
}

TEST_CASE("repeated uniform signal: correlation of the two coordinates")
{
  const NoiseComponent gauss{ NoiseComponent::Kind::gaussian, 0.5, 0.0 };
  const Scenario sc(repeated(uniform11(), gauss, gauss));
  const auto s = sc.sample(100000, 5);
  double m1 = 0, m2 = 0;
  for (size_t l = 0; l < s.size(); ++l) {
    m1 += s.row(l)[0];
    m2 += s.row(l)[1];
  }
  m1 /= s.size();
  m2 /= s.size();
  double c = 0, v1 = 0, v2 = 0;
  for (size_t l = 0; l < s.size(); ++l) {
    const double a = s.row(l)[0] - m1, b = s.row(l)[1] - m2;
    c += a * b;
    v1 += a * a;
    v2 += b * b;
  }
  CHECK(std::abs(c / std::sqrt(v1 * v2) - 0.57142857142857142857) < 0.02);
}

TEST_CASE("closed-form CFs")
{
  const NoiseComponent g{ NoiseComponent::Kind::g_density, 2.0, 0.0 };
  const Scenario sc(repeated(uniform11(), g, g));
  for (double t1 : { -0.7, 0.2, 1.3 })
    for (double t2 : { -0.4, 0.9 }) {
      const double t[2] = { t1, t2 };
      CHECK(std::abs(sc.signal_cf(t) - std::sin(t1 + t2) / (t1 + t2)) < 1e-14);
    }
  const double t = 0.3 * 2.0;
  CHECK(std::abs(sc.noise_cf(Block::first, std::span<const double>(&t, 1)) -
                 0.66896778400497312292) < 1e-14);
}

TEST_CASE("observation CF is the product")
{
  const NoiseComponent lap{ NoiseComponent::Kind::laplace, 0.7, 0.0 };
  const NoiseComponent uni{ NoiseComponent::Kind::uniform, 0.4, 0.0 };
  const Scenario sc(repeated(uniform11(), lap, uni));
  const double t[2] = { 0.6, -1.1 };
  const double t1 = t[0], t2 = t[1];
  const cplx expect = sc.signal_cf(t) * sc.noise_cf(Block::first, std::span<const double>(&t1, 1)) *
                      sc.noise_cf(Block::second, std::span<const double>(&t2, 1));
  CHECK(std::abs(sc.observation_cf(t) - expect) < 1e-15);
}

TEST_CASE("validation")
{
  ScenarioSpec spec;
  spec.kind = ScenarioSpec::Kind::ica;
  spec.sources = { uniform11(), uniform11() };
  spec.A = Eigen::MatrixXd::Identity(2, 2);
  spec.A(1, 1) = 0.0; // second column has nothing in block 2 or 1
  spec.A(0, 1) = 0.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.A = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  ScenarioSpec big = repeated(uniform11(), pm(), pm());
  big.dims = { 3, 3 };
  CHECK_THROWS_AS(big.validate(), ConfigError);
}

TEST_CASE("translation alignment")
{
  const auto truth = [](std::span<const double> x) {
    return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])) / (2 * M_PI);
  };
  const Lattice lat = Lattice::cube(2, -4.0, 4.0, 41);
  DensityGrid g{ lat, std::vector<double>(lat.size()) };
  std::vector<double> x(2);
  for (size_t k = 0; k < lat.size(); ++k) {
    lat.point(k, x);
    g.values[k] = truth(x);
  }
  const auto same = translation_align(g, truth, 0.5, 0.05);
  CHECK(same.error < 1e-15);
  CHECK(std::abs(same.shift[0]) < 1e-15);

  DensityGrid shifted = g;
  for (size_t k = 0; k < lat.size(); ++k) {
    lat.point(k, x);
    const double y[2] = { x[0] - 0.2, x[1] };
    shifted.values[k] = truth(y);
  }
  const auto al = translation_align(shifted, truth, 0.5, 0.05);
  CHECK(std::abs(al.shift[0] - 0.2) <= 0.025);
  CHECK(std::abs(al.shift[1]) <= 0.025);

  Rng rng(2);
  for (int r = 0; r < 20; ++r) {
    DensityGrid p = g;
    for (auto& v : p.values)
      v += 0.01 * rng.normal();
    const auto a = translation_align(p, truth, 0.3, 0.1);
    CHECK(a.error <= a.raw_error);
  }
}
