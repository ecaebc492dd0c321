#include "doctest.h"

#include "core/contrast.hpp"
#include "core/minimize.hpp"
#include "core/scenarios.hpp"

#include <cmath>

using namespace deconv;

namespace {

ScenarioSpec
uniform_g(double c = 1.0)
{
  ScenarioSpec s;
  s.kind = ScenarioSpec::Kind::repeated;
  s.source.kind = SourceSpec::Kind::uniform;
  s.source.lo = -1.0;
  s.source.hi = 1.0;
  s.noise.first = { NoiseComponent::Kind::g_density, c, 0.0 };
  s.noise.second = { NoiseComponent::Kind::g_density, c, 0.0 };
  return s;
}

size_t
idx(const TaylorPoly& p, std::vector<int> e)
{
  return *p.indices().find(e);
}

const SampleSet zero_sample({ 1, 1 }, { 0.0, 0.0 });

} // namespace

TEST_CASE("empirical contrast: trivial zeros")
{
  const auto grid = make_grid(1.0, 16, QuadratureRule::gauss_legendre, { 1, 1 });
  const auto tab = ecf_on_grid(zero_sample, grid);
  CHECK(contrast_empirical(TaylorPoly::constant_one({ 1, 1 }, 4), tab, grid) == 0.0);

  // table values themselves (as a function) cancel termwise
  const GridValues ref = values_from_table(ecf_on_grid(SampleSet({ 1, 1 }, { 0.3, -0.7, 1.1, 0.2 }), grid));
  CHECK(contrast_from_values(ref, ref, grid) < 1e-30);
}

TEST_CASE("empirical contrast of 1 + a t1 t2 against a flat table is 4a^2/9")
{
  const auto grid = make_grid(1.0, 4, QuadratureRule::gauss_legendre, { 1, 1 });
  const auto tab = ecf_on_grid(zero_sample, grid);
  auto p = TaylorPoly::constant_one({ 1, 1 }, 2);
  p.set_param(idx(p, { 1, 1 }), 1.0);
  CHECK(contrast_empirical(p, tab, grid) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("oracle contrast vanishes at the truth and grows like eps^2")
{
  const Scenario sc(uniform_g());
  const auto model = sc.true_cf();
  const auto grid = make_grid(1.0, 48, QuadratureRule::gauss_legendre, { 1, 1 });
  CHECK(contrast_oracle(model.phi_R, model, grid) <= 1e-10);

  std::vector<double> lx, ly;
  for (double eps : { 1e-1, 1e-2, 1e-3 }) {
    const CfFunction pert = [&](std::span<const double> t) {
      return model.phi_R(t) + eps * t[0] * t[1];
    };
    const double v = contrast_oracle(pert, model, grid);
    CHECK(v > 0.0);
    lx.push_back(std::log(eps));
    ly.push_back(std::log(v));
  }
  const double s1 = (ly[1] - ly[0]) / (lx[1] - lx[0]);
  const double s2 = (ly[2] - ly[1]) / (lx[2] - lx[1]);
  CHECK(s1 == doctest::Approx(2.0).epsilon(0.02));
  CHECK(s2 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("grid refinement and monotonicity in nu")
{
  const Scenario sc(uniform_g());
  const auto model = sc.true_cf();
  auto p = TaylorPoly::constant_one({ 1, 1 }, 4);
  p.set_param(idx(p, { 1, 1 }), -0.2);
  p.set_param(idx(p, { 2, 0 }), -0.3);
  p.set_param(idx(p, { 2, 2 }), 0.05);
  for (int nodes : { 32, 64 }) {
    const double a = contrast_oracle(p, model, make_grid(1.0, nodes, QuadratureRule::gauss_legendre, { 1, 1 }));
    const double b =
      contrast_oracle(p, model, make_grid(1.0, 2 * nodes, QuadratureRule::gauss_legendre, { 1, 1 }));
    CHECK(std::abs(a - b) < 1e-8);
  }
  const double small = contrast_oracle(p, model, make_grid(0.5, 64, QuadratureRule::gauss_legendre, { 1, 1 }));
  const double big = contrast_oracle(p, model, make_grid(1.0, 64, QuadratureRule::gauss_legendre, { 1, 1 }));
  CHECK(small > 0.0);
  CHECK(small <= big + 1e-12);
}

TEST_CASE("point-mass noise reduces to the plain integrand")
{
  ScenarioSpec spec = uniform_g();
  spec.noise.first = { NoiseComponent::Kind::point_mass, 0.0, 0.0 };
  spec.noise.second = { NoiseComponent::Kind::point_mass, 0.0, 0.0 };
  const Scenario sc(spec);
  const auto model = sc.true_cf();
  const auto grid = make_grid(1.0, 10, QuadratureRule::gauss_legendre, { 1, 1 });
  auto p = TaylorPoly::constant_one({ 1, 1 }, 2);
  p.set_param(idx(p, { 1, 1 }), -0.2);
  p.set_param(idx(p, { 2, 0 }), -0.1);
  double hand = 0.0;
  for (size_t k = 0; k < grid.full_size(); ++k) {
    const auto t = grid.node(k);
    const double t1[2] = { t[0], 0.0 }, t2[2] = { 0.0, t[1] };
    const cplx r = model.phi_R(t) * p.evaluate(t1) * p.evaluate(t2) -
                   p.evaluate(t) * model.phi_R(t1) * model.phi_R(t2);
    hand += grid.weight(k) * std::norm(r);
  }
  CHECK(contrast_oracle(p, model, grid) == doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("linearized contrast")
{
  const auto grid = make_grid(1.5, 8, QuadratureRule::gauss_legendre, { 1, 1 });
  const auto phi = TaylorPoly::constant_one({ 1, 1 }, 2);
  CHECK(contrast_linearized(TaylorPoly({ 1, 1 }, 2), phi, grid) == 0.0);
  TaylorPoly h({ 1, 1 }, 2);
  const double a = 0.7, nu = 1.5;
  h.set_param(idx(h, { 1, 1 }), a);
  const double expect = a * a * std::pow(2.0 * nu * nu * nu / 3.0, 2);
  CHECK(contrast_linearized(h, phi, grid) == doctest::Approx(expect).epsilon(1e-13));

  Rng rng(4);
  for (int r = 0; r < 100; ++r) {
    TaylorPoly hh({ 1, 1 }, 3), pp = TaylorPoly::constant_one({ 1, 1 }, 3);
    for (size_t k = 0; k < hh.size(); ++k)
      hh.set_param(k, rng.uniform(-1, 1));
    for (size_t k = 1; k < pp.size(); ++k)
      pp.set_param(k, rng.uniform(-1, 1));
    CHECK(contrast_linearized(hh, pp, grid) >= 0.0);
  }
}

TEST_CASE("contrast gradient")
{
  const auto grid = make_grid(1.0, 4, QuadratureRule::gauss_legendre, { 1, 1 });
  const auto tab = ecf_on_grid(zero_sample, grid);
  SUBCASE("analytic value at a = 0.9")
  {
    auto p = TaylorPoly::constant_one({ 1, 1 }, 2);
    const size_t k = idx(p, { 1, 1 });
    p.set_param(k, 0.9);
    const auto g = contrast_gradient(p, tab, grid);
    CHECK(g[k] == doctest::Approx(0.8).epsilon(1e-13));
  }
  SUBCASE("zero at a global minimum")
  {
    const auto g = contrast_gradient(TaylorPoly::constant_one({ 1, 1 }, 3), tab, grid);
    for (double v : g)
      CHECK(std::abs(v) < 1e-15);
  }
  SUBCASE("central differences")
  {
    const auto g8 = make_grid(1.0, 8, QuadratureRule::gauss_legendre, { 1, 1 });
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      Rng rng(seed);
      std::vector<double> data(2 * 40);
      for (auto& v : data)
        v = rng.normal();
      const auto t = ecf_on_grid(SampleSet({ 1, 1 }, data), g8);
      auto p = TaylorPoly::constant_one({ 1, 1 }, 3);
      for (size_t k = 1; k < p.size(); ++k)
        p.set_param(k, rng.uniform(-0.5, 0.5));
      const auto g = contrast_gradient(p, t, g8);
      for (size_t k = 1; k < p.size(); ++k) {
        const double h = 1e-6;
        auto pp = p, pm = p;
        pp.set_param(k, p.param(k) + h);
        pm.set_param(k, p.param(k) - h);
        const double fd = (contrast_empirical(pp, t, g8) - contrast_empirical(pm, t, g8)) / (2 * h);
        CHECK(std::abs(fd - g[k]) <= 1e-6 * (1.0 + std::abs(fd)));
      }
    }
  }
}
