#include "doctest.h"

#include "core/contrast.hpp"
#include "core/minimize.hpp"
#include "core/scenarios.hpp"

#include <cmath>

using namespace deconv;

namespace {

double
box_error(const TaylorPoly& p, const Scenario& sc, const QuadratureGrid& grid)
{
  double acc = 0.0;
  for (size_t k = 0; k < grid.full_size(); ++k)
    acc += grid.weight(k) * std::norm(p.evaluate(grid.node(k)) - sc.signal_cf(grid.node(k)));
  return std::sqrt(acc);
}

} // namespace

TEST_CASE("single zero sample: minimizer is the constant 1")
{
  const auto grid = make_grid(1.0, 12, QuadratureRule::gauss_legendre, { 1, 1 });
  const auto tab = ecf_on_grid(SampleSet({ 1, 1 }, { 0.0, 0.0 }), grid);
  MinimizeConfig cfg;
  cfg.params = { 0.75, 2.0 };
  cfg.seed = 3;
  const auto r = minimize_contrast(tab, grid, cfg);
  CHECK(r.value < 1e-20);
  const double t[2] = { 0.4, -0.9 };
  CHECK(std::abs(r.estimate.evaluate(t) - 1.0) < 1e-8);
}

TEST_CASE("repeated scenario: estimate within 1.5x of a random-search oracle, monotone trace")
{
  ScenarioSpec spec;
  spec.source.kind = SourceSpec::Kind::uniform;
  spec.noise.first = { NoiseComponent::Kind::g_density, 1.0, 0.0 };
  spec.noise.second = { NoiseComponent::Kind::g_density, 1.0, 0.0 };
  const Scenario sc(spec);
  const auto samples = sc.sample(10000, 42);
  const auto grid = make_grid(1.0, 24, QuadratureRule::gauss_legendre, { 1, 1 });
  const auto tab = ecf_on_grid(samples, grid);
  MinimizeConfig cfg;
  cfg.params = { 0.75, 2.0 };
  cfg.m_opt = 4;
  cfg.seed = 9;
  const auto r = minimize_contrast(tab, grid, cfg);

  // trace: per restart the final value never exceeds the first
  for (int rs = 0; rs < r.restarts_used; ++rs) {
    double first = -1, last = -1;
    for (const auto& e : r.trace)
      if (e.restart == rs) {
        if (first < 0)
          first = e.value;
        last = e.value;
      }
    CHECK(last <= first);
  }

  // random search over the same coefficient box, best contrast wins
  Rng rng(123);
  TaylorPoly best;
  double best_val = INFINITY;
  auto cand = TaylorPoly::constant_one({ 1, 1 }, 4);
  for (int it = 0; it < 20000; ++it) {
    for (size_t k = 1; k < cand.size(); ++k) {
      const double b = upsilon_bound(cand.indices().order(k), cfg.params);
      cand.set_param(k, rng.uniform(-b, b));
    }
    const double v = contrast_empirical(cand, tab, grid);
    if (v < best_val) {
      best_val = v;
      best = cand;
    }
  }
  CHECK(r.value <= best_val);
  const double threshold = 1.5 * box_error(best, sc, grid);
  MESSAGE("estimate error " << box_error(r.estimate, sc, grid) << ", threshold " << threshold);
  CHECK(box_error(r.estimate, sc, grid) <= threshold);
}

TEST_CASE("initializer lands in the class")
{
  const auto grid = make_grid(1.0, 10, QuadratureRule::gauss_legendre, { 1, 1 });
  Rng rng(1);
  std::vector<double> data(2 * 500);
  for (auto& v : data)
    v = rng.normal();
  const auto tab = ecf_on_grid(SampleSet({ 1, 1 }, data), grid);
  const UpsilonParams par{ 0.75, 2.0 };
  const auto p = fit_initializer(tab, grid, 4, par);
  CHECK(in_upsilon(p, par, 1e-12));
  CHECK(p.coeff(0) == cplx(1.0, 0.0));
}
