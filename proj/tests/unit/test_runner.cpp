#include "doctest.h"

#include "core/errors.hpp"
#include "core/runner.hpp"

#include <cmath>
#include <sstream>

using namespace deconv;

namespace {

ExperimentPlan
point_mass_plan()
{
  ExperimentPlan p;
  p.scenario.kind = ScenarioSpec::Kind::repeated;
  p.scenario.source.kind = SourceSpec::Kind::point_mass;
  p.scenario.noise.first = { NoiseComponent::Kind::point_mass, 0.0, 0.0 };
  p.scenario.noise.second = { NoiseComponent::Kind::point_mass, 0.0, 0.0 };
  p.n_list = { 100 };
  p.replicates = 1;
  p.kappas = { 0.75, { 0.75 } };
  p.seed = 4;
  return p;
}

ExperimentPlan
uniform_plan()
{
  ExperimentPlan p;
  p.scenario.kind = ScenarioSpec::Kind::repeated;
  p.scenario.source.kind = SourceSpec::Kind::uniform;
  p.scenario.noise.first = { NoiseComponent::Kind::g_density, 1.0, 0.0 };
  p.scenario.noise.second = { NoiseComponent::Kind::g_density, 1.0, 0.0 };
  p.n_list = { 1000, 10000, 100000 };
  p.replicates = 5;
  p.kappas = { 0.75, { 0.75 } };
  p.estimator.m_override = 4;
  p.estimator.restarts = 2;
  p.seed = 21;
  return p;
}

std::string
csv(const ExperimentReport& r)
{
  std::ostringstream os;
  write_report_csv(os, r);
  return os.str();
}

} // namespace

TEST_CASE("degenerate pipeline has zero errors")
{
  const auto rep = run(point_mass_plan());
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].status == "ok");
  CHECK(rep.rows[0].cf_error == 0.0);
  CHECK(rep.rows[0].contrast == 0.0);
}

TEST_CASE("identical plans give identical reports")
{
  auto p = uniform_plan();
  p.n_list = { 500, 2000 };
  p.replicates = 2;
  CHECK(csv(run(p)) == csv(run(p)));
  CHECK(report_summary(run(p)).dump() == report_summary(run(p)).dump());
}

TEST_CASE("cf error decreases with n")
{
  const auto rep = run(uniform_plan());
  const auto fit = fit_rate(rep, "0.75", "cf_error");
  MESSAGE("cf_error slope " << fit.slope << " [" << fit.lo << ", " << fit.hi << "]");
  CHECK(fit.slope < 0.0);
  // expected band, recorded only
  MESSAGE("in [-0.5, -0.05]: " << (fit.slope >= -0.5 && fit.slope <= -0.05));
}

TEST_CASE("rate fit on synthetic errors")
{
  const std::vector<double> n = { 1e3, 1e4, 1e5, 1e6 };
  std::vector<std::vector<double>> errs, flat;
  Rng rng(1);
  for (double v : n) {
    std::vector<double> e, f;
    for (int r = 0; r < 9; ++r) {
      e.push_back(std::pow(v, -0.25) * (1.0 + 0.01 * rng.normal()));
      f.push_back(0.3);
    }
    errs.push_back(e);
    flat.push_back(f);
  }
  CHECK(std::abs(fit_rate(n, errs, 3).slope + 0.25) <= 0.02);
  CHECK(std::abs(fit_rate(n, flat, 3).slope) < 1e-12);
}

TEST_CASE("median and aggregates")
{
  CHECK(median({ 3.0, 1.0, 2.0 }) == 2.0);
  CHECK(median({ 4.0, 1.0, 2.0, 3.0 }) == 2.5);
  std::vector<CellRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].n = 10;
    rows[i].label = "x";
    rows[i].status = i == 2 ? "failed" : "ok";
    rows[i].cf_error = i + 1.0;
  }
  const auto ag = aggregate(rows);
  REQUIRE(ag.size() == 1);
  CHECK(ag[0].ok == 2);
  CHECK(ag[0].excluded == 1);
  CHECK(ag[0].median_cf_error == 1.5);
}

TEST_CASE("plan validation")
{
  auto p = point_mass_plan();
  p.n_list.clear();
  CHECK_THROWS_AS(p.validate(), ConfigError);
  auto q = point_mass_plan();
  q.estimator.S = 0.0;
  CHECK_THROWS_AS(q.validate(), ConfigError);
}
