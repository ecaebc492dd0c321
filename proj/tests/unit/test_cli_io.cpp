#include "doctest.h"

#include "core/commands.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace deconv;
namespace fs = std::filesystem;

namespace {

fs::path
scratch(const std::string& name)
{
  const auto p = fs::temp_directory_path() / ("deconv_cli_io_" + name);
  fs::remove_all(p);
  return p;
}

nlohmann::json
point_mass_simulate()
{
  return nlohmann::json::parse(R"({
    "scenario": {"kind": "repeated", "d1": 1, "d2": 1,
                 "signal": {"kind": "point_mass", "loc": 0},
                 "noise": {"first": {"kind": "point_mass", "loc": 0},
                           "second": {"kind": "point_mass", "loc": 0}}},
    "n": 5, "seed": 1})");
}

} // namespace

TEST_CASE("figure data: empty and one panel")
{
  const auto d0 = scratch("empty");
  const auto m0 = emit_figure_data({}, d0.string());
  CHECK(m0["panels"].empty());
  size_t files = 0;
  for (const auto& e : fs::directory_iterator(d0)) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);

  const auto d1 = scratch("one");
  FigurePanel p{ "panel", 0.7, 3, "stretch", { 0.0, 0.5 }, { 1.0, 0.25 } };
  const auto m1 = emit_figure_data({ p }, d1.string());
  CHECK(m1["panels"].size() == 1);
  CHECK(read_text_file((d1 / "panel.csv").string()) ==
        "x,value,kappa,K\n0,1,0.69999999999999996,3\n0.5,0.25,0.69999999999999996,3\n");
}

TEST_CASE("config validation")
{
  auto bad = [](const char* text) { return parse_json_text(text); };
  CHECK_THROWS_AS(parse_estimate(bad(R"({"samples": "x.csv", "kappa": 1.2})")), ConfigError);
  CHECK_THROWS_AS(parse_estimate(bad(R"({"samples": "x.csv", "kappa": 0})")), ConfigError);
  CHECK_THROWS_AS(parse_estimate(bad(R"({"samples": "x.csv", "kappa": 0.7, "estimator": {"S": 0}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_estimate(bad(R"({"samples": "x.csv", "kappa": 0.7, "estimator": {"nu": -1}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_estimate(bad(R"({"samples": "x.csv", "kappa": 0.7, "estimator": {"nodes": 1}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_estimate(bad(R"({"samples": "x.csv", "kappa": 0.7, "estimator": {"c_kappa": 1}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_adapt(bad(R"({"samples": "x.csv", "kappas": []})")), ConfigError);
  CHECK_THROWS_AS(parse_estimate(bad(R"({"samples": "x.csv", "kappa": 0.7, "typo": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_json_text("{ nope"), ConfigError);
  try {
    parse_estimate(bad(R"({"samples": "x.csv", "kappa": 0.7, "estimator": {"nodes": 1}})"));
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("estimator.nodes") != std::string::npos);
  }
}

TEST_CASE("simulate -> estimate -> adapt chain")
{
  const auto dir = scratch("chain");
  run_command("simulate", point_mass_simulate(), (dir / "sim").string());
  CHECK(read_text_file((dir / "sim" / "samples.csv").string()) == "y1,y2\n0,0\n0,0\n0,0\n0,0\n0,0\n");
  CHECK(fs::exists(dir / "sim" / "config.json"));
  CHECK(fs::exists(dir / "sim" / "MANIFEST.json"));

  nlohmann::json est = { { "samples", (dir / "sim" / "samples.csv").string() },
                         { "kappa", 1.0 },
                         { "seed", 2 },
                         { "estimator", { { "m_override", 2 } } } };
  run_command("estimate", est, (dir / "est").string());
  DensityMeta meta;
  const auto g = read_density((dir / "est" / "estimate_density.csv").string(),
                              (dir / "est" / "estimate_density.json").string(), &meta);
  std::vector<double> x(2);
  for (size_t k = 0; k < g.lattice.size(); ++k) {
    g.lattice.point(k, x);
    if (x[0] == 0.0 && x[1] == 0.0)
      CHECK(g.values[k] == doctest::Approx(std::pow(meta.omega / M_PI, 2)).epsilon(1e-14));
  }

  nlohmann::json ad = { { "samples", (dir / "sim" / "samples.csv").string() },
                        { "kappas", { 0.8 } },
                        { "seed", 2 },
                        { "estimator", { { "m_override", 2 } } } };
  run_command("adapt", ad, (dir / "ad").string());
  const auto manifest = nlohmann::json::parse(read_text_file((dir / "ad" / "MANIFEST.json").string()));
  CHECK(manifest["results"]["selected_kappa"] == 0.8);
}

TEST_CASE("report csv round trip")
{
  ExperimentReport rep;
  CellRow r;
  r.n = 1000;
  r.label = "0.75";
  r.kappa = 0.75;
  r.status = "ok";
  r.cf_error = 0.123456789012345678;
  r.m = 3;
  r.omega = 0.01;
  r.density_error = std::nan("");
  r.aligned_error = std::nan("");
  rep.rows = { r, r };
  rep.rows[1].replicate = 1;
  rep.rows[1].status = "failed";
  rep.rows[1].message = "bad";
  std::stringstream ss;
  write_report_csv(ss, rep);
  const auto back = read_report_csv(ss);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].cf_error == r.cf_error);
  CHECK(back.rows[1].message == "bad");
  std::ostringstream again;
  write_report_csv(again, back);
  CHECK(again.str() == ss.str());
}

TEST_CASE("unknown subcommand")
{
  CHECK_THROWS_AS(run_command("nope", nlohmann::json::object(), scratch("nope").string()), ConfigError);
}
