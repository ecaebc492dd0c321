#include "doctest.h"

#include "deconv/deconv.h"

#include <cmath>
#include <cstdio>
#include <string>

namespace {

const char* point_mass = R"({"kind": "repeated", "signal": {"kind": "point_mass"},
  "noise": {"first": {"kind": "point_mass"}, "second": {"kind": "point_mass"}}})";

} // namespace

TEST_CASE("version and error state")
{
  CHECK(std::string(dcv_version()) == "0.1.0");
  dcv_samples* s = nullptr;
  CHECK(dcv_samples_simulate(nullptr, 5, 1, &s) == DCV_ERR_INVALID_ARGUMENT);
  CHECK(std::string(dcv_last_error()).find("scenario_json") != std::string::npos);
  CHECK(dcv_samples_simulate("{\"kind\": \"nope\"}", 5, 1, &s) == DCV_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(dcv_samples_read_csv("/nonexistent/file.csv", 1, 1, &s) == DCV_ERR_IO);
}

TEST_CASE("simulate, estimate, evaluate")
{
  dcv_samples* s = nullptr;
  REQUIRE(dcv_samples_simulate(point_mass, 5, 1, &s) == DCV_OK);
  CHECK(dcv_samples_count(s) == 5);
  CHECK(dcv_samples_dim(s) == 2);
  for (int i = 0; i < 10; ++i)
    CHECK(dcv_samples_data(s)[i] == 0.0);

  dcv_estimate* e = nullptr;
  REQUIRE(dcv_estimate_run(s, "{\"m_override\": 2}", 1.0, 3, &e) == DCV_OK);
  CHECK(dcv_estimate_m(e) == 2);
  CHECK(dcv_estimate_contrast(e) == 0.0);
  const double t[2] = { 0.5, -0.5 };
  double re = 0, im = 0;
  REQUIRE(dcv_estimate_cf_at(e, t, &re, &im) == DCV_OK);
  CHECK(re == doctest::Approx(1.0));
  const double x[2] = { 0.0, 0.0 };
  double f = 0;
  REQUIRE(dcv_estimate_density_at(e, x, &f) == DCV_OK);
  CHECK(f == doctest::Approx(std::pow(dcv_estimate_omega(e) / M_PI, 2)).epsilon(1e-14));
  CHECK(dcv_estimate_density_at(e, nullptr, &f) == DCV_ERR_INVALID_ARGUMENT);
  dcv_estimate_free(e);

  CHECK(dcv_estimate_run(s, "{\"S\": -1}", 1.0, 3, &e) == DCV_ERR_CONFIG);
  dcv_samples_free(s);
}

TEST_CASE("array and csv round trip")
{
  const double data[6] = { 0.5, -1.25, 3.0, 2.0, -0.125, 7.5 };
  dcv_samples* s = nullptr;
  REQUIRE(dcv_samples_from_array(1, 1, data, 3, &s) == DCV_OK);
  const std::string path = "/tmp/deconv_capi_roundtrip.csv";
  REQUIRE(dcv_samples_write_csv(s, path.c_str()) == DCV_OK);
  dcv_samples* back = nullptr;
  REQUIRE(dcv_samples_read_csv(path.c_str(), 1, 1, &back) == DCV_OK);
  CHECK(dcv_samples_count(back) == 3);
  for (int i = 0; i < 6; ++i)
    CHECK(dcv_samples_data(back)[i] == data[i]);
  dcv_samples_free(s);
  dcv_samples_free(back);
  std::remove(path.c_str());
  CHECK(dcv_samples_from_array(0, 1, data, 3, &s) == DCV_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run_command")
{
  size_t v = 99;
  REQUIRE(dcv_run_command("bounds-check",
                          R"({"kappas": [1], "S": [1], "nu": [1], "m": [2, 3], "d": [1], "members": 3})",
                          "/tmp/deconv_capi_bounds", &v) == DCV_OK);
  CHECK(v == 0);
  CHECK(std::string(dcv_last_message()).find("violations") != std::string::npos);
  CHECK(dcv_run_command("bounds-check", "{\"bogus\": 1}", "/tmp/deconv_capi_bounds", nullptr) ==
        DCV_ERR_CONFIG);
}
