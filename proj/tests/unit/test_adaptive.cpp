#include "doctest.h"

#include "core/adaptive.hpp"
#include "core/errors.hpp"

#include <cmath>
#include <sstream>

using namespace deconv;

namespace {

AdaptInput
flat_input(size_t k, double n)
{
  AdaptInput in;
  in.distance.assign(k, std::vector<double>(k, 0.0));
  in.n = n;
  in.beta = 1.0;
  in.c_sigma = 1.0;
  return in;
}

} // namespace

TEST_CASE("sigma")
{
  CHECK(sigma_from_ratio(0.0, 7.3, 0.42, 1.0) == doctest::Approx(0.42).epsilon(1e-15));
  CHECK(sigma_from_ratio(1.0, std::exp(1.0), 1.0, 1.0) ==
        doctest::Approx(0.3678794411714423216).epsilon(1e-15));
  const double n = 1e5;
  CHECK(log_ratio(n) > 1.0);
  double prev = INFINITY;
  for (double k : KappaGrid::standard().values) {
    const double s = sigma(k, n, 1.0, 1.0);
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("bias proxy")
{
  const auto grid = KappaGrid::standard();
  const auto in = flat_input(grid.values.size(), 1e4);
  for (size_t i = 0; i < grid.values.size(); ++i)
    CHECK(bias_proxy(i, in, grid) == 0.0);

  KappaGrid two{ 0.55, { 0.55, 0.6 } };
  auto in2 = flat_input(2, 1e4);
  const double D = 0.9;
  in2.distance[0][1] = in2.distance[1][0] = D;
  const double s0 = sigma(0.55, 1e4, 1.0, 1.0);
  CHECK(bias_proxy(0, in2, two) == 0.0);
  CHECK(bias_proxy(1, in2, two) == doctest::Approx(std::max(0.0, D - s0)).epsilon(1e-15));
}

TEST_CASE("selection")
{
  SUBCASE("identical estimates pick the largest kappa")
  {
    const auto grid = KappaGrid::standard();
    const auto sel = select_kappa(flat_input(grid.values.size(), 1e4), grid);
    CHECK(sel.kappa == grid.values.back());
  }
  SUBCASE("single point grid")
  {
    KappaGrid one{ 0.7, { 0.7 } };
    CHECK(select_kappa(flat_input(1, 1e4), one).kappa == 0.7);
  }
  SUBCASE("a large distance flips the choice to kappa0")
  {
    KappaGrid two{ 0.55, { 0.55, 0.9 } };
    auto in = flat_input(2, 1e4);
    const double s0 = sigma(0.55, 1e4, 1.0, 1.0), s1 = sigma(0.9, 1e4, 1.0, 1.0);
    // A(k1) + s1 > 0 + s0 needs D - s0 + s1 > s0
    const double D = 2 * s0 - s1 + 0.05;
    in.distance[0][1] = in.distance[1][0] = D;
    const auto sel = select_kappa(in, two);
    // enumerate by hand
    const double c0 = s0, c1 = std::max(0.0, D - s0) + s1;
    CHECK(sel.index == (c1 < c0 ? 1u : 0u));
    CHECK(sel.index == 0u);
    std::ostringstream os;
    write_selection_csv(os, sel);
    CHECK(os.str().rfind("kappa,A_n,sigma_n,criterion,selected\n", 0) == 0);
  }
}

TEST_CASE("kappa grid validation")
{
  CHECK_NOTHROW(KappaGrid::standard().validate());
  CHECK_THROWS_AS((KappaGrid{ 0.55, {} }).validate(), ConfigError);
  CHECK_THROWS_AS((KappaGrid{ 0.55, { 0.6, 1.2 } }).validate(), ConfigError);
}

TEST_CASE("c_sigma calibration")
{
  const KappaGrid g{ 0.55, { 0.55, 0.8 } };
  const double n = 1e4, r = log_ratio(n);
  const double c = calibrate_c_sigma({ 0.1, 0.05 }, g, n, 1.0);
  CHECK(c == doctest::Approx(std::max(0.1 * std::pow(r, 0.55), 0.05 * std::pow(r, 0.8))));
}
