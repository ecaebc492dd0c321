#include "doctest.h"

#include "core/contrast.hpp"
#include "core/ecf.hpp"
#include "core/rng.hpp"

#include <cmath>
#include <sstream>

using namespace deconv;

TEST_CASE("ecf of a single zero sample is 1")
{
  const SampleSet s({ 1, 1 }, { 0.0, 0.0 });
  const double t[2] = { 3.1, -0.4 };
  CHECK(ecf_eval(s, t) == cplx(1.0, 0.0));
}

TEST_CASE("ecf of {(1,0),(-1,0)} at (pi,0) is -1")
{
  const SampleSet s({ 1, 1 }, { 1.0, 0.0, -1.0, 0.0 });
  const double t[2] = { M_PI, 0.0 };
  const cplx v = ecf_eval(s, t);
  CHECK(v.real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(v.imag()) < 1e-15);
}

TEST_CASE("ecf conjugate symmetry")
{
  Rng rng(5);
  std::vector<double> data(3 * 200);
  for (auto& v : data)
    v = rng.normal();
  const SampleSet s({ 2, 1 }, data);
  for (int r = 0; r < 10; ++r) {
    double t[3], mt[3];
    for (int a = 0; a < 3; ++a) {
      t[a] = rng.uniform(-2, 2);
      mt[a] = -t[a];
    }
    CHECK(std::abs(ecf_eval(s, t) - std::conj(ecf_eval(s, mt))) < 1e-14);
  }
}

TEST_CASE("grid table agrees bit for bit with pointwise evaluation")
{
  Rng rng(8);
  std::vector<double> data(2 * 300);
  for (auto& v : data)
    v = rng.normal();
  const SampleSet s({ 1, 1 }, data);
  const auto grid = make_grid(1.0, 12, QuadratureRule::gauss_legendre, { 1, 1 });
  const EcfTable tab = ecf_on_grid(s, grid);
  Rng pick(1);
  for (int r = 0; r < 50; ++r) {
    const size_t k = size_t(pick.bits() % grid.full_size());
    CHECK(tab.full[k] == ecf_eval(s, grid.node(k)));
  }
  for (size_t k = 0; k < grid.first_size(); ++k) {
    const double t[2] = { grid.first_node(k)[0], 0.0 };
    CHECK(tab.first[k] == ecf_eval(s, t));
  }
}

TEST_CASE("origin node and the two-node minimum")
{
  const SampleSet s({ 1, 1 }, { 0.3, -2.0, 1.0, 4.0 });
  const double zero[2] = { 0.0, 0.0 };
  CHECK(ecf_eval(s, zero) == cplx(1.0, 0.0));
  CHECK_THROWS_AS(make_grid(1.0, 1, QuadratureRule::gauss_legendre, { 1, 1 }), std::invalid_argument);
}

TEST_CASE("uniform(0,1) samples, t = (1,0)")
{
  Rng rng(2024);
  const size_t n = 10000;
  std::vector<double> data(2 * n);
  for (size_t l = 0; l < n; ++l) {
    data[2 * l] = rng.uniform();
    data[2 * l + 1] = rng.uniform();
  }
  const SampleSet s({ 1, 1 }, data);
  const double t[2] = { 1.0, 0.0 };
  const cplx v = ecf_eval(s, t);
  CHECK(std::abs(v.real() - 0.84147098480789650665) < 3.0 / std::sqrt(double(n)));
  CHECK(std::abs(v.imag() - 0.4596976941318602826) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("second moment")
{
  CHECK(second_moment(SampleSet({ 1, 1 }, { 0, 0, 0, 0 })) == 0.0);
  CHECK(second_moment(SampleSet({ 1, 1 }, { 1, 0, 0, 1 })) == 1.0);
  Rng rng(77);
  std::vector<double> data(2 * 100000);
  for (auto& v : data)
    v = rng.normal();
  CHECK(std::abs(second_moment(SampleSet({ 1, 1 }, data)) - 2.0) < 0.05);
}

TEST_CASE("quadrature exactness")
{
  const auto r2 = gauss_legendre(2, -1.0, 1.0);
  double s0 = 0, s2 = 0;
  for (size_t i = 0; i < 2; ++i) {
    s0 += r2.weights[i];
    s2 += r2.weights[i] * r2.nodes[i] * r2.nodes[i];
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const auto r8 = gauss_legendre(8, -2.0, 2.0);
  double s6 = 0;
  for (size_t i = 0; i < 8; ++i)
    s6 += r8.weights[i] * std::pow(r8.nodes[i], 6);
  CHECK(std::abs(s6 - 36.571428571428571429) < 1e-12);
}

TEST_CASE("samples csv round trip")
{
  Rng rng(3);
  std::vector<double> data(3 * 20);
  for (auto& v : data)
    v = rng.normal() * 1e3;
  const SampleSet s({ 1, 2 }, data);
  std::stringstream ss;
  write_samples_csv(ss, s);
  CHECK(read_samples_csv(ss, { 1, 2 }) == s);
}
