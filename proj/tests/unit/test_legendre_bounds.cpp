#include "doctest.h"

#include "core/legendre_bounds.hpp"
#include "core/multiindex.hpp"
#include "core/quadrature.hpp"
#include "core/rng.hpp"
#include "core/taylor.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

using namespace deconv;

TEST_CASE("normalized Legendre values")
{
  CHECK(legendre_eval(0, 1.0, 0.3) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(legendre_eval(1, 1.0, 1.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  bool outside = false;
  legendre_eval(3, 1.0, 1.2, &outside);
  CHECK(outside);
}

TEST_CASE("Legendre Gram matrix")
{
  for (double nu : { 0.5, 1.0, 2.0 }) {
    const auto r = gauss_legendre(64, -nu, nu);
    double worst = 0.0;
    for (int i = 0; i <= 12; ++i)
      for (int j = 0; j <= 12; ++j) {
        double g = 0.0;
        for (size_t q = 0; q < r.nodes.size(); ++q)
          g += r.weights[q] * legendre_eval(i, nu, r.nodes[q]) * legendre_eval(j, nu, r.nodes[q]);
        worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("change of basis entries")
{
  for (double nu : { 0.5, 1.0, 3.0 }) {
    const auto B = change_of_basis(3, nu, 1);
    CHECK(B(0, 0) == doctest::Approx(std::sqrt(1.0 / (2.0 * nu))).epsilon(1e-14));
    CHECK(B(1, 1) == doctest::Approx(std::sqrt(1.5) * std::pow(nu, -1.5)).epsilon(1e-14));
  }
  const int m = 3, d = 2;
  const double nu = 1.3;
  const auto B = change_of_basis(m, nu, d);
  const auto idx = MultiIndexSet::get(d, m);
  Rng rng(11);
  for (int r = 0; r < 30; ++r) {
    const double x[2] = { rng.uniform(-nu, nu), rng.uniform(-nu, nu) };
    for (size_t i = 0; i < idx->size(); ++i) {
      double mono = 0.0;
      for (size_t j = 0; j < idx->size(); ++j)
        mono += B(long(i), long(j)) * std::pow(x[0], (*idx)[j][0]) * std::pow(x[1], (*idx)[j][1]);
      const double leg = legendre_eval((*idx)[i][0], nu, x[0]) * legendre_eval((*idx)[i][1], nu, x[1]);
      CHECK(std::abs(mono - leg) < 1e-10);
    }
  }
}

TEST_CASE("f_kappa series")
{
  CHECK(double(f_kappa(0.0, 1.0, 2).value) == 0.0);
  const auto v = f_kappa(1.0, 1.0, 2, 20);
  CHECK(std::abs(double(v.value) - 0.40466847150311921972) < 1e-12 + double(v.remainder));
  CHECK(double(v.remainder) < 1e-12);
  CHECK(double(f_kappa(1.0, 1.0, 2).value) == doctest::Approx(0.40466847150311921972).epsilon(1e-15));
  for (double kappa : { 0.55, 0.75, 1.0 })
    for (double u = 0.1; u < 6.0; u += 0.3)
      CHECK(f_kappa(u, kappa, 1).value <= f_kappa_envelope(u, kappa));
}

TEST_CASE("psi sum")
{
  const auto s = psi_sum(1.0, 1.0, 1);
  CHECK(double(s.value) == doctest::Approx(1.6284737129015844471).epsilon(1e-15));
  CHECK(s.value <= psi_sum_bound(1.0, 1.0, 1));
}

TEST_CASE("sigma_1 by power iteration")
{
  const double p = sigma1_power(2, 1.0, 1);
  const auto B = change_of_basis(2, 1.0, 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  CHECK(p == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
  CHECK(double(sigma1_bound(1.0, 1, 2)) == doctest::Approx(32.0));
  CHECK(p <= 32.0);
}

TEST_CASE("truncation of a low-degree member is exact")
{
  // a degree-4 member loses nothing at m = 4 and the bound is positive
  const auto B = double(truncation_bound(0.75, 1.0, 1.0, 1, 4));
  CHECK(B > 0.0);
  const auto reports = bound_suite(0.75, 1.0, 1.0, 1, 4, 3, 5);
  for (const auto& r : reports)
    if (r.name == "truncation" && r.applicable)
      CHECK(r.measured <= r.bound);
}

TEST_CASE("bound csv header")
{
  std::ostringstream os;
  write_bound_csv(os, bound_suite(1.0, 1.0, 1.0, 1, 2, 1, 3));
  CHECK(os.str().rfind("name,kappa,S,nu,d,m,bound,measured,slack,applicable\n", 0) == 0);
}
