#include "doctest.h"

#include "core/legendre_bounds.hpp"
#include "core/lower_bound.hpp"
#include "core/weighted_basis.hpp"

#include <algorithm>
#include <cmath>

using namespace deconv;

namespace {

double
integrate(const std::function<double(double)>& f, double a, double b, int panels = 400)
{
  const auto r = composite_gauss(panels, 20, a, b);
  double s = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i)
    s += r.weights[i] * f(r.nodes[i]);
  return s;
}

double
correlation(const std::vector<double>& a, const std::vector<double>& b)
{
  double ab = 0, aa = 0, bb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

std::vector<double>
linspace(double a, double b, int n)
{
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i)
    x[i] = a + (b - a) * i / (n - 1);
  return x;
}

} // namespace

TEST_CASE("weight h_kappa")
{
  for (double kappa : { 0.55, 0.7, 0.9, 0.95 }) {
    const auto w = make_weight(kappa);
    for (double x : { 0.1, 0.77, 2.5 })
      CHECK(h_kappa_eval(w, x) == h_kappa_eval(w, -x));
    const double mass = integrate([&](double x) { return h_kappa_eval(w, x); }, -w.support, w.support);
    CHECK(std::abs(mass - 1.0) < 1e-10);
  }
  const auto half = make_weight(0.5);
  CHECK(h_kappa_eval(half, 1.0) / h_kappa_eval(half, 0.0) ==
        doctest::Approx(0.6065306597126334236).epsilon(1e-14));
  const auto one = make_weight(1.0);
  CHECK(h_kappa_eval(one, 0.3) == 0.5);
  CHECK(h_kappa_eval(one, 1.3) == 0.0);
}

TEST_CASE("weighted basis: low orders in closed form")
{
  const auto w = make_weight(0.7);
  const auto b = build_weighted_basis(w, 4);
  const auto h2 = [&](double x) { return std::pow(h_kappa_eval(w, x), 2); };
  const double m0 = integrate(h2, -w.support, w.support);
  const double m2 = integrate([&](double x) { return x * x * h2(x); }, -w.support, w.support);
  CHECK(b.eval(0, 0.4) == doctest::Approx(1.0 / std::sqrt(m0)).epsilon(1e-10));
  CHECK(b.eval(1, 0.4) == doctest::Approx(0.4 / std::sqrt(m2)).epsilon(1e-10));
}

TEST_CASE("weighted Gram matrices, K = 16")
{
  for (double kappa : { 0.55, 0.6, 0.7, 0.8, 0.9, 0.95 }) {
    const auto b = build_weighted_basis(make_weight(kappa), 16);
    CHECK(b.gram_error < 1e-6);
  }
}

TEST_CASE("kappa = 1 is the Legendre family")
{
  const auto b = build_weighted_basis(make_weight(1.0), 16);
  double worst = 0.0;
  for (int K = 0; K <= 16; ++K)
    for (double x : linspace(-1.0, 1.0, 41))
      worst = std::max(worst, std::abs(b.eval(K, x) - 2.0 * legendre_eval(K, 1.0, x)));
  CHECK(worst < 1e-8);
}

TEST_CASE("kappa = 1/2 profiles are Hermite functions")
{
  const auto b = build_weighted_basis(make_weight(0.5), 10);
  const auto x = linspace(-4.0, 4.0, 161);
  for (int K = 1; K <= 10; ++K) {
    const auto prof = scaled_profile(b, K, Scaling::stretch, x);
    std::vector<double> herm(x.size());
    const double s = std::sqrt(double(K));
    for (size_t i = 0; i < x.size(); ++i)
      herm[i] = hermite_functions(K, s * x[i])[K];
    CHECK(std::abs(correlation(prof, herm)) > 0.999);
  }
}

TEST_CASE("profile identities")
{
  const auto b = build_weighted_basis(make_weight(0.7), 16);
  const auto x = linspace(-3.0, 3.0, 61);
  const auto p1 = scaled_profile(b, 1, Scaling::stretch, x);
  const auto q1 = scaled_profile(b, 1, Scaling::squeeze, x);
  for (size_t i = 0; i < x.size(); ++i) {
    CHECK(p1[i] == doctest::Approx(b.eval_weighted(1, x[i])).epsilon(1e-14));
    CHECK(q1[i] == doctest::Approx(b.eval_weighted(1, x[i])).epsilon(1e-14));
  }
  for (int K = 1; K <= 16; ++K)
    for (auto sc : { Scaling::stretch, Scaling::squeeze }) {
      const auto p = scaled_profile(b, K, sc, x);
      const double sign = K % 2 == 0 ? 1.0 : -1.0;
      for (size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(p[i] - sign * p[x.size() - 1 - i]) < 1e-12);
    }
  std::vector<double> sups;
  const auto xs = linspace(-4.0, 4.0, 161);
  for (int K : { 4, 8, 12, 16 }) {
    const auto p = scaled_profile(b, K, Scaling::stretch, xs);
    double s = 0;
    for (double v : p)
      s = std::max(s, std::abs(v));
    sups.push_back(s);
  }
  CHECK(*std::max_element(sups.begin(), sups.end()) <= 3.0 * *std::min_element(sups.begin(), sups.end()));
}

TEST_CASE("interval census")
{
  const double kappa = 0.7;
  const auto b = build_weighted_basis(make_weight(kappa), 16);
  CHECK(interval_census(b, 8, 0.5, 1e6).count == 0);
  CHECK(interval_census(b, 8, 1e-3, 1e-6).count >= 1);

  // fit c0 on K = 4..10, hold out K = 11..16
  const double c1 = 0.2, c2 = 0.1;
  double c0 = INFINITY;
  for (int K = 4; K <= 10; ++K)
    c0 = std::min(c0, interval_census(b, K, c1, c2).count / std::pow(K, kappa));
  CHECK(c0 > 0.0);
  for (int K = 11; K <= 16; ++K)
    CHECK(interval_census(b, K, c1, c2).count >= std::ceil(c0 * std::pow(K, kappa)));
}

TEST_CASE("mollifier")
{
  CHECK(mollifier_constant() == doctest::Approx(2.2522836210435810105).epsilon(1e-13));
  CHECK(1.0 / mollifier_constant() == doctest::Approx(0.44399381616807943782).epsilon(1e-13));
  for (double b : { 1.0, 7.5 }) {
    CHECK(mollifier_eval(b, 1.0 / b) == 0.0);
    CHECK(mollifier_eval(b, -1.0 / b) == 0.0);
    const auto f = mollify([](double) { return 1.0; }, b);
    CHECK(f(0.3) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("norm chain")
{
  for (double kappa : { 0.55, 0.7, 0.9 }) {
    const auto basis = build_weighted_basis(make_weight(kappa), 16);
    std::vector<double> lk, ln;
    for (int K = 1; K <= 16; ++K)
      for (double c : { 4.0, 16.0 }) {
        const auto nc = norm_chain(basis, K, c * std::pow(K, kappa));
        CHECK(nc.smoothed <= nc.plain);
        if (c == 4.0 && K >= 6) {
          lk.push_back(std::log(double(K)));
          ln.push_back(std::log(nc.plain));
        }
      }
    double mx = 0, my = 0;
    for (size_t i = 0; i < lk.size(); ++i) {
      mx += lk[i];
      my += ln[i];
    }
    mx /= lk.size();
    my /= lk.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < lk.size(); ++i) {
      sxy += (lk[i] - mx) * (ln[i] - my);
      sxx += (lk[i] - mx) * (lk[i] - mx);
    }
    CHECK(std::abs(sxy / sxx - (kappa - 1.0)) <= 0.25);
    const auto lim = norm_chain(basis, 8, 1e4);
    CHECK(lim.smoothed / lim.plain > 0.98);
  }
}

TEST_CASE("two-point construction identities")
{
  const auto basis = build_weighted_basis(make_weight(0.7), 16);
  LowerBoundInstance inst;
  inst.c = 0.5;
  SUBCASE("zero perturbation")
  {
    inst.alpha = 0.0;
    const auto tp = build_two_point(inst, basis);
    const double u[2] = { 0.3, -0.8 };
    CHECK(tp.fn(u) == tp.f0(u));
    const NoiseG g(inst.c);
    CHECK(lecam_value(tp, g, inst.n, 64, 20.0).value == 0.0);
  }
  SUBCASE("perturbation has zero mass, positivity, halving")
  {
    const auto tp = build_two_point(inst, basis);
    CHECK(std::abs(tp.perturbation.integral()) < 1e-12);
    CHECK(tp.min_zetan >= -1e-12);
    CHECK(std::abs(tp.mass_n - 1.0) < 1e-8);
    const NoiseG g(inst.c);
    const auto full = lecam_value(tp, g, inst.n, 128, 30.0);
    CHECK(full.value > 0.0);
    const auto zero_n = lecam_value(tp, g, 0.0, 128, 30.0);
    CHECK(zero_n.value == doctest::Approx(0.25 * zero_n.l2_sq).epsilon(1e-14));
    auto half = inst;
    half.alpha = 0.5 * tp.alpha_n;
    const auto tph = build_two_point(half, basis);
    const auto lh = lecam_value(tph, g, inst.n, 128, 30.0);
    CHECK(lh.l2_sq / full.l2_sq == doctest::Approx(0.25).epsilon(0.05));
  }
  SUBCASE("identity mixing gives a product density")
  {
    inst.a = 0.0;
    const auto tp = build_two_point(inst, basis);
    Rng rng(3);
    for (int r = 0; r < 20; ++r) {
      const double u[2] = { rng.uniform(-2, 2), rng.uniform(-2, 2) };
      CHECK(tp.f0(u) == tp.zeta0.eval(u[0]) * tp.zeta0.eval(u[1]));
    }
  }
}

TEST_CASE("noise g")
{
  const NoiseG g(1.0);
  CHECK(g.cf(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(g.cf(1.0)) < 1e-15);
  CHECK(std::abs(g.cf(-1.0)) < 1e-15);
  CHECK(std::abs(g.cf(0.3) - 0.66896778400497312292) < 1e-14);
  CHECK(g.cf(1.5) == 0.0);
  // mass on a wide window plus the analytic tails of the CDF
  const double mass = integrate([&](double x) { return g.density(x); }, -200.0, 200.0, 4000);
  CHECK(std::abs(mass + g.cdf(-200.0) + (1.0 - g.cdf(200.0)) - 1.0) < 1e-8);

  Rng rng(99);
  const int n = 100000;
  std::vector<double> s(n);
  for (auto& v : s)
    v = g.sample(rng);
  std::sort(s.begin(), s.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double F = g.cdf(s[i]);
    ks = std::max({ ks, std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n) });
  }
  CHECK(ks < 0.01);
}
