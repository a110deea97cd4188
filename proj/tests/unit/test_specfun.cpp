#include <doctest.h>

#include <cmath>

#include "dlab/errors.hpp"
#include "dlab/quadrature.hpp"
#include "dlab/specfun.hpp"

using namespace dlab;

namespace {

// Reference values from 60-digit mpmath evaluations of the closed forms.
struct Ref {
  int k;
  double a;
  double x;
  double value;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto& r = gauss_legendre(16);
  CHECK(r.size() == 16);
  double s = 0.0, s30 = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    s += r.weights[i];
    s30 += r.weights[i] * std::pow(r.nodes[i], 30);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s30 == doctest::Approx(2.0 / 31.0).epsilon(1e-14));
  const auto c = composite_gauss_legendre(0.0, 3.14159265358979323846, 8, 16);
  CHECK(integrate(c, [](double x) { return std::sin(x); }) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("hermite functions: closed forms and reference values") {
  CHECK(hermite_fn(0, 0.0) == doctest::Approx(0.7511255444649425).epsilon(1e-15));
  CHECK(hermite_fn(1, 0.0) == 0.0);
  CHECK(std::abs(hermite_fn(3, 0.0)) < 1e-300);
  const Ref refs[] = {{10, 0, 1.3, -0.34999147167891239},
                      {100, 0, 5.0, 0.21085461968393164},
                      {517, 0, -12.25, -0.12927528185593331},
                      {60, 0, 11.0, 0.29995889729378614},
                      {2000, 0, 40.0, 0.10766261188867067}};
  for (const auto& r : refs) {
    CAPTURE(r.k);
    CHECK(rel(hermite_fn(r.k, r.x), r.value) < 1e-11);
  }
}

TEST_CASE("hermite functions: normalization and parity") {
  const auto rule = composite_gauss_legendre(-14.0, 14.0, 40, 16);
  double n5 = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto h = hermite_all(6, rule.nodes[i]);
    n5 += rule.weights[i] * h[5] * h[5];
    cross += rule.weights[i] * h[5] * h[3];
  }
  CHECK(n5 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(cross) < 1e-12);

  for (double x : {0.3, 2.7, 9.1, 25.0, 39.5}) {
    const auto p = hermite_all(2000, x);
    const auto m = hermite_all(2000, -x);
    for (int k = 0; k <= 2000; k += 37) {
      CAPTURE(k);
      REQUIRE(std::isfinite(p[k]));
      CHECK(std::abs(m[k] - (k % 2 ? -p[k] : p[k])) <= 1e-12 * std::abs(p[k]));
    }
  }
}

TEST_CASE("hermite order cap") {
  CHECK_THROWS_AS(hermite_fn(kHermiteMaxOrder + 1, 0.5), CapabilityError);
}

TEST_CASE("laguerre polynomials") {
  CHECK(laguerre_poly(0, 2.3, 7.0) == 1.0);
  CHECK(laguerre_poly(1, 0.5, 2.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(rel(laguerre_poly(20, 0.7, 3.1), 0.064916380715912296) < 1e-12);
  CHECK(rel(laguerre_poly(150, 2.5, 40.0), 28651390.279103532) < 1e-10);
  CHECK(rel(laguerre_poly(7, -0.5, 1.25), 0.37752187819707961) < 1e-13);
  CHECK_THROWS_AS(laguerre_poly(3, -1.0, 1.0), DomainError);
  for (int k : {0, 3, 17, 80}) {
    for (double a : {-0.4, 0.0, 1.5, 6.0}) {
      const double want = std::exp(std::lgamma(k + a + 1) - std::lgamma(k + 1.0) - std::lgamma(a + 1));
      CHECK(rel(laguerre_poly(k, a, 0.0), want) < 1e-10);
      CHECK(rel(laguerre_at_zero(k, a), want) < 1e-10);
    }
  }
}

TEST_CASE("laguerre generating series") {
  const double w = 0.3, x = 1.0;
  const auto L = laguerre_poly_all(60, 0.0, x);
  double s = 0.0;
  for (int k = 0; k <= 60; ++k) s += L[k] * std::pow(w, k);
  CHECK(std::abs(s - std::exp(-w * x / (1 - w)) / (1 - w)) < 1e-9);
}

TEST_CASE("laguerre functions") {
  const Ref refs[] = {{12, 1.5, 2.2, -0.023913008542945055},
                      {300, 0.0, 7.0, 0.050863215687328471},
                      {0, 0.25, 1.0, 0.75013095625121655},
                      {40, -0.3, 0.05, 0.45604013820579773}};
  for (const auto& r : refs) {
    CAPTURE(r.k);
    CHECK(rel(laguerre_fn(r.k, r.a, r.x), r.value) < 1e-11);
    CHECK(rel(laguerre_fn_all(r.k, r.a, r.x)[r.k], r.value) < 1e-11);
  }
  CHECK_THROWS_AS(laguerre_fn(2, -0.5, 1.0), DomainError);
  CHECK_THROWS_AS(laguerre_fn(2, 0.5, 0.0), DomainError);

  // orthonormal in x^{2a+1} dx
  const double a = 0.7;
  std::vector<double> breaks{0.0};
  for (int l = 12; l >= 0; --l) breaks.push_back(0.5 * std::pow(0.25, l));
  breaks.push_back(20.0);
  std::vector<int> panels(breaks.size() - 1, 1);
  panels.back() = 40;
  const auto rule = composite_gauss_legendre(breaks, panels, 16);
  double g00 = 0, g44 = 0, g14 = 0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i];
    const auto v = laguerre_fn_all(4, a, x);
    const double w = rule.weights[i] * std::pow(x, 2 * a + 1);
    g00 += w * v[0] * v[0];
    g44 += w * v[4] * v[4];
    g14 += w * v[1] * v[4];
  }
  CHECK(g00 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g44 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(g14) < 1e-10);
  CHECK(std::abs(laguerre_fn(200, a, 60.0)) < 1e-30);
}

TEST_CASE("damped laguerre") {
  CHECK(rel(laguerre_damped_all(400, 1.0, 300.0)[400], -0.036686010681730425) < 1e-9);
  CHECK(rel(laguerre_damped_all(50, 0.0, 10.0)[50], 0.11814439873366884) < 1e-11);
}

TEST_CASE("modified bessel function") {
  struct B {
    double a, x, v;
  };
  const B refs[] = {{0, 1, 1.2660658777520083},        {0.5, 12, 18743.609410523527},
                    {3, 50, 2.6777641388839413e+20},   {1.5, 0.01, 0.00026596417989232311},
                    {10, 5, 0.0045800444191760513},    {0, 1e-3, 1.0000002500000156},
                    {0.25, 10.5, 4513.2694630537619},  {4.5, 30, 554902936150.93824}};
  for (const auto& b : refs) {
    CAPTURE(b.a);
    CAPTURE(b.x);
    CHECK(rel(bessel_i(b.a, b.x).value(), b.v) < 1e-13);
  }
  CHECK(std::abs(bessel_i(2.25, 700.0).log() - 695.80208134322682) < 1e-12 * 695.8);
  CHECK(bessel_i(0.0, 0.0).value() == 1.0);
  CHECK(bessel_i(1.0, 0.0).value() == 0.0);
}

TEST_CASE("bessel series and asymptotic branches agree where both are valid") {
  for (double a : {0.0, 0.5, 1.5, 3.0}) {
    for (double x = 11.0; x <= 15.0; x += 0.5) {
      const double s = bessel_i_series(a, x).value() * std::exp(-x);
      const double g = bessel_i_asymptotic_scaled(a, x);
      CAPTURE(a);
      CAPTURE(x);
      CHECK(std::abs(s - g) <= 1e-9 * s);
    }
  }
}
