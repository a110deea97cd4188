#include <doctest.h>

#include <cmath>

#include "dlab/errors.hpp"
#include "dlab/phases.hpp"

using namespace dlab;

namespace {

double central(const std::function<double(double)>& f, double r, double h) {
  return (f(r + h) - f(r - h)) / (2 * h);
}

}  // namespace

TEST_CASE("homogeneity exponents of the built-in families") {
  struct Row {
    const char* name;
    double m1, a1, m2, a2;
  };
  const Row rows[] = {{"klein_gordon", 0.5, 0.5, 1.0, 2.0},
                      {"beam", 1.0, -1.0, 2.0, 2.0},
                      {"fourth_order", 2.0, 2.0, 1.0, 2.0}};
  for (const auto& r : rows) {
    CAPTURE(r.name);
    const PhaseFunction p = builtin_phase(r.name);
    CHECK(p.m1 == r.m1);
    CHECK(p.alpha1 == r.a1);
    CHECK(p.m2 == r.m2);
    CHECK(p.alpha2 == r.a2);
    CHECK((p.has_h1 && p.has_h2 && p.has_h3 && p.has_h4));
  }
  const PhaseFunction f = fractional_phase(0.3);
  CHECK((f.m1 == 0.3 && f.alpha1 == 0.3 && f.m2 == 0.3 && f.alpha2 == 0.3));
  CHECK_THROWS_AS(fractional_phase(1.0), DomainError);
  CHECK_THROWS_AS(fractional_phase(0.0), DomainError);
  CHECK_THROWS_AS(builtin_phase("schroedinger"), DomainError);
}

TEST_CASE("derivative oracles match finite differences") {
  for (const auto& name : builtin_phase_names()) {
    CAPTURE(name);
    const PhaseFunction p = builtin_phase(name, name == "fractional" ? std::optional<double>(0.5) : std::nullopt);
    for (double r : {0.01, 0.3, 1.0, 7.5, 90.0}) {
      const double h = 1e-5 * r;
      CHECK(p.d1(r) == doctest::Approx(central(p.eval, r, h)).epsilon(1e-7));
      CHECK(p.d2(r) == doctest::Approx(central(p.d1, r, h)).epsilon(1e-6));
    }
  }
  const PhaseFunction kg = klein_gordon_phase();
  CHECK(kg.d1(3.0) == doctest::Approx(0.25));
  CHECK(kg.d2(3.0) == doctest::Approx(-1.0 / 32.0));
}

TEST_CASE("hypothesis verification") {
  for (const auto& name : builtin_phase_names()) {
    CAPTURE(name);
    const PhaseFunction p = builtin_phase(name, name == "fractional" ? std::optional<double>(0.5) : std::nullopt);
    const HypothesisReport rep = verify_hypotheses(p, default_high_grid(), default_low_grid());
    CHECK(rep.all_claimed_confirmed());
    for (const auto& c : rep.checks) {
      if (!c.claimed) continue;
      CHECK(c.min_ratio > 0.0);
      CHECK(c.max_ratio / c.min_ratio <= kHypothesisBand);
    }
    CHECK(accept_phase(p).verified);
  }
  PhaseFunction unchecked = klein_gordon_phase();
  unchecked.verified = false;
  CHECK(builtin_phase("klein_gordon").verified);
  CHECK(accept_phase(unchecked).verified);
  CHECK_THROWS_AS(verify_hypotheses(klein_gordon_phase(), {0.5, 2.0}, default_low_grid()), DomainError);
  CHECK_THROWS_AS(verify_hypotheses(klein_gordon_phase(), default_high_grid(), {0.5, 1.5}), DomainError);
}

TEST_CASE("a phase that breaks its claimed hypothesis is rejected") {
  // phi' = e^r is not comparable to any power r^{m-1}
  const PhaseFunction bad = custom_phase(
      "exp(r)", [](double r) { return std::exp(r); }, [](double r) { return std::exp(r); },
      [](double r) { return std::exp(r); }, 1.0, 1.0, 1.0, 1.0, true, false, false, false);
  CHECK_THROWS_AS(accept_phase(bad), PreconditionError);
}

TEST_CASE("exponent predictions") {
  const double n = 2.0;
  struct Row {
    const char* name;
    double lambda_exp;
  };
  // (1 - m1) n + 2 m1 - alpha1 with the second-derivative hypothesis
  const Row rows[] = {{"klein_gordon", 1.5}, {"beam", 3.0}, {"fourth_order", 0.0}};
  for (const auto& r : rows) {
    CAPTURE(r.name);
    const ExponentPrediction p = predict_exponents(builtin_phase(r.name), n, Regime::high);
    CHECK(p.uses_second_derivative);
    CHECK(p.t_exponent == doctest::Approx(0.5));
    CHECK(p.lambda_exponent == doctest::Approx(r.lambda_exp));
  }
  CHECK(predict_exponents(fractional_phase(0.5), n, Regime::high).lambda_exponent == doctest::Approx(1.5));
  // Without (H3): |t|^{-(n-2)/2} lambda^{(1-m1)n + 2 m1}
  const ExponentPrediction lin = predict_exponents(linear_phase(), 3.0, Regime::high);
  CHECK_FALSE(lin.uses_second_derivative);
  CHECK(lin.t_exponent == doctest::Approx(0.5));
  CHECK(lin.lambda_exponent == doctest::Approx(2.0));
  CHECK_THROWS_AS(predict_exponents(linear_phase(), 1.0, Regime::high), DomainError);
  // low regime uses (m2, alpha2)
  const ExponentPrediction low = predict_exponents(klein_gordon_phase(), n, Regime::low);
  CHECK(low.lambda_exponent == doctest::Approx((1 - 1.0) * n + 2 * 1.0 - 2.0));
}
