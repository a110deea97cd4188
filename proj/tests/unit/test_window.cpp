#include <doctest.h>

#include <cmath>

#include "dlab/errors.hpp"
#include "dlab/window.hpp"

using namespace dlab;

TEST_CASE("glue ramp") {
  CHECK(glue_ramp(-1.0) == 0.0);
  CHECK(glue_ramp(0.0) == 0.0);
  CHECK(glue_ramp(1.0) == 1.0);
  CHECK(glue_ramp(0.5) == 0.5);
  CHECK(glue_ramp(0.25) == doctest::Approx(0.064969169128664062).epsilon(1e-14));
  for (double s = 0.01; s < 1.0; s += 0.01) CHECK(glue_ramp(s) + glue_ramp(1.0 - s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("window values and supports") {
  const FrequencyWindow w = FrequencyWindow::standard();
  CHECK(w.Psi(0.0) == 1.0);
  CHECK(w.Psi(1.0) == 1.0);
  CHECK(w.Psi(-0.5) == 1.0);
  CHECK(w.Psi(2.0) == 0.0);
  CHECK(w.Psi(1.5) == 0.5);
  CHECK(w.psi(1.3) == doctest::Approx(0.87042953060029408).epsilon(1e-14));
  CHECK(w.psi(0.6) == doctest::Approx(0.022977369910025615).epsilon(1e-14));
  CHECK(w.psi(0.5) == 0.0);
  CHECK(w.psi(2.0) == 0.0);
  CHECK(w.psi(0.1) == 0.0);
  CHECK(w.psi_j(3, 8.0 * 1.3) == w.psi(1.3));
  CHECK(w.id() == "glue(1,2)");
  const FrequencyWindow alt = FrequencyWindow::alternate();
  CHECK(alt.Psi(1.4) == 1.0);
  CHECK(alt.psi(0.74) == 0.0);
  CHECK_THROWS_AS(FrequencyWindow(1.0, 2.5), DomainError);
  CHECK_THROWS_AS(FrequencyWindow(1.0, 1.0), DomainError);
}

TEST_CASE("dyadic pieces telescope to one") {
  for (const auto& w : {FrequencyWindow::standard(), FrequencyWindow::alternate()}) {
    const int J = 12;
    for (int i = 0; i < 2000; ++i) {
      const double r = std::ldexp(1.0, J - 1) * i / 1999.0;
      double s = w.Psi(r);
      for (int j = 1; j <= J; ++j) s += w.psi_j(j, r);
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
}
