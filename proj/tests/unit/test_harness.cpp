#include <doctest.h>

#include <cmath>

#include "dlab/errors.hpp"
#include "dlab/grid.hpp"
#include "dlab/harness.hpp"

using namespace dlab;

TEST_CASE("dyadic shells") {
  const auto [lo, hi] = dyadic_shell(ModelOperator::hermite(1), 8.0);
  CHECK(lo == 8);    // 2k+1 > 16
  CHECK(hi == 127);  // 2k+1 < 256
  const auto e = dyadic_shell(ModelOperator::hermite(1), 0.5);
  CHECK(e.second < e.first);
  const auto tw = dyadic_shell(ModelOperator::twisted(1), 2.0);
  CHECK(tw.first == 1);
  CHECK(tw.second == 7);
}

TEST_CASE("fast sup-norm paths agree with the reference kernel") {
  const PhaseFunction ph = accept_phase(fractional_phase(0.5));
  const FrequencyWindow w = FrequencyWindow::standard();
  for (const auto& op : {ModelOperator::hermite(1), ModelOperator::hermite(2), ModelOperator::twisted(1),
                         ModelOperator::laguerre({0.5}), ModelOperator::laguerre({0.0, 1.0})}) {
    CAPTURE(op.name());
    const SupnormResult r = localized_propagator_supnorm(op, ph, w, 4.0, 0.3, {9, 4.0});
    std::vector<Axis> axes;
    for (int d = 0; d < op.coordinate_dim(); ++d) {
      if (op.kind() == OperatorKind::laguerre) {
        Axis a;
        for (int i = 1; i <= 9; ++i) a.nodes.push_back(4.0 * i / 9);
        axes.push_back(a);
      } else {
        axes.push_back(uniform_axis(-4.0, 4.0, 9));
      }
    }
    const PointSet P = tensor_grid(axes);
    const SampledKernel K = localized_propagator_kernel(op, ph, w, 4.0, 0.3, P, P);
    CHECK(r.value == doctest::Approx(K.values.cwiseAbs().maxCoeff()).epsilon(1e-12));
  }
}

TEST_CASE("empty shells, capability limits and preconditions") {
  const PhaseFunction ph = accept_phase(fractional_phase(0.5));
  const FrequencyWindow w = FrequencyWindow::standard();
  const SupnormResult r = localized_propagator_supnorm(ModelOperator::hermite(1), ph, w, 0.5, 0.3);
  CHECK(r.status == CellStatus::empty_shell);
  CHECK(r.value == 0.0);
  CHECK_THROWS_AS(localized_propagator_supnorm(ModelOperator::hermite(3), ph, w, 4.0, 0.3, {5, 3.0}),
                  CapabilityError);
  PhaseFunction unchecked = fractional_phase(0.5);
  unchecked.verified = false;
  CHECK_THROWS_AS(localized_propagator_supnorm(ModelOperator::hermite(1), unchecked, w, 4.0, 0.3), PreconditionError);
  CHECK_THROWS_AS(localized_propagator_supnorm(ModelOperator::hermite(1), ph, w, 4.0, 0.75), DomainError);
}

TEST_CASE("scan result does not depend on the worker count") {
  const PhaseFunction ph = accept_phase(klein_gordon_phase());
  const FrequencyWindow w = FrequencyWindow::standard();
  const std::vector<double> ts{0.1, 0.2, 0.4}, ls{2.0, 4.0, 0.5};
  const DecayScan a = scan(ModelOperator::hermite(2), ph, w, ts, ls, {21, 0.0}, 1);
  const DecayScan b = scan(ModelOperator::hermite(2), ph, w, ts, ls, {21, 0.0}, 3);
  CHECK(a.M == b.M);
  CHECK(a.status[0][2] == CellStatus::empty_shell);
  CHECK(a.n == 2.0);
}

TEST_CASE("log-log regression") {
  std::vector<double> x, y;
  for (int i = 0; i < 6; ++i) {
    x.push_back(0.1 * (i + 1));
    y.push_back(3.0 * std::pow(x.back(), -0.7));
  }
  const DecayFit f = loglog_fit(x, y, 4);
  CHECK(f.slope == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.stderr_ < 1e-12);
  CHECK_THROWS_AS(loglog_fit({1, 2, 3}, {1, 2, 3}, 4), FitError);
  CHECK_THROWS_AS(loglog_fit({1, 2, 3, 4}, {1, 0, 3, 4}, 4), FitError);
}

TEST_CASE("schrodinger kernel sup decays like |t|^{-n/2} near t = 0") {
  for (const auto& op : {ModelOperator::hermite(1), ModelOperator::hermite(2), ModelOperator::twisted(1)}) {
    std::vector<double> t, m;
    for (int i = 0; i < 8; ++i) {
      t.push_back(1e-5 * std::pow(2.0, i));
      m.push_back(schrodinger_kernel_magnitude(op, t.back()));
    }
    CHECK(loglog_fit(t, m, 4).slope == doctest::Approx(-op.homogeneous_dimension() / 2).epsilon(1e-6));
  }
}

TEST_CASE("fit semantics on a synthetic scan") {
  const PhaseFunction kg = accept_phase(klein_gordon_phase());
  DecayScan s;
  s.n = 2.0;
  s.t_grid = {0.05, 0.1, 0.2, 0.4, 0.6};
  s.lambda_grid = {4.0, 8.0, 16.0};
  s.M.resize(5, 3);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) s.M(i, j) = std::pow(s.t_grid[i], -0.9) * std::pow(s.lambda_grid[j], 1.5);
  }
  const DecayFit ft = fit_time_exponent(s, kg, 8.0, 0.05, 0.6);
  CHECK(ft.predicted == -0.5);
  CHECK(ft.slope == doctest::Approx(-0.9));
  CHECK(ft.pass);        // faster decay is consistent with the bound
  CHECK_FALSE(ft.sharp);
  const DecayFit fl = fit_lambda_exponent(s, kg, 0.2);
  CHECK(fl.predicted == 1.5);
  CHECK(fl.pass);
  CHECK_THROWS_AS(fit_time_exponent(s, kg, 8.0, 0.3, 0.6), FitError);
  CHECK_THROWS_AS(fit_lambda_exponent(s, kg, 0.3), FitError);
}

TEST_CASE("unitarity of a single eigenfunction") {
  const auto op = ModelOperator::hermite(1);
  const SpectralExpansion f = eigenfunction_expansion(op, BasisFunction{4, {4}});
  CHECK(l2_unitarity(op, accept_phase(beam_phase()), f, {0.1, 0.5}) < 1e-13);
}
