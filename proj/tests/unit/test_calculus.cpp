#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "dlab/calculus.hpp"
#include "dlab/errors.hpp"
#include "dlab/phases.hpp"

using namespace dlab;
using cplx = std::complex<double>;

namespace {

// Kernel of F(sqrt H), H = -d^2/dx^2 + x^2, from a sinc-DVR discretization on
// [-L, L] diagonalized by Eigen. Spectrally accurate for smooth decaying F.
Eigen::MatrixXcd dvr_kernel(const std::function<cplx(double)>& F, double L, int N, std::vector<double>& x) {
  const double h = 2.0 * L / (N - 1);
  x.resize(N);
  for (int i = 0; i < N; ++i) x[i] = -L + h * i;
  Eigen::MatrixXd H(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j) {
        H(i, j) = M_PI * M_PI / (3.0 * h * h) + x[i] * x[i];
      } else {
        const int d = i - j;
        H(i, j) = 2.0 * ((d % 2) ? -1.0 : 1.0) / (h * h * d * d);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  Eigen::VectorXcd f(N);
  for (int m = 0; m < N; ++m) f[m] = F(std::sqrt(es.eigenvalues()[m]));
  const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
  return V * f.asDiagonal() * V.transpose() / h;
}

}  // namespace

TEST_CASE("multiplier kernel matches an independent matrix-function evaluation") {
  const PhaseFunction kg = klein_gordon_phase();
  const std::function<cplx(double)> F = [&kg](double r) {
    return std::exp(-0.2 * r * r) * std::polar(1.0, 0.3 * kg.eval(r * r));
  };
  std::vector<double> x;
  const Eigen::MatrixXcd ref = dvr_kernel(F, 9.0, 181, x);
  PointSet pts;
  pts.dim = 1;
  std::vector<int> idx;
  for (int i = 0; i < 181; ++i) {
    if (std::abs(x[i]) <= 3.0 && i % 5 == 0) {
      pts.coords.push_back(x[i]);
      idx.push_back(i);
    }
  }
  SpectralMultiplier m{F, "heat-damped klein-gordon", -1};
  const SampledKernel K = multiplier_kernel(ModelOperator::hermite(1), m, pts, pts);
  double err = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) err = std::max(err, std::abs(K.values(a, b) - ref(idx[a], idx[b])));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("truncation choice") {
  const auto op = ModelOperator::hermite(1);
  const Multiplier heat = [](double r) { return cplx(std::exp(-0.5 * r * r)); };
  const int K = choose_truncation(op, heat, 1e-12);
  CHECK(truncation_tail(op, heat, K) <= 1e-12);
  CHECK(truncation_tail(op, heat, K - 1) > 1e-12);
  CHECK_THROWS_AS(choose_truncation(op, [](double) { return cplx(1.0); }, 1e-8, 400), TruncationError);
}

TEST_CASE("spectral expansions") {
  for (const auto& op : {ModelOperator::hermite(2), ModelOperator::twisted(1), ModelOperator::laguerre({0.5})}) {
    CAPTURE(op.name());
    const SpectralExpansion f = random_expansion(op, 8, 10, 42);
    const SpectralExpansion g = random_expansion(op, 8, 10, 42);
    CHECK(f.coeffs == g.coeffs);
    CHECK(f.basis.size() == 8);
    const PointSet grid = norm_grid(op, f.max_level());
    const double q = lp_norm(evaluate(f, grid), grid.weights, 2.0);
    CHECK(q == doctest::Approx(l2_norm(f)).epsilon(1e-10));
    const auto back = project_samples(op, grid, evaluate(f, grid), 10);
    const SpectralExpansion h = apply_multiplier(f, [](double r) { return cplx(0.0, r * r); });
    for (std::size_t i = 0; i < f.basis.size(); ++i) {
      CHECK(std::abs(h.coeffs[i] - cplx(0.0, op.eigenvalue(f.basis[i].level)) * f.coeffs[i]) < 1e-12);
    }
    CHECK(std::abs(l2_norm(back) - l2_norm(f)) < 1e-9);
  }
}

TEST_CASE("besov norms") {
  const auto op = ModelOperator::hermite(1);
  const FrequencyWindow w = FrequencyWindow::standard();
  BasisFunction b{5, {5}};
  const SpectralExpansion f = eigenfunction_expansion(op, b);  // sqrt(11) lies in psi_1 and psi_2
  const PointSet grid = norm_grid(op, 5);
  const BesovResult r = besov_norm(op, f, 0.0, 2.0, 2.0, w, 4, grid);
  const double p1 = w.psi_j(1, std::sqrt(11.0)), p2 = w.psi_j(2, std::sqrt(11.0));
  CHECK(r.value == doctest::Approx(std::hypot(p1, p2)).epsilon(1e-9));
  CHECK(besov_norm_homogeneous(op, f, 0.0, 2.0, 2.0, w, 4, grid).value == doctest::Approx(r.value).epsilon(1e-14));
  CHECK_THROWS_AS(besov_norm(op, f, 0.0, 2.0, 2.0, w, 1, grid), DomainError);
}

TEST_CASE("operator-norm scaling of phi(t sqrt L)") {
  const auto op = ModelOperator::hermite(1);
  const auto profile = [](double r) { return std::exp(-r * r); };
  const PointSet pts = tensor_grid({uniform_axis(-2.0, 2.0, 9)});
  const ScalingResult s22 = operator_norm_scaling(op, profile, {0.1, 0.5}, 2.0, 2.0, pts);
  CHECK(s22.exponent == 0.0);
  for (const auto& p : s22.points) CHECK(p.norm == doctest::Approx(std::exp(-p.t * p.t)).epsilon(1e-12));
  const ScalingResult s1 = operator_norm_scaling(op, profile, {0.1, 0.2, 0.4}, 1.0, kInfinity, pts);
  CHECK(s1.exponent == 1.0);
  CHECK(s1.constant > 0.0);
  CHECK_THROWS_AS(operator_norm_scaling(op, profile, {0.1}, 1.0, 3.0, pts), CapabilityError);
}
