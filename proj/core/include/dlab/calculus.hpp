#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dlab/grid.hpp"
#include "dlab/operators.hpp"
#include "dlab/specfun.hpp"
#include "dlab/window.hpp"

namespace dlab {

/// Function on the operator's domain represented by its coefficients in the
/// eigenbasis (finite span).
struct SpectralExpansion {
  ModelOperator op = ModelOperator::hermite(1);
  std::vector<BasisFunction> basis;
  Eigen::VectorXcd coeffs;

  int max_level() const;
  /// Largest sqrt(eigenvalue) carrying a nonzero coefficient (0 if none).
  double max_frequency() const;
};

/// Function of sqrt(eigenvalue).
using Multiplier = std::function<std::complex<double>(double)>;

struct SpectralMultiplier {
  Multiplier F;
  std::string label;
  // Highest level kept; -1 chooses the smallest level meeting the tail tolerance.
  int truncation = -1;
};

/// Single eigenfunction with coefficient 1.
SpectralExpansion eigenfunction_expansion(const ModelOperator& op, const BasisFunction& b);

/// `terms` basis functions drawn without replacement from levels <= max_level,
/// with standard complex Gaussian coefficients (seeded, deterministic).
SpectralExpansion random_expansion(const ModelOperator& op, int terms, int max_level,
                                   std::uint64_t seed, int mu_max = -1);

/// Orthogonal projection of sampled values (on a weighted quadrature grid)
/// onto the eigenbasis up to max_level.
SpectralExpansion project_samples(const ModelOperator& op, const PointSet& grid,
                                  const Eigen::VectorXcd& values, int max_level, int mu_max = -1);

/// F(sqrt L) f: multiplies every coefficient by F(sqrt(eigenvalue)).
SpectralExpansion apply_multiplier(const SpectralExpansion& f, const Multiplier& F);

/// Values of f at the points of a grid.
Eigen::VectorXcd evaluate(const SpectralExpansion& f, const PointSet& points);

/// L^2 norm from the coefficients (Parseval).
double l2_norm(const SpectralExpansion& f);

/// Weighted L^p norm of samples; p = infinity gives the max modulus.
double lp_norm(const Eigen::VectorXcd& values, const std::vector<double>& weights, double p);

/// Tabulated complex kernel with metadata.
struct SampledKernel {
  PointSet x;
  PointSet y;
  Eigen::MatrixXcd values;
  std::string operator_name;
  std::string label;
  double t = 0.0;
  double lambda = 0.0;
  int truncation = 0;
  double tail_bound = 0.0;
};

/// Level cap for kernel sums.
inline constexpr int kKernelMaxLevel = kHermiteMaxOrder;

/// Tail sum_{k > K} |F(sqrt lambda_k)| sup|P_k|, estimated over a long finite
/// stretch of levels; infinity when the terms have not decayed by its end.
double truncation_tail(const ModelOperator& op, const Multiplier& F, int K);

/// Smallest K <= cap with truncation_tail <= tolerance; TruncationError otherwise.
int choose_truncation(const ModelOperator& op, const Multiplier& F, double tolerance,
                      int cap = kKernelMaxLevel);

/// K(x, y) = sum_{k <= K} F(sqrt(2k + offset)) P_k(x, y) on x_points x y_points.
SampledKernel multiplier_kernel(const ModelOperator& op, const SpectralMultiplier& mult,
                                const PointSet& x_points, const PointSet& y_points,
                                double tail_tolerance = 1e-10);

// -- Besov norms -------------------------------------------------------------

struct BesovBlock {
  int j = 0;  // j = INT_MIN marks the low-frequency Psi block
  double norm = 0.0;
};

struct BesovResult {
  double value = 0.0;
  std::vector<BesovBlock> blocks;
  std::string window_id;
  double radius = 0.0;  // spatial truncation window of the quadrature grid
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Non-homogeneous norm ||Psi(sqrt L) f||_p + (sum_{j=1}^J 2^{jsq} ||psi_j(sqrt L) f||_p^q)^{1/q}.
/// DomainError when f has spectral content above 2^J.
BesovResult besov_norm(const ModelOperator& op, const SpectralExpansion& f, double s, double p,
                       double q, const FrequencyWindow& window, int J, const PointSet& grid);

/// Homogeneous norm (sum over all j in Z up to J with nonzero blocks).
BesovResult besov_norm_homogeneous(const ModelOperator& op, const SpectralExpansion& f, double s,
                                   double p, double q, const FrequencyWindow& window, int J,
                                   const PointSet& grid);

/// Quadrature grid adequate for L^p norms of expansions up to `max_level`.
PointSet norm_grid(const ModelOperator& op, int max_level);

// -- Operator-norm scaling ---------------------------------------------------

struct ScalingPoint {
  double t = 0.0;
  double norm = 0.0;
  double scaled = 0.0;  // norm * t^{n/p - n/q}
};

struct ScalingResult {
  double p = 1.0;
  double q = kInfinity;
  double exponent = 0.0;  // n/p - n/q
  std::vector<ScalingPoint> points;
  double constant = 0.0;  // max of scaled
};

/// Kernel-based estimates of ||phi(t sqrt L)||_{L^p -> L^q} for
/// (p,q) in {(1,inf), (2,2), (1,2), (2,inf)}; CapabilityError otherwise.
/// `samples` is the point set over which kernel suprema are taken.
ScalingResult operator_norm_scaling(const ModelOperator& op, const std::function<double(double)>& profile,
                              const std::vector<double>& t_grid, double p, double q,
                              const PointSet& samples, double tail_tolerance = 1e-10);

}  // namespace dlab
