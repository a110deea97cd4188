#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dlab/grid.hpp"

namespace dlab {

enum class OperatorKind { hermite, twisted, laguerre };

/// One of the three model operators. Points are coordinate vectors:
/// hermite(n): x in R^n; twisted(d): z = x + iy stored as (x_1..x_d, y_1..y_d);
/// laguerre(alpha): x in (0, inf)^d with d = alpha.size().
class ModelOperator {
 public:
  static ModelOperator hermite(int n);
  static ModelOperator twisted(int d);
  static ModelOperator laguerre(std::vector<double> alpha);

  OperatorKind kind() const { return kind_; }
  /// hermite: n; twisted: complex dimension d; laguerre: d.
  int dim() const { return dim_; }
  /// Number of real coordinates of a point.
  int coordinate_dim() const { return kind_ == OperatorKind::twisted ? 2 * dim_ : dim_; }
  const std::vector<double>& alpha() const { return alpha_; }

  double homogeneous_dimension() const;
  double T0() const;
  double spectral_offset() const;
  double eigenvalue(int k) const;

  /// "hermite", "twisted", "laguerre".
  std::string kind_name() const;
  /// e.g. "hermite(n=2)", "laguerre(alpha=[0.5])".
  std::string name() const;

  /// Pointwise bound sup_x |P_k(x, x)| used for truncation tail estimates.
  double projection_bound(int k) const;

  /// Measure density at a point (1 for hermite/twisted, prod x_i^{2a_i+1}).
  double measure_density(std::span<const double> x) const;

  /// Throws DomainError when x is not a valid point.
  void check_point(std::span<const double> x) const;

 private:
  OperatorKind kind_ = OperatorKind::hermite;
  int dim_ = 1;
  std::vector<double> alpha_;
};

double eigenvalue(const ModelOperator& op, int k);

// -- Eigenbasis --------------------------------------------------------------

/// Multi-index label of an eigenfunction. hermite/laguerre: beta (size d);
/// twisted: (mu_1..mu_d, nu_1..nu_d). `level` is the k with eigenvalue 2k + offset.
struct BasisFunction {
  int level = 0;
  std::vector<int> index;
};

/// Highest level accepted for multi-index enumeration with more than one index.
inline constexpr int kMultiIndexMaxLevel = 60;

/// All basis functions with level <= max_level. For twisted operators the
/// degenerate index mu is truncated at |mu| <= mu_max (default max_level).
/// Throws CapabilityError when a multi-index enumeration exceeds the level cap.
std::vector<BasisFunction> enumerate_basis(const ModelOperator& op, int max_level,
                                           int mu_max = -1);

std::complex<double> eigenfunction(const ModelOperator& op, const BasisFunction& b,
                                   std::span<const double> x);

/// Matrix B(i, j) = eigenfunction j at point i.
Eigen::MatrixXcd basis_matrix(const ModelOperator& op, const std::vector<BasisFunction>& basis,
                              const PointSet& points);

// -- Kernels -----------------------------------------------------------------

/// P_k(x, y) for k = 0..max_level, computed without enumerating multi-indices
/// (per-coordinate tables combined by convolution; closed form for twisted).
std::vector<std::complex<double>> projection_kernels(const ModelOperator& op, int max_level,
                                                     std::span<const double> x,
                                                     std::span<const double> y);

std::complex<double> projection_kernel(const ModelOperator& op, int k, std::span<const double> x,
                                       std::span<const double> y);

/// Kernel of e^{-tL}. Real for hermite and laguerre; the twisted kernel carries
/// the oscillatory factor e^{-(i/2) Im(z . conj(w))}.
std::complex<double> heat_kernel(const ModelOperator& op, double t, std::span<const double> x,
                                 std::span<const double> y);

/// Logarithm of the (positive) laguerre heat kernel; avoids overflow at small t.
double laguerre_log_heat_kernel(const ModelOperator& op, double t, std::span<const double> x,
                                std::span<const double> y);

/// Kernel p_{it} of e^{-itL} (heat kernel at imaginary time), 0 < |t| < T0.
/// Throws CapabilityError for laguerre (only a magnitude bound is available).
std::complex<double> schrodinger_kernel(const ModelOperator& op, double t,
                                        std::span<const double> x, std::span<const double> y);

/// Closed-form |p_{it}|: (2 pi |sin 2t|)^{-n/2} resp. (4 pi |sin t|)^{-d}.
double schrodinger_kernel_magnitude(const ModelOperator& op, double t);

// -- Quadrature grids --------------------------------------------------------

/// Truncation radius where eigenfunctions up to `max_level` have Gaussian tails
/// far below 1e-14 of their peak.
double default_radius(const ModelOperator& op, int max_level);

/// Tensor composite Gauss-Legendre grid with measure weights folded in:
/// [-R, R] per axis (hermite, twisted), (0, R] with x^{2a+1} (laguerre).
PointSet quadrature_grid(const ModelOperator& op, double radius, int panels_per_axis);

// -- Assumption checks -------------------------------------------------------

struct A1Report {
  std::vector<double> t;
  std::vector<double> sup_magnitude;  // measured sup |p_{it}|
  std::vector<double> scaled;         // sup |p_{it}| |t|^{n/2}
  std::vector<double> closed_form;    // closed-form magnitude (NaN when unavailable)
  double constant = 0.0;              // max of scaled
  double max_closed_form_error = 0.0; // max relative deviation from the closed form
  bool confirmed = false;
};

struct A1Options {
  int points_per_axis = 7;     // sample grid for the sup
  double radius = 3.0;         // sample window (laguerre: (0, radius])
  double damping_ratio = 0.1;  // laguerre: epsilon = ratio * min(t)
};

/// Sup of |p_{it}| times |t|^{n/2} over the grid. Closed forms for hermite and
/// twisted; damped spectral sum e^{-(eps+it)L} for laguerre.
A1Report verify_A1(const ModelOperator& op, const std::vector<double>& t_grid,
                   const A1Options& options = {});

struct A2Report {
  double C = 0.0;
  double c = 0.0;
  std::size_t samples = 0;
  // hermite: number of samples violating p_t <= (4 pi t)^{-n/2} e^{-|x-y|^2/4t}.
  std::size_t violations = 0;
  bool bound_holds = false;
};

/// Gaussian upper bound check. hermite: the exact bound with C=1, c=4 at every
/// sample. laguerre: fitted (C, c) with mu(B(x, sqrt t)) taken over the cube
/// of half-width sqrt t in the x^{2a+1} dx measure.
A2Report verify_A2(const ModelOperator& op, const std::vector<double>& t_grid, const PointSet& points);

}  // namespace dlab
