#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dlab/calculus.hpp"
#include "dlab/operators.hpp"
#include "dlab/phases.hpp"
#include "dlab/window.hpp"

namespace dlab {

struct SpatialGridConfig {
  int points_per_axis = 61;
  // Half-width of the sampling cube; <= 0 selects 2 sqrt(2 lambda) + 4.
  double radius = 0.0;
};

double default_scan_radius(double lambda);

enum class CellStatus { ok, empty_shell, boundary_max, error };

std::string_view to_string(CellStatus s);

struct SupnormResult {
  double value = 0.0;
  CellStatus status = CellStatus::ok;
  int shell_lo = 0;  // levels k with 1/2 < sqrt(lambda_k)/lambda < 2
  int shell_hi = -1;
  std::string message;
};

/// Shell levels [lo, hi] of the dyadic window around lambda (hi < lo if empty).
std::pair<int, int> dyadic_shell(const ModelOperator& op, double lambda);

/// max |K| over the sampling grid, K = sum_{k in shell} psi(sqrt(lambda_k)/lambda)
/// e^{it phi(lambda_k)} P_k. The phase must be verified.
SupnormResult localized_propagator_supnorm(const ModelOperator& op, const PhaseFunction& phase,
                                           const FrequencyWindow& window, double lambda, double t,
                                           const SpatialGridConfig& grid = {});

/// The same kernel tabulated on explicit point sets (reference path).
SampledKernel localized_propagator_kernel(const ModelOperator& op, const PhaseFunction& phase,
                                          const FrequencyWindow& window, double lambda, double t,
                                          const PointSet& x_points, const PointSet& y_points);

struct DecayScan {
  std::string operator_name;
  std::string phase_label;
  double n = 0.0;
  std::vector<double> t_grid;
  std::vector<double> lambda_grid;
  Eigen::MatrixXd M;  // rows t, columns lambda
  std::vector<std::vector<CellStatus>> status;
  std::vector<std::string> messages;
  SpatialGridConfig grid;
};

/// Fills the (t, lambda) matrix; cells are computed by `jobs` workers and
/// placed by index, so the result does not depend on scheduling.
DecayScan scan(const ModelOperator& op, const PhaseFunction& phase, const FrequencyWindow& window,
               const std::vector<double>& t_grid, const std::vector<double>& lambda_grid,
               const SpatialGridConfig& grid = {}, int jobs = 1);

struct DecayFit {
  std::string variable;  // "t" or "lambda"
  double at = 0.0;       // fixed lambda (time fit) or fixed t (lambda fit)
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  bool pass = false;   // time fit: slope <= predicted + tol; lambda fit: |slope - predicted| <= tol
  bool sharp = false;  // |slope - predicted| <= tol
  std::vector<double> x;
  std::vector<double> y;
};

/// Ordinary least squares of log y on log x. FitError on fewer than
/// `min_points` points or non-positive / non-finite values.
DecayFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points);

/// Slope of log M against log t over t in [t_lo, t_hi] at fixed lambda.
DecayFit fit_time_exponent(const DecayScan& scan, const PhaseFunction& phase, double lambda,
                           double t_lo, double t_hi, double tolerance = 0.15);

/// Slope of log M against log lambda at fixed t.
DecayFit fit_lambda_exponent(const DecayScan& scan, const PhaseFunction& phase, double t,
                             double tolerance = 0.3);

/// max over t of | ||e^{it phi(L)} f||_2 - ||f||_2 |, norms by quadrature.
double l2_unitarity(const ModelOperator& op, const PhaseFunction& phase, const SpectralExpansion& f,
                    const std::vector<double>& t_list);

}  // namespace dlab
