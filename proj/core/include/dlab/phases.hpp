#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dlab {

enum class Regime { high, low };

std::string_view to_string(Regime regime);

/// Dispersion relation phi together with its exact first and second
/// derivatives and the homogeneity exponents of its high- and low-frequency
/// behaviour.
struct PhaseFunction {
  std::string label;
  std::function<double(double)> eval;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double m1 = 1.0;
  double alpha1 = 1.0;
  double m2 = 1.0;
  double alpha2 = 1.0;
  bool has_h1 = true;
  bool has_h2 = true;
  bool has_h3 = true;
  bool has_h4 = true;
  std::optional<double> nu;
  // Built-in phases are verified by construction; user phases become usable
  // in decay scans only after accept_phase().
  bool verified = false;

  double operator()(double r) const { return eval(r); }
};

/// phi(r) = r^nu, 0 < nu < 1.
PhaseFunction fractional_phase(double nu);
/// phi(r) = sqrt(1 + r).
PhaseFunction klein_gordon_phase();
/// phi(r) = sqrt(1 + r^2).
PhaseFunction beam_phase();
/// phi(r) = r^2 + r.
PhaseFunction fourth_order_phase();
/// phi(r) = r. Exponents m1 = m2 = 1; phi'' vanishes, so no second-derivative
/// hypotheses.
PhaseFunction linear_phase();

/// Look up a built-in family by name: "fractional", "klein_gordon", "beam",
/// "fourth_order", "linear". Throws DomainError for unknown names or nu
/// outside (0, 1).
PhaseFunction builtin_phase(std::string_view family, std::optional<double> nu = std::nullopt);

/// Names accepted by builtin_phase.
const std::vector<std::string>& builtin_phase_names();

/// Phase with caller-supplied exponents; `verified` is false until the
/// hypotheses have been checked with accept_phase().
PhaseFunction custom_phase(std::string label, std::function<double(double)> eval,
                           std::function<double(double)> d1, std::function<double(double)> d2,
                           double m1, double alpha1, double m2, double alpha2, bool has_h1,
                           bool has_h2, bool has_h3, bool has_h4);

struct HypothesisCheck {
  std::string name;  // "H1" .. "H4"
  bool claimed = false;
  double exponent = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool confirmed = false;
};

struct HypothesisReport {
  std::string phase;
  std::vector<HypothesisCheck> checks;  // H1, H2, H3, H4 in order
  // Ordering constraints alpha1 <= m1 (H1 and H3) and alpha2 >= m2 (H2 and H4).
  bool ordering_ok = true;

  /// True when every claimed hypothesis is confirmed and the ordering holds.
  bool all_claimed_confirmed() const;
};

/// Band ratio above which a hypothesis is not considered confirmed.
inline constexpr double kHypothesisBand = 32.0;

/// Evaluates |phi'(r)|/r^{m-1} and |phi''(r)|/r^{alpha-2} on the grids.
/// `high_grid` must lie in [1, inf), `low_grid` in (0, 1); otherwise DomainError.
HypothesisReport verify_hypotheses(const PhaseFunction& phase, const std::vector<double>& high_grid,
                                   const std::vector<double>& low_grid);

/// Default log-spaced grids: [1, 100] and [1e-3, 0.99].
std::vector<double> default_high_grid(int points = 200);
std::vector<double> default_low_grid(int points = 200);

/// Runs verify_hypotheses on the default grids and returns a verified copy.
/// Throws PreconditionError naming the failing hypothesis.
PhaseFunction accept_phase(const PhaseFunction& phase);

struct ExponentPrediction {
  double t_exponent = 0.0;       // decay is |t|^{-t_exponent}
  double lambda_exponent = 0.0;  // growth is lambda^{lambda_exponent}
  Regime regime = Regime::high;
  bool uses_second_derivative = false;
  double n = 0.0;
};

/// Decay exponents of the frequency-localized propagator predicted from the
/// phase exponents and the homogeneous dimension n.
ExponentPrediction predict_exponents(const PhaseFunction& phase, double n, Regime regime);

}  // namespace dlab
