#pragma once

#include <cmath>
#include <vector>

namespace dlab {

/// Highest Hermite order accepted by hermite_fn / hermite_all.
inline constexpr int kHermiteMaxOrder = 8192;

/// Positive real stored as mantissa * exp(exponent); used where the value
/// itself overflows (Bessel I at large argument, Laguerre heat kernel at small t).
struct ScaledReal {
  double mantissa = 0.0;
  double exponent = 0.0;

  double value() const { return mantissa * std::exp(exponent); }
  double log() const { return std::log(mantissa) + exponent; }
};

// -- Hermite functions -------------------------------------------------------

/// h_0(x) .. h_K(x), normalized Hermite functions, via the normalized
/// three-term recurrence with running rescaling (no overflow or premature
/// underflow for |x| <= 40, K <= kHermiteMaxOrder).
std::vector<double> hermite_all(int max_order, double x);

/// Same as hermite_all, writing into `out` (resized to max_order + 1).
void hermite_all(int max_order, double x, std::vector<double>& out);

/// Single normalized Hermite function h_k(x). Throws CapabilityError above the cap.
double hermite_fn(int k, double x);

// -- Laguerre ----------------------------------------------------------------

/// Laguerre polynomial L_k^{(alpha)}(x) by upward recurrence.
/// Throws DomainError for alpha <= -1 or x < 0.
double laguerre_poly(int k, double alpha, double x);

/// L_0^{(alpha)}(x) .. L_K^{(alpha)}(x).
std::vector<double> laguerre_poly_all(int max_order, double alpha, double x);

/// psi_k^{(alpha)}(x) = (2^{-alpha} k!/Gamma(k+alpha+1))^{1/2} L_k^{(alpha)}(x^2/2) e^{-x^2/4},
/// orthonormal in L^2((0,inf), x^{2 alpha + 1} dx).
/// Throws DomainError for alpha <= -1/2 or x <= 0.
double laguerre_fn(int k, double alpha, double x);

/// psi_0 .. psi_K at x, computed by a normalized, rescaled recurrence.
std::vector<double> laguerre_fn_all(int max_order, double alpha, double x);

/// Unnormalized Laguerre functions L_k^{(alpha)}(u) e^{-u/2}, k = 0..K, for
/// alpha > -1 and u >= 0. Stable for large k and u (rescaled recurrence).
std::vector<double> laguerre_damped_all(int max_order, double alpha, double u);

// -- Bessel ------------------------------------------------------------------

/// Branch switch for bessel_i: power series below, exponentially scaled
/// large-argument evaluation above.
inline double bessel_i_switch(double alpha) { return std::max(10.0, 2.0 * alpha); }

/// Modified Bessel function I_alpha(x), alpha > -1, x >= 0, as a scaled pair.
ScaledReal bessel_i(double alpha, double x);

/// Power-series branch (valid everywhere, used below the switch).
ScaledReal bessel_i_series(double alpha, double x);

/// Large-argument Hankel expansion of e^{-x} I_alpha(x). `error_estimate`
/// receives the relative size of the first omitted term.
double bessel_i_asymptotic_scaled(double alpha, double x, double* error_estimate = nullptr);

// -- Gamma helpers -----------------------------------------------------------

/// Gamma(k+alpha+1)/(Gamma(k+1) Gamma(alpha+1)) = L_k^{(alpha)}(0).
double laguerre_at_zero(int k, double alpha);

}  // namespace dlab
