#include "dlab/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dlab/errors.hpp"

namespace dlab {

namespace {

constexpr double kRescaleAbove = 1e200;
constexpr double kRescaleFactor = 1e-200;
const double kLogRescale = std::log(1e200);

// Applies exp(log_factor) to a value without losing it when the factor
// alone would underflow.
inline double apply_log_factor(double v, double log_factor, double factor) {
  if (factor > 0.0) return v * factor;
  if (v == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(v)) + log_factor), v);
}

inline double safe_exp_factor(double log_factor) {
  return log_factor > -700.0 ? std::exp(log_factor) : 0.0;
}

}  // namespace

void hermite_all(int max_order, double x, std::vector<double>& out) {
  if (max_order < 0) throw DomainError("hermite_all: negative order");
  if (max_order > kHermiteMaxOrder) {
    throw CapabilityError("hermite order " + std::to_string(max_order) + " exceeds cap " +
                          std::to_string(kHermiteMaxOrder));
  }
  out.resize(max_order + 1);
  // Recurrence runs on v_k = h_k(x) e^{x^2/2} / exp(log_scale); the Gaussian
  // factor is reapplied per entry.
  double log_factor = -0.5 * x * x;
  double factor = safe_exp_factor(log_factor);
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  out[0] = apply_log_factor(cur, log_factor, factor);
  for (int k = 0; k < max_order; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1.0)) * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleFactor;
      prev *= kRescaleFactor;
      log_factor += kLogRescale;
      factor = safe_exp_factor(log_factor);
    }
    out[k + 1] = apply_log_factor(cur, log_factor, factor);
  }
}

std::vector<double> hermite_all(int max_order, double x) {
  std::vector<double> out;
  hermite_all(max_order, x, out);
  return out;
}

double hermite_fn(int k, double x) {
  if (k < 0) throw DomainError("hermite_fn: negative order");
  std::vector<double> out;
  hermite_all(k, x, out);
  return out[k];
}

double laguerre_poly(int k, double alpha, double x) {
  if (k < 0) throw DomainError("laguerre_poly: negative order");
  return laguerre_poly_all(k, alpha, x)[k];
}

std::vector<double> laguerre_poly_all(int max_order, double alpha, double x) {
  if (!(alpha > -1.0)) throw DomainError("laguerre_poly: alpha must exceed -1");
  if (max_order < 0) throw DomainError("laguerre_poly: negative order");
  std::vector<double> out(max_order + 1);
  out[0] = 1.0;
  if (max_order >= 1) out[1] = 1.0 + alpha - x;
  for (int j = 1; j < max_order; ++j) {
    out[j + 1] = ((2.0 * j + 1.0 + alpha - x) * out[j] - (j + alpha) * out[j - 1]) / (j + 1.0);
  }
  return out;
}

namespace {

// Normalized Laguerre recurrence for l_j(u) = sqrt(j!/Gamma(j+alpha+1)) L_j(u),
// multiplied by exp(extra_log - u/2). Rescaled so large u and j neither
// overflow nor underflow prematurely.
std::vector<double> normalized_laguerre_damped(int max_order, double alpha, double u,
                                               double extra_log) {
  std::vector<double> out(max_order + 1);
  double log_factor = extra_log - 0.5 * u;
  double factor = safe_exp_factor(log_factor);
  double prev = 0.0;
  double cur = std::exp(-0.5 * std::lgamma(alpha + 1.0));
  out[0] = apply_log_factor(cur, log_factor, factor);
  for (int j = 0; j < max_order; ++j) {
    const double denom = std::sqrt((j + 1.0) * (j + 1.0 + alpha));
    const double a = (2.0 * j + 1.0 + alpha - u) / denom;
    const double b = j == 0 ? 0.0 : std::sqrt(j * (j + alpha)) / denom;
    const double next = a * cur - b * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleFactor;
      prev *= kRescaleFactor;
      log_factor += kLogRescale;
      factor = safe_exp_factor(log_factor);
    }
    out[j + 1] = apply_log_factor(cur, log_factor, factor);
  }
  return out;
}

void check_laguerre_fn_args(double alpha, double x) {
  if (!(alpha > -0.5)) throw DomainError("laguerre_fn: alpha must exceed -1/2");
  if (!(x > 0.0)) throw DomainError("laguerre_fn: x must be positive");
}

}  // namespace

std::vector<double> laguerre_fn_all(int max_order, double alpha, double x) {
  check_laguerre_fn_args(alpha, x);
  if (max_order < 0) throw DomainError("laguerre_fn: negative order");
  return normalized_laguerre_damped(max_order, alpha, 0.5 * x * x,
                                    -0.5 * alpha * std::numbers::ln2);
}

double laguerre_fn(int k, double alpha, double x) {
  if (k < 0) throw DomainError("laguerre_fn: negative order");
  return laguerre_fn_all(k, alpha, x)[k];
}

std::vector<double> laguerre_damped_all(int max_order, double alpha, double u) {
  if (!(alpha > -1.0)) throw DomainError("laguerre_damped_all: alpha must exceed -1");
  if (u < 0.0) throw DomainError("laguerre_damped_all: negative argument");
  std::vector<double> out = normalized_laguerre_damped(max_order, alpha, u, 0.0);
  for (int k = 0; k <= max_order; ++k) {
    out[k] *= std::exp(0.5 * (std::lgamma(k + alpha + 1.0) - std::lgamma(k + 1.0)));
  }
  return out;
}

double laguerre_at_zero(int k, double alpha) {
  return std::exp(std::lgamma(k + alpha + 1.0) - std::lgamma(k + 1.0) - std::lgamma(alpha + 1.0));
}

// -- Bessel ------------------------------------------------------------------

ScaledReal bessel_i_series(double alpha, double x) {
  if (!(alpha > -1.0)) throw DomainError("bessel_i: alpha must exceed -1");
  if (x < 0.0) throw DomainError("bessel_i: negative argument");
  if (x == 0.0) {
    if (alpha == 0.0) return {1.0, 0.0};
    if (alpha > 0.0) return {0.0, 0.0};
    return {HUGE_VAL, 0.0};
  }
  const double q = 0.25 * x * x;
  // Term ratio T_{m+1}/T_m = q/((m+1)(m+1+alpha)); start at the peak term.
  int peak = 0;
  while (q / ((peak + 1.0) * (peak + 1.0 + alpha)) >= 1.0) ++peak;
  const double log_peak = (2.0 * peak + alpha) * std::log(0.5 * x) - std::lgamma(peak + 1.0) -
                          std::lgamma(peak + alpha + 1.0);
  double sum = 1.0;
  double term = 1.0;
  for (int m = peak;; ++m) {
    term *= q / ((m + 1.0) * (m + 1.0 + alpha));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  term = 1.0;
  for (int m = peak; m > 0; --m) {
    term *= (m * (m + alpha)) / q;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  // Keep small-argument results in plain form.
  if (log_peak > -700.0 && log_peak < 700.0) return {sum * std::exp(log_peak), 0.0};
  return {sum, log_peak};
}

double bessel_i_asymptotic_scaled(double alpha, double x, double* error_estimate) {
  if (!(x > 0.0)) throw DomainError("bessel_i_asymptotic_scaled: x must be positive");
  const double mu = 4.0 * alpha * alpha;
  // Dominant series sum_k (-1)^k a_k x^{-k}, truncated at its smallest term.
  double sum = 1.0;
  double term = 1.0;
  double omitted = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term) && k > 1) {
      omitted = std::abs(next);
      break;
    }
    term = next;
    sum += term;
    if (term == 0.0) {
      omitted = 0.0;
      break;
    }
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      omitted = std::abs(term);
      break;
    }
  }
  // Subdominant contribution on the positive real axis (Stokes line):
  // -sin(alpha pi) e^{-2x} sum_k a_k x^{-k}, leading term suffices.
  const double stokes = -std::sin(alpha * std::numbers::pi) * std::exp(-2.0 * x);
  const double value = (sum + stokes) / std::sqrt(2.0 * std::numbers::pi * x);
  if (error_estimate) {
    *error_estimate = (omitted + std::abs(stokes) * std::abs(mu - 1.0) / (8.0 * x)) /
                      std::abs(sum + stokes);
  }
  return value;
}

ScaledReal bessel_i(double alpha, double x) {
  if (!(alpha > -1.0)) throw DomainError("bessel_i: alpha must exceed -1");
  if (x < 0.0) throw DomainError("bessel_i: negative argument");
  if (x <= bessel_i_switch(alpha)) return bessel_i_series(alpha, x);
  double err = 0.0;
  const double scaled = bessel_i_asymptotic_scaled(alpha, x, &err);
  if (err <= 1e-15) return {scaled, x};
  const ScaledReal s = bessel_i_series(alpha, x);
  if (s.exponent != 0.0) return s;
  return {s.mantissa * std::exp(-x), x};
}

}  // namespace dlab
