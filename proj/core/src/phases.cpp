#include "dlab/phases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dlab/errors.hpp"

namespace dlab {

std::string_view to_string(Regime regime) { return regime == Regime::high ? "high" : "low"; }

PhaseFunction fractional_phase(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("fractional requires 0<nu<1");
  PhaseFunction p;
  p.label = "fractional";
  p.eval = [nu](double r) { return std::pow(r, nu); };
  p.d1 = [nu](double r) { return nu * std::pow(r, nu - 1.0); };
  p.d2 = [nu](double r) { return nu * (nu - 1.0) * std::pow(r, nu - 2.0); };
  p.m1 = p.alpha1 = p.m2 = p.alpha2 = nu;
  p.nu = nu;
  p.verified = true;
  return p;
}

PhaseFunction klein_gordon_phase() {
  PhaseFunction p;
  p.label = "klein_gordon";
  p.eval = [](double r) { return std::sqrt(1.0 + r); };
  p.d1 = [](double r) { return 0.5 / std::sqrt(1.0 + r); };
  p.d2 = [](double r) { return -0.25 * std::pow(1.0 + r, -1.5); };
  p.m1 = 0.5;
  p.alpha1 = 0.5;
  p.m2 = 1.0;
  p.alpha2 = 2.0;
  p.verified = true;
  return p;
}

PhaseFunction beam_phase() {
  PhaseFunction p;
  p.label = "beam";
  p.eval = [](double r) { return std::sqrt(1.0 + r * r); };
  p.d1 = [](double r) { return r / std::sqrt(1.0 + r * r); };
  p.d2 = [](double r) { return std::pow(1.0 + r * r, -1.5); };
  p.m1 = 1.0;
  p.alpha1 = -1.0;
  p.m2 = 2.0;
  p.alpha2 = 2.0;
  p.verified = true;
  return p;
}

PhaseFunction fourth_order_phase() {
  PhaseFunction p;
  p.label = "fourth_order";
  p.eval = [](double r) { return r * r + r; };
  p.d1 = [](double r) { return 2.0 * r + 1.0; };
  p.d2 = [](double) { return 2.0; };
  p.m1 = 2.0;
  p.alpha1 = 2.0;
  p.m2 = 1.0;
  p.alpha2 = 2.0;
  p.verified = true;
  return p;
}

PhaseFunction linear_phase() {
  PhaseFunction p;
  p.label = "linear";
  p.eval = [](double r) { return r; };
  p.d1 = [](double) { return 1.0; };
  p.d2 = [](double) { return 0.0; };
  p.m1 = p.m2 = 1.0;
  p.alpha1 = p.alpha2 = 1.0;
  p.has_h3 = p.has_h4 = false;
  p.verified = true;
  return p;
}

const std::vector<std::string>& builtin_phase_names() {
  static const std::vector<std::string> names{"fractional", "klein_gordon", "beam",
                                              "fourth_order", "linear"};
  return names;
}

PhaseFunction builtin_phase(std::string_view family, std::optional<double> nu) {
  if (family == "fractional") {
    if (!nu) throw DomainError("fractional requires nu");
    return fractional_phase(*nu);
  }
  if (family == "klein_gordon") return klein_gordon_phase();
  if (family == "beam") return beam_phase();
  if (family == "fourth_order") return fourth_order_phase();
  if (family == "linear") return linear_phase();
  throw DomainError("unknown phase family '" + std::string(family) + "'");
}

PhaseFunction custom_phase(std::string label, std::function<double(double)> eval,
                           std::function<double(double)> d1, std::function<double(double)> d2,
                           double m1, double alpha1, double m2, double alpha2, bool has_h1,
                           bool has_h2, bool has_h3, bool has_h4) {
  PhaseFunction p;
  p.label = std::move(label);
  p.eval = std::move(eval);
  p.d1 = std::move(d1);
  p.d2 = std::move(d2);
  p.m1 = m1;
  p.alpha1 = alpha1;
  p.m2 = m2;
  p.alpha2 = alpha2;
  p.has_h1 = has_h1;
  p.has_h2 = has_h2;
  p.has_h3 = has_h3;
  p.has_h4 = has_h4;
  p.verified = false;
  return p;
}

bool HypothesisReport::all_claimed_confirmed() const {
  if (!ordering_ok) return false;
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return !c.claimed || c.confirmed; });
}

namespace {

HypothesisCheck band_check(std::string name, bool claimed, double exponent,
                           const std::vector<double>& grid,
                           const std::function<double(double)>& deriv, double shift) {
  HypothesisCheck c;
  c.name = std::move(name);
  c.claimed = claimed;
  c.exponent = exponent;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double r : grid) {
    const double ratio = std::abs(deriv(r)) / std::pow(r, exponent - shift);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  c.min_ratio = lo;
  c.max_ratio = hi;
  c.confirmed = std::isfinite(hi) && lo > 0.0 && hi / lo <= kHypothesisBand;
  return c;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    out[i] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  return out;
}

}  // namespace

HypothesisReport verify_hypotheses(const PhaseFunction& phase, const std::vector<double>& high_grid,
                                   const std::vector<double>& low_grid) {
  if (high_grid.empty() || low_grid.empty()) throw DomainError("verify_hypotheses: empty grid");
  for (double r : high_grid) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw DomainError("high-frequency grid point outside [1,inf)");
  }
  for (double r : low_grid) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("low-frequency grid point outside (0,1)");
  }
  HypothesisReport rep;
  rep.phase = phase.label;
  rep.checks.push_back(band_check("H1", phase.has_h1, phase.m1, high_grid, phase.d1, 1.0));
  rep.checks.push_back(band_check("H2", phase.has_h2, phase.m2, low_grid, phase.d1, 1.0));
  rep.checks.push_back(band_check("H3", phase.has_h3, phase.alpha1, high_grid, phase.d2, 2.0));
  rep.checks.push_back(band_check("H4", phase.has_h4, phase.alpha2, low_grid, phase.d2, 2.0));
  if (phase.has_h1 && phase.has_h3 && phase.alpha1 > phase.m1) rep.ordering_ok = false;
  if (phase.has_h2 && phase.has_h4 && phase.alpha2 < phase.m2) rep.ordering_ok = false;
  if (phase.has_h4 && !(phase.alpha2 > 0.0)) rep.ordering_ok = false;
  return rep;
}

std::vector<double> default_high_grid(int points) { return log_grid(1.0, 100.0, points); }
std::vector<double> default_low_grid(int points) { return log_grid(1e-3, 0.99, points); }

PhaseFunction accept_phase(const PhaseFunction& phase) {
  const HypothesisReport rep = verify_hypotheses(phase, default_high_grid(), default_low_grid());
  if (!rep.ordering_ok) {
    throw PreconditionError("phase '" + phase.label + "': exponent ordering violated");
  }
  for (const auto& c : rep.checks) {
    if (c.claimed && !c.confirmed) {
      throw PreconditionError("phase '" + phase.label + "': hypothesis " + c.name +
                              " not confirmed (ratio band " + std::to_string(c.min_ratio) + " .. " +
                              std::to_string(c.max_ratio) + ")");
    }
  }
  PhaseFunction out = phase;
  out.verified = true;
  return out;
}

ExponentPrediction predict_exponents(const PhaseFunction& phase, double n, Regime regime) {
  const bool high = regime == Regime::high;
  const bool first_order = high ? phase.has_h1 : phase.has_h2;
  if (!first_order) {
    throw DomainError("phase '" + phase.label + "' lacks the first-derivative hypothesis for the " +
                      std::string(to_string(regime)) + " regime");
  }
  const bool sharp = high ? phase.has_h3 : phase.has_h4;
  const double m = high ? phase.m1 : phase.m2;
  const double a = high ? phase.alpha1 : phase.alpha2;
  ExponentPrediction p;
  p.regime = regime;
  p.n = n;
  p.uses_second_derivative = sharp;
  if (sharp) {
    if (n < 1.0) throw DomainError("predict_exponents: n must be >= 1");
    p.t_exponent = (n - 1.0) / 2.0;
    p.lambda_exponent = (1.0 - m) * n + 2.0 * m - a;
  } else {
    if (n < 2.0) throw DomainError("predict_exponents: n must be >= 2 without the second-derivative hypothesis");
    p.t_exponent = (n - 2.0) / 2.0;
    p.lambda_exponent = (1.0 - m) * n + 2.0 * m;
  }
  return p;
}

}  // namespace dlab
