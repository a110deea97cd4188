#pragma once

#include <string>

namespace dlab {

/// C-infinity step: 0 for s <= 0, 1 for s >= 1, g(s)/(g(s)+g(1-s)) with
/// g(s) = e^{-1/s} in between.
double glue_ramp(double s);

/// Smooth even cutoff Psi (1 on [0, plateau_end], 0 on [support_end, inf))
/// and the dyadic family psi_j(r) = Psi(2^{-j} r) - Psi(2^{1-j} r).
class FrequencyWindow {
 public:
  explicit FrequencyWindow(double plateau_end = 1.0, double support_end = 2.0);

  /// Plateau [0, 1], support [0, 2].
  static FrequencyWindow standard() { return FrequencyWindow(1.0, 2.0); }
  /// Second admissible bump: plateau [0, 3/2], support [0, 2].
  static FrequencyWindow alternate() { return FrequencyWindow(1.5, 2.0); }

  double Psi(double r) const;
  /// psi(r) = Psi(r) - Psi(2r), supported in 1/2 < |r| < 2.
  double psi(double r) const;
  double psi_j(int j, double r) const;

  double plateau_end() const { return plateau_end_; }
  double support_end() const { return support_end_; }
  std::string id() const;

 private:
  double plateau_end_;
  double support_end_;
};

}  // namespace dlab
