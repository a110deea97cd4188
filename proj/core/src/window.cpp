#include "dlab/window.hpp"

#include <cmath>
#include <sstream>

#include "dlab/errors.hpp"

namespace dlab {

double glue_ramp(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

FrequencyWindow::FrequencyWindow(double plateau_end, double support_end)
    : plateau_end_(plateau_end), support_end_(support_end) {
  if (!(plateau_end > 0.0 && support_end > plateau_end)) {
    throw DomainError("FrequencyWindow: need 0 < plateau_end < support_end");
  }
  // psi must vanish near 0 and the dyadic pieces must overlap only neighbours.
  if (!(support_end <= 2.0 * plateau_end)) {
    throw DomainError("FrequencyWindow: support_end must not exceed 2 * plateau_end");
  }
}

double FrequencyWindow::Psi(double r) const {
  return glue_ramp((support_end_ - std::abs(r)) / (support_end_ - plateau_end_));
}

double FrequencyWindow::psi(double r) const { return Psi(r) - Psi(2.0 * r); }

double FrequencyWindow::psi_j(int j, double r) const { return psi(std::ldexp(r, -j)); }

std::string FrequencyWindow::id() const {
  std::ostringstream os;
  os << "glue(" << plateau_end_ << "," << support_end_ << ")";
  return os.str();
}

}  // namespace dlab
