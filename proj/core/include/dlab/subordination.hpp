#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "dlab/phases.hpp"

namespace dlab {

/// Window profile g, supported in [1/2, 2].
using Profile = std::function<double(double)>;

/// The dyadic bump psi(r) = Psi(r) - Psi(2r) of the standard window.
Profile default_profile();

/// Psi_lambda(xi) = lambda^2 int_{1/4}^{4} g(sqrt u) e^{i[t phi(lambda^2 u) - lambda^2 u xi]} du
/// at arbitrary xi by composite Gauss-Legendre quadrature in u.
std::vector<std::complex<double>> fourier_symbol(const PhaseFunction& phase, const Profile& g,
                                                 double t, double lambda,
                                                 const std::vector<double>& xi);

/// Psi_lambda sampled on the uniform grid xi_m = xi_lo + m * delta.
struct SymbolGrid {
  double xi_lo = 0.0;
  double delta = 0.0;
  std::vector<std::complex<double>> values;
  int panels = 0;  // u-panels of the underlying quadrature

  double xi(std::size_t m) const { return xi_lo + delta * static_cast<double>(m); }
  double xi_hi() const { return xi(values.empty() ? 0 : values.size() - 1); }
};

/// Uniform-grid evaluation through one FFT per Gauss node index. The grid
/// covers at least [xi_lo, xi_hi] with spacing at most delta_max.
SymbolGrid fourier_symbol_grid(const PhaseFunction& phase, const Profile& g, double t,
                               double lambda, double xi_lo, double xi_hi, double delta_max);

/// Number of u-panels used for a given (phase, t, lambda) and xi window width
/// (m1 for lambda >= 1, m2 below).
int symbol_panels(const PhaseFunction& phase, double t, double lambda, double xi_width);

/// tau: 1 on [4/c0, c0], 0 outside (2/c0, 2c0).
double tau_cutoff(double s, double c0);
/// eta: 1 on [1/4, 4], 0 outside (1/5, 5).
double eta_cutoff(double x);

/// Default c0: 8 max(1, sup r / inf r) with r(u) = |phi'(lambda^2 u)| lambda^{2-2m}
/// on [1/4, 4], enlarged so the plateau [4/c0, c0] contains [inf r / 2, 2 sup r].
/// Falls back to 16 when r is degenerate.
double default_c0(const PhaseFunction& phase, double lambda, Regime regime);

struct SubordinationPieces {
  double t = 0.0;
  double lambda = 0.0;
  double c0 = 0.0;
  Regime regime = Regime::high;
  bool sharpened = false;
  double m = 0.0;           // m1 (high) or m2 (low)
  double alpha = 0.0;       // alpha1 / alpha2, used when sharpened
  double S = 0.0;           // t lambda^{2m-2}
  double prefactor = 0.0;   // t lambda^{2m}, or t^{1/2} lambda^{2m-alpha} when sharpened
  SymbolGrid symbol;
  // rho sampled on a uniform grid of [lambda^2/5, 5 lambda^2].
  std::vector<double> rho_x;
  std::vector<std::complex<double>> rho;
  // a sampled at s_m = xi_m / S for every symbol node (zero outside the tau support).
  std::vector<double> s;
  std::vector<std::complex<double>> a;
  double quadrature_error = 0.0;  // step-halving estimate for the xi integrals
  std::vector<double> rho_weight;  // 1 - tau(xi_m / S) on the symbol nodes

  /// rho_t(x, lambda) at arbitrary x.
  std::complex<double> rho_at(double x) const;
  /// prefactor * eta(x/lambda^2) * int e^{i x S s} a(s) ds at arbitrary x.
  std::complex<double> a_term_at(double x) const;
  /// sup_s |a(s)|.
  double a_sup() const;
  double rho_sup() const;
};

struct DecomposeOptions {
  std::optional<double> c0;       // default_c0 when empty
  bool sharpened = false;         // needs the second-derivative hypothesis of the regime
  int rho_points = 1201;
  double tolerance = 1e-6;        // accepted xi-quadrature error estimate
  double edge_ratio = 1e-12;      // |Psi| at window edges relative to the peak
};

/// Splits g(lambda^{-1} sqrt x) e^{it phi(x)} into rho + (a-integral).
SubordinationPieces decompose(const PhaseFunction& phase, const Profile& g, double t,
                              double lambda, Regime regime, const DecomposeOptions& options = {});

struct ReconstructionReport {
  double sup_residual = 0.0;
  double l2_residual = 0.0;
  double sup_g = 0.0;
  double sup_outside = 0.0;  // max |rho + a-term| where both sides must vanish
};

/// Residual of g(lambda^{-1} sqrt x) e^{it phi(x)} - rho - a-term over x_grid.
ReconstructionReport reconstruct(const SubordinationPieces& pieces, const PhaseFunction& phase,
                                 const Profile& g, const std::vector<double>& x_grid);

struct RhoDecayCell {
  double t = 0.0;
  double lambda = 0.0;
  double scale = 0.0;    // t lambda^{2m}
  double rho_sup = 0.0;
  double a_sup = 0.0;
};

struct RhoDecayReport {
  std::vector<RhoDecayCell> cells;
  std::vector<int> k_list;
  std::vector<double> max_constant;  // per k: max over cells of rho_sup * scale^k
  std::vector<double> min_constant;
  std::vector<double> variation;     // max / min
  bool confirmed = false;            // finite and sup|rho| non-increasing in the scale trend
};

RhoDecayReport verify_rho_decay(const PhaseFunction& phase, const Profile& g,
                                const std::vector<double>& t_grid,
                                const std::vector<double>& lambda_grid,
                                const std::vector<int>& k_list, Regime regime = Regime::high,
                                const DecomposeOptions& options = {});

// -- van der Corput ----------------------------------------------------------

struct OscillatoryInstance {
  std::function<double(double)> g;    // phase
  std::function<double(double)> g2;   // g''
  std::function<double(double)> psi;  // amplitude
  std::function<double(double)> dpsi; // psi'
  double a = 0.0;
  double b = 1.0;
  double delta = 1.0;  // claimed lower bound for |g''|
};

struct VanDerCorputReport {
  std::vector<double> t;
  std::vector<double> integral_abs;
  std::vector<double> ratio;  // |I| (delta t)^{1/2} / (||psi||_inf + ||psi'||_1)
  double constant = 0.0;
  double psi_sup = 0.0;
  double dpsi_l1 = 0.0;
};

/// |int_a^b e^{itg} psi dx| by oscillation-resolving composite quadrature.
std::complex<double> oscillatory_integral(const OscillatoryInstance& inst, double t);

/// Measured constants; PreconditionError if |g''| < delta somewhere on a dense grid.
VanDerCorputReport van_der_corput_check(const OscillatoryInstance& inst,
                                        const std::vector<double>& t_grid);

}  // namespace dlab
