#include "dlab/subordination.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "dlab/errors.hpp"
#include "dlab/quadrature.hpp"
#include "dlab/window.hpp"

namespace dlab {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kULo = 0.25;
constexpr double kUHi = 4.0;
constexpr int kGaussOrder = 16;

Profile default_profile() {
  const FrequencyWindow w = FrequencyWindow::standard();
  return [w](double r) { return w.psi(r); };
}

namespace {

double m_for(const PhaseFunction& phase, double lambda) { return lambda >= 1.0 ? phase.m1 : phase.m2; }

// Total variation of t*phi(lambda^2 u) over u in [1/4, 4].
double phase_variation(const PhaseFunction& phase, double t, double lambda) {
  const int n = 512;
  double v = 0.0;
  double prev = phase.eval(lambda * lambda * kULo);
  for (int i = 1; i <= n; ++i) {
    const double u = kULo + (kUHi - kULo) * i / n;
    const double cur = phase.eval(lambda * lambda * u);
    v += std::abs(cur - prev);
    prev = cur;
  }
  return std::abs(t) * v;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

int symbol_panels(const PhaseFunction& phase, double t, double lambda, double xi_width) {
  const double m = m_for(phase, lambda);
  const double lam2 = lambda * lambda;
  double q = 64.0;
  q = std::max(q, 8.0 * (1.0 + std::abs(t) * std::pow(lambda, 2.0 * m) / (2.0 * kPi)));
  q = std::max(q, 8.0 * (1.0 + phase_variation(phase, t, lambda) / (2.0 * kPi)));
  q = std::max(q, (kUHi - kULo) * lam2 * xi_width / (2.0 * kPi));
  return static_cast<int>(std::ceil(q));
}

std::vector<cplx> fourier_symbol(const PhaseFunction& phase, const Profile& g, double t,
                                 double lambda, const std::vector<double>& xi) {
  if (!(lambda > 0.0)) throw DomainError("fourier_symbol: lambda must be positive");
  double xi_max = 0.0;
  for (double v : xi) xi_max = std::max(xi_max, std::abs(v));
  const int panels = symbol_panels(phase, t, lambda, 2.0 * xi_max);
  const QuadratureRule rule = composite_gauss_legendre(kULo, kUHi, panels, kGaussOrder);
  const double lam2 = lambda * lambda;
  std::vector<cplx> G(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    const double amp = g(std::sqrt(u));
    G[i] = amp == 0.0 ? cplx(0.0) : std::polar(amp * rule.weights[i], t * phase.eval(lam2 * u));
  }
  std::vector<cplx> out(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      if (G[i] == cplx(0.0)) continue;
      s += G[i] * std::polar(1.0, -lam2 * rule.nodes[i] * xi[j]);
    }
    out[j] = lam2 * s;
  }
  return out;
}

SymbolGrid fourier_symbol_grid(const PhaseFunction& phase, const Profile& g, double t,
                               double lambda, double xi_lo, double xi_hi, double delta_max) {
  if (!(xi_hi > xi_lo) || !(delta_max > 0.0)) throw DomainError("fourier_symbol_grid: bad window");
  const double lam2 = lambda * lambda;
  const int Q = symbol_panels(phase, t, lambda, xi_hi - xi_lo);
  const double h = (kUHi - kULo) / Q;
  // Spacing delta = 2 pi / (M lambda^2 h) turns the panel sum into a length-M DFT.
  const double m_needed = 2.0 * kPi / (lam2 * h * delta_max);
  std::size_t M = static_cast<std::size_t>(std::ceil(std::max<double>(Q, m_needed)));
  // Round up to a 2^a 3^b size for FFT speed.
  {
    std::size_t best = SIZE_MAX;
    for (std::size_t p2 = 1; p2 < 4 * M; p2 *= 2) {
      for (std::size_t p3 = p2; p3 < 4 * M; p3 *= 3) {
        if (p3 >= M) best = std::min(best, p3);
      }
    }
    M = best;
  }
  const double delta = 2.0 * kPi / (static_cast<double>(M) * lam2 * h);
  const QuadratureRule& base = gauss_legendre(kGaussOrder);

  SymbolGrid out;
  out.xi_lo = xi_lo;
  out.delta = delta;
  out.panels = Q;
  out.values.assign(M, cplx(0.0));

  fftw_complex* buf = fftw_alloc_complex(M);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(M), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int i = 0; i < kGaussOrder; ++i) {
    const double a_i = kULo + 0.5 * h * (base.nodes[i] + 1.0);
    const double w_i = 0.5 * h * base.weights[i];
    for (std::size_t q = 0; q < M; ++q) {
      cplx v = 0.0;
      if (q < static_cast<std::size_t>(Q)) {
        const double u = a_i + static_cast<double>(q) * h;
        const double amp = g(std::sqrt(u));
        if (amp != 0.0) {
          v = std::polar(amp, t * phase.eval(lam2 * u) - lam2 * static_cast<double>(q) * h * xi_lo);
        }
      }
      buf[q][0] = v.real();
      buf[q][1] = v.imag();
    }
    fftw_execute(plan);
    for (std::size_t m = 0; m < M; ++m) {
      const double xi = xi_lo + delta * static_cast<double>(m);
      out.values[m] += w_i * std::polar(1.0, -lam2 * a_i * xi) * cplx(buf[m][0], buf[m][1]);
    }
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  for (auto& v : out.values) v *= lam2;
  return out;
}

double tau_cutoff(double s, double c0) {
  return glue_ramp((s - 2.0 / c0) / (2.0 / c0)) * glue_ramp((2.0 * c0 - s) / c0);
}

double eta_cutoff(double x) { return glue_ramp((x - 0.2) / 0.05) * glue_ramp(5.0 - x); }

double default_c0(const PhaseFunction& phase, double lambda, Regime regime) {
  const double m = regime == Regime::high ? phase.m1 : phase.m2;
  double lo = HUGE_VAL, hi = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double u = kULo * std::pow(kUHi / kULo, i / 400.0);
    const double r = std::abs(phase.d1(lambda * lambda * u)) * std::pow(lambda, 2.0 - 2.0 * m);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (!(lo > 0.0) || !std::isfinite(hi)) return 16.0;
  double c0 = 8.0 * std::max(1.0, hi / lo);
  c0 = std::max({c0, 8.0 / lo, 2.0 * hi});
  return c0;
}

// -- decomposition -----------------------------------------------------------

namespace {

// (delta/2pi) sum_m w_m Psi_m e^{i xi_m x} with an incremental phase.
cplx inverse_sum(const SymbolGrid& sym, const std::vector<double>& weight, double x, std::size_t stride) {
  cplx acc = 0.0;
  const double step = sym.delta * static_cast<double>(stride);
  const cplx rot = std::polar(1.0, step * x);
  cplx e = std::polar(1.0, sym.xi_lo * x);
  std::size_t count = 0;
  for (std::size_t m = 0; m < sym.values.size(); m += stride) {
    if (count % 256 == 0) e = std::polar(1.0, sym.xi(m) * x);
    if (weight[m] != 0.0) acc += weight[m] * sym.values[m] * e;
    e *= rot;
    ++count;
  }
  return acc * (step / (2.0 * kPi));
}

}  // namespace

std::complex<double> SubordinationPieces::rho_at(double x) const {
  const double eta = eta_cutoff(x / (lambda * lambda));
  if (eta == 0.0) return 0.0;
  return eta * inverse_sum(symbol, rho_weight, x, 1);
}

std::complex<double> SubordinationPieces::a_term_at(double x) const {
  const double eta = eta_cutoff(x / (lambda * lambda));
  if (eta == 0.0) return 0.0;
  // prefactor * int e^{ixSs} a(s) ds with ds = delta / S on the symbol nodes.
  cplx acc = 0.0;
  const cplx rot = std::polar(1.0, symbol.delta * x);
  cplx e;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (m % 256 == 0) e = std::polar(1.0, symbol.xi(m) * x);
    if (a[m] != cplx(0.0)) acc += a[m] * e;
    e *= rot;
  }
  return eta * prefactor * acc * (symbol.delta / S);
}

double SubordinationPieces::a_sup() const {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

double SubordinationPieces::rho_sup() const {
  double m = 0.0;
  for (const auto& v : rho) m = std::max(m, std::abs(v));
  return m;
}

SubordinationPieces decompose(const PhaseFunction& phase, const Profile& g, double t,
                              double lambda, Regime regime, const DecomposeOptions& options) {
  if (!(t > 0.0)) throw DomainError("decompose: t must be positive");
  if (regime == Regime::high && !(lambda >= 1.0)) throw DomainError("decompose: high regime needs lambda >= 1");
  if (regime == Regime::low && !(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("decompose: low regime needs 0 < lambda < 1");
  }
  SubordinationPieces P;
  P.t = t;
  P.lambda = lambda;
  P.regime = regime;
  P.c0 = options.c0 ? *options.c0 : default_c0(phase, lambda, regime);
  if (!(P.c0 > 2.0)) throw DomainError("decompose: c0 must exceed 2");
  P.m = regime == Regime::high ? phase.m1 : phase.m2;
  P.alpha = regime == Regime::high ? phase.alpha1 : phase.alpha2;
  P.sharpened = options.sharpened;
  if (P.sharpened && !(regime == Regime::high ? phase.has_h3 : phase.has_h4)) {
    throw DomainError("decompose: sharpened form needs the second-derivative hypothesis");
  }
  const double lam2 = lambda * lambda;
  P.S = t * std::pow(lambda, 2.0 * P.m - 2.0);
  P.prefactor = P.sharpened ? std::sqrt(t) * std::pow(lambda, 2.0 * P.m - P.alpha)
                            : t * std::pow(lambda, 2.0 * P.m);

  // Stationary band of the symbol: xi = t phi'(lambda^2 u), u in [1/4, 4].
  double band_lo = HUGE_VAL, band_hi = -HUGE_VAL;
  for (int i = 0; i <= 400; ++i) {
    const double u = kULo + (kUHi - kULo) * i / 400.0;
    const double v = t * phase.d1(lam2 * u);
    band_lo = std::min(band_lo, v);
    band_hi = std::max(band_hi, v);
  }
  // Trapezoid spacing with period 16 lambda^2 in x keeps aliases away from
  // the support [lambda^2/5, 5 lambda^2].
  const double delta_max = 2.0 * kPi / (16.0 * lam2);
  double margin = 64.0 / lam2 + 0.25 * (band_hi - band_lo);
  SymbolGrid sym;
  bool converged = false;
  double edge = 0.0;
  for (int attempt = 0; attempt < 14; ++attempt) {
    const double lo = band_lo - margin;
    const double hi = band_hi + margin;
    sym = fourier_symbol_grid(phase, g, t, lambda, lo, hi, delta_max);
    double peak = 0.0;
    for (const auto& v : sym.values) peak = std::max(peak, std::abs(v));
    // Edge check over the outer 2% of the window at each end.
    const std::size_t n = sym.values.size();
    const std::size_t edge_n = std::max<std::size_t>(1, n / 50);
    edge = 0.0;
    for (std::size_t m = 0; m < edge_n; ++m) {
      edge = std::max({edge, std::abs(sym.values[m]), std::abs(sym.values[n - 1 - m])});
    }
    if (peak == 0.0 || edge <= options.edge_ratio * peak) {
      converged = true;
      break;
    }
    margin *= 2.0;
  }
  if (!converged) {
    throw AccuracyError("decompose: xi window did not capture the symbol mass", edge);
  }
  P.symbol = sym;

  // a on every symbol node; zero outside the tau support by construction.
  P.s.resize(sym.values.size());
  P.a.resize(sym.values.size());
  const double sharp = P.sharpened ? std::sqrt(t) * std::pow(lambda, P.alpha) : 1.0;
  for (std::size_t m = 0; m < sym.values.size(); ++m) {
    const double s = sym.xi(m) / P.S;
    P.s[m] = s;
    const double tau = tau_cutoff(s, P.c0);
    P.a[m] = tau == 0.0 ? cplx(0.0) : sharp * tau * sym.values[m] / (2.0 * kPi * lam2);
  }

  // rho on a uniform grid of its support.
  std::vector<double>& w_rho = P.rho_weight;
  w_rho.resize(sym.values.size());
  std::vector<double> w_all(sym.values.size(), 1.0);
  for (std::size_t m = 0; m < w_rho.size(); ++m) w_rho[m] = 1.0 - tau_cutoff(sym.xi(m) / P.S, P.c0);
  const int N = std::max(2, options.rho_points);
  P.rho_x.resize(N);
  P.rho.resize(N);
  double err = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = lam2 * (0.2 + 4.8 * i / (N - 1));
    P.rho_x[i] = x;
    const double eta = eta_cutoff(x / lam2);
    P.rho[i] = eta == 0.0 ? cplx(0.0) : eta * inverse_sum(sym, w_rho, x, 1);
    if (i % 20 == 0 && eta != 0.0) {
      // Step-halving estimate of the full inverse transform.
      const cplx fine = inverse_sum(sym, w_all, x, 1);
      const cplx coarse = inverse_sum(sym, w_all, x, 2);
      err = std::max(err, std::abs(fine - coarse));
    }
  }
  P.quadrature_error = err;
  if (err > options.tolerance) {
    throw AccuracyError("decompose: xi quadrature error above tolerance", err);
  }
  return P;
}

ReconstructionReport reconstruct(const SubordinationPieces& pieces, const PhaseFunction& phase,
                                 const Profile& g, const std::vector<double>& x_grid) {
  ReconstructionReport rep;
  const double lam = pieces.lambda;
  double l2 = 0.0;
  for (double x : x_grid) {
    const double amp = x > 0.0 ? g(std::sqrt(x) / lam) : 0.0;
    const cplx lhs = amp == 0.0 ? cplx(0.0) : std::polar(amp, pieces.t * phase.eval(x));
    const cplx rhs = pieces.rho_at(x) + pieces.a_term_at(x);
    const double r = std::abs(lhs - rhs);
    rep.sup_residual = std::max(rep.sup_residual, r);
    rep.sup_g = std::max(rep.sup_g, std::abs(amp));
    l2 += r * r;
    if (amp == 0.0) rep.sup_outside = std::max(rep.sup_outside, std::abs(rhs));
  }
  rep.l2_residual = x_grid.empty() ? 0.0 : std::sqrt(l2 / x_grid.size());
  return rep;
}

RhoDecayReport verify_rho_decay(const PhaseFunction& phase, const Profile& g,
                                const std::vector<double>& t_grid,
                                const std::vector<double>& lambda_grid,
                                const std::vector<int>& k_list, Regime regime,
                                const DecomposeOptions& options) {
  for (int k : k_list) {
    if (k < 0 || k > 3) throw DomainError("verify_rho_decay: k must be in {0,1,2,3}");
  }
  RhoDecayReport rep;
  rep.k_list = k_list;
  for (double lam : lambda_grid) {
    for (double t : t_grid) {
      const SubordinationPieces P = decompose(phase, g, t, lam, regime, options);
      RhoDecayCell c;
      c.t = t;
      c.lambda = lam;
      c.scale = t * std::pow(lam, 2.0 * P.m);
      c.rho_sup = P.rho_sup();
      c.a_sup = P.a_sup();
      rep.cells.push_back(c);
    }
  }
  bool finite = true;
  for (int k : k_list) {
    double hi = 0.0, lo = HUGE_VAL;
    for (const auto& c : rep.cells) {
      const double v = c.rho_sup * std::pow(c.scale, k);
      finite = finite && std::isfinite(v);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    rep.max_constant.push_back(hi);
    rep.min_constant.push_back(lo);
    rep.variation.push_back(lo > 0.0 ? hi / lo : HUGE_VAL);
  }
  // Trend: sup|rho| at the largest scale does not exceed that at the smallest.
  const auto by_scale = [](const RhoDecayCell& a, const RhoDecayCell& b) { return a.scale < b.scale; };
  const auto lo_cell = std::min_element(rep.cells.begin(), rep.cells.end(), by_scale);
  const auto hi_cell = std::max_element(rep.cells.begin(), rep.cells.end(), by_scale);
  rep.confirmed = finite && !rep.cells.empty() && hi_cell->rho_sup <= lo_cell->rho_sup;
  return rep;
}

// -- van der Corput ----------------------------------------------------------

std::complex<double> oscillatory_integral(const OscillatoryInstance& inst, double t) {
  // Panels sized so each sees at most ~pi/4 of phase.
  const int n = 2048;
  double var = 0.0;
  double prev = inst.g(inst.a);
  for (int i = 1; i <= n; ++i) {
    const double cur = inst.g(inst.a + (inst.b - inst.a) * i / n);
    var += std::abs(cur - prev);
    prev = cur;
  }
  const int panels = std::max(32, static_cast<int>(std::ceil(8.0 * (1.0 + std::abs(t) * var / (2.0 * kPi)))));
  const QuadratureRule rule = composite_gauss_legendre(inst.a, inst.b, panels, kGaussOrder);
  cplx s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes[i];
    s += rule.weights[i] * inst.psi(x) * std::polar(1.0, t * inst.g(x));
  }
  return s;
}

VanDerCorputReport van_der_corput_check(const OscillatoryInstance& inst,
                                        const std::vector<double>& t_grid) {
  if (!(inst.b > inst.a) || !(inst.delta > 0.0)) throw DomainError("van_der_corput_check: bad interval or delta");
  const int dense = 4096;
  VanDerCorputReport rep;
  for (int i = 0; i <= dense; ++i) {
    const double x = inst.a + (inst.b - inst.a) * i / dense;
    if (std::abs(inst.g2(x)) < inst.delta) {
      throw PreconditionError("van_der_corput_check: |g''| < delta at x = " + std::to_string(x));
    }
    rep.psi_sup = std::max(rep.psi_sup, std::abs(inst.psi(x)));
  }
  const QuadratureRule rule = composite_gauss_legendre(inst.a, inst.b, 64, kGaussOrder);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rep.psi_sup = std::max(rep.psi_sup, std::abs(inst.psi(rule.nodes[i])));
    rep.dpsi_l1 += rule.weights[i] * std::abs(inst.dpsi(rule.nodes[i]));
  }
  const double denom = rep.psi_sup + rep.dpsi_l1;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DomainError("van_der_corput_check: t must be positive");
    const double I = std::abs(oscillatory_integral(inst, t));
    const double ratio = I == 0.0 ? 0.0 : I * std::sqrt(inst.delta * t) / denom;
    rep.t.push_back(t);
    rep.integral_abs.push_back(I);
    rep.ratio.push_back(ratio);
    rep.constant = std::max(rep.constant, ratio);
  }
  return rep;
}

}  // namespace dlab
