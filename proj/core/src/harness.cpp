#include "dlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "dlab/errors.hpp"
#include "dlab/specfun.hpp"

namespace dlab {

using cplx = std::complex<double>;

double default_scan_radius(double lambda) { return 2.0 * std::sqrt(2.0 * lambda) + 4.0; }

std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::empty_shell: return "empty_shell";
    case CellStatus::boundary_max: return "boundary_max";
    case CellStatus::error: return "error";
  }
  return "";
}

std::pair<int, int> dyadic_shell(const ModelOperator& op, double lambda) {
  // 1/2 < sqrt(2k + offset)/lambda < 2  <=>  lambda^2/4 < 2k + offset < 4 lambda^2.
  const double off = op.spectral_offset();
  const double lo_val = 0.25 * lambda * lambda;
  const double hi_val = 4.0 * lambda * lambda;
  int lo = std::max(0, static_cast<int>(std::floor((lo_val - off) / 2.0)));
  while (op.eigenvalue(lo) <= lo_val) ++lo;
  int hi = static_cast<int>(std::ceil((hi_val - off) / 2.0));
  while (hi >= 0 && op.eigenvalue(hi) >= hi_val) --hi;
  return {lo, hi};
}

namespace {

void check_inputs(const ModelOperator& op, const PhaseFunction& phase, double lambda, double t) {
  if (!phase.verified) {
    throw PreconditionError("phase '" + phase.label + "' has not passed hypothesis verification");
  }
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (!(std::abs(t) > 0.0 && std::abs(t) < 0.9 * op.T0())) {
    throw DomainError("t must satisfy 0 < |t| < 0.9 T0");
  }
}

std::vector<cplx> shell_coefficients(const ModelOperator& op, const PhaseFunction& phase,
                                     const FrequencyWindow& window, double lambda, double t, int hi) {
  std::vector<cplx> c(hi + 1, cplx(0.0));
  for (int k = 0; k <= hi; ++k) {
    const double ev = op.eigenvalue(k);
    const double w = window.psi(std::sqrt(ev) / lambda);
    if (w != 0.0) c[k] = std::polar(w, t * phase.eval(ev));
  }
  return c;
}

// Values of the 1-D eigenfunctions of coordinate `axis` at the nodes, levels 0..K.
Eigen::MatrixXd coordinate_table(const ModelOperator& op, int axis, const std::vector<double>& nodes,
                                 int K) {
  Eigen::MatrixXd T(nodes.size(), K + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::vector<double> v = op.kind() == OperatorKind::hermite
                                      ? hermite_all(K, nodes[i])
                                      : laguerre_fn_all(K, op.alpha()[axis], nodes[i]);
    for (int k = 0; k <= K; ++k) T(i, k) = v[k];
  }
  return T;
}

bool is_boundary(const ModelOperator& op, std::size_t idx, std::size_t G) {
  if (idx + 1 == G) return true;
  return op.kind() != OperatorKind::laguerre && idx == 0;
}

SupnormResult separable_1d(const ModelOperator& op, const std::vector<cplx>& c, int lo,
                           const std::vector<double>& nodes) {
  const int hi = static_cast<int>(c.size()) - 1;
  const Eigen::MatrixXd T = coordinate_table(op, 0, nodes, hi).rightCols(hi - lo + 1);
  Eigen::VectorXcd cs(hi - lo + 1);
  for (int k = lo; k <= hi; ++k) cs[k - lo] = c[k];
  const Eigen::MatrixXcd left = T.cast<cplx>() * cs.asDiagonal();
  const Eigen::MatrixXcd K = left * T.transpose().cast<cplx>();
  Eigen::Index r = 0, col = 0;
  SupnormResult res;
  res.value = K.cwiseAbs().maxCoeff(&r, &col);
  if (is_boundary(op, r, nodes.size()) || is_boundary(op, col, nodes.size())) {
    res.status = CellStatus::boundary_max;
  }
  return res;
}

// Two real coordinates: rows of A index unordered node pairs (u <= v) of the
// (x_i, y_i) coordinate; K = A1 C A2^T with the Hankel matrix C_{b1 b2} = c_{b1+b2}.
SupnormResult separable_2d(const ModelOperator& op, const std::vector<cplx>& c, int lo,
                           const std::vector<double>& nodes) {
  const int hi = static_cast<int>(c.size()) - 1;
  const std::size_t G = nodes.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < G; ++u) {
    for (std::size_t v = u; v < G; ++v) pairs.emplace_back(u, v);
  }
  const Eigen::Index P = static_cast<Eigen::Index>(pairs.size());
  std::vector<Eigen::MatrixXd> A(2);
  for (int axis = 0; axis < 2; ++axis) {
    const Eigen::MatrixXd T = coordinate_table(op, axis, nodes, hi);
    A[axis].resize(P, hi + 1);
    for (Eigen::Index r = 0; r < P; ++r) {
      A[axis].row(r) = T.row(pairs[r].first).cwiseProduct(T.row(pairs[r].second));
    }
    if (op.kind() == OperatorKind::hermite) {
      A[1] = A[0];
      break;
    }
  }
  Eigen::MatrixXd Cr = Eigen::MatrixXd::Zero(hi + 1, hi + 1);
  Eigen::MatrixXd Ci = Eigen::MatrixXd::Zero(hi + 1, hi + 1);
  for (int b1 = 0; b1 <= hi; ++b1) {
    for (int b2 = std::max(0, lo - b1); b1 + b2 <= hi; ++b2) {
      Cr(b1, b2) = c[b1 + b2].real();
      Ci(b1, b2) = c[b1 + b2].imag();
    }
  }
  const Eigen::MatrixXd Tr = A[0] * Cr;
  const Eigen::MatrixXd Ti = A[0] * Ci;
  const Eigen::MatrixXd A2t = A[1].transpose();
  SupnormResult res;
  Eigen::Index best_r1 = 0, best_r2 = 0;
  const Eigen::Index block = 256;
  for (Eigen::Index r0 = 0; r0 < P; r0 += block) {
    const Eigen::Index nb = std::min(block, P - r0);
    const Eigen::MatrixXd Kr = Tr.middleRows(r0, nb) * A2t;
    const Eigen::MatrixXd Ki = Ti.middleRows(r0, nb) * A2t;
    const Eigen::MatrixXd mag2 = Kr.cwiseAbs2() + Ki.cwiseAbs2();
    Eigen::Index r = 0, col = 0;
    const double m = std::sqrt(mag2.maxCoeff(&r, &col));
    if (m > res.value) {
      res.value = m;
      best_r1 = r0 + r;
      best_r2 = col;
    }
  }
  for (auto idx : {pairs[best_r1].first, pairs[best_r1].second, pairs[best_r2].first,
                   pairs[best_r2].second}) {
    if (is_boundary(op, idx, G)) res.status = CellStatus::boundary_max;
  }
  return res;
}

// Twisted: |K(z, w)| depends only on |z - w|; enumerate the squared lattice
// offsets realized on the grid.
SupnormResult twisted_radial(const ModelOperator& op, const std::vector<cplx>& c, int G, double R) {
  const int hi = static_cast<int>(c.size()) - 1;
  const int dims = op.coordinate_dim();
  const double h = G > 1 ? 2.0 * R / (G - 1) : 0.0;
  // reach[s] = 0 unreachable, 1 reachable only with an extreme offset, 2 reachable from interior.
  const int max_sum = dims * (G - 1) * (G - 1);
  std::vector<char> reach(max_sum + 1, 0);
  reach[0] = 2;
  for (int dd = 0; dd < dims; ++dd) {
    std::vector<char> next(max_sum + 1, 0);
    for (int s = 0; s <= max_sum; ++s) {
      if (!reach[s]) continue;
      for (int i = 0; i < G && s + i * i <= max_sum; ++i) {
        const char level = (i == G - 1) ? 1 : reach[s];
        next[s + i * i] = std::max(next[s + i * i], level);
      }
    }
    reach.swap(next);
  }
  const double scale = std::pow(2.0 * 3.141592653589793, -op.dim());
  SupnormResult res;
  int best = 0;
  for (int s = 0; s <= max_sum; ++s) {
    if (!reach[s]) continue;
    const double r2 = h * h * s;
    const std::vector<double> lag = laguerre_damped_all(hi, op.dim() - 1.0, 0.5 * r2);
    cplx acc = 0.0;
    for (int k = 0; k <= hi; ++k) {
      if (c[k] != cplx(0.0)) acc += c[k] * lag[k];
    }
    const double v = scale * std::abs(acc);
    if (v > res.value) {
      res.value = v;
      best = s;
    }
  }
  if (reach[best] == 1) res.status = CellStatus::boundary_max;
  return res;
}

}  // namespace

SupnormResult localized_propagator_supnorm(const ModelOperator& op, const PhaseFunction& phase,
                                           const FrequencyWindow& window, double lambda, double t,
                                           const SpatialGridConfig& grid) {
  check_inputs(op, phase, lambda, t);
  if (grid.points_per_axis < 2) throw DomainError("spatial grid needs at least 2 points per axis");
  const auto [lo, hi] = dyadic_shell(op, lambda);
  SupnormResult res;
  if (hi < lo) {
    res.status = CellStatus::empty_shell;
    res.message = "empty spectral shell at lambda=" + std::to_string(lambda);
    return res;
  }
  const std::vector<cplx> c = shell_coefficients(op, phase, window, lambda, t, hi);
  const double R = grid.radius > 0.0 ? grid.radius : default_scan_radius(lambda);
  const int G = grid.points_per_axis;
  std::vector<double> nodes;
  if (op.kind() == OperatorKind::laguerre) {
    for (int i = 1; i <= G; ++i) nodes.push_back(R * i / G);
  } else {
    nodes = uniform_axis(-R, R, G).nodes;
  }
  if (op.kind() == OperatorKind::twisted) {
    res = twisted_radial(op, c, G, R);
  } else if (op.dim() == 1) {
    res = separable_1d(op, c, lo, nodes);
  } else if (op.dim() == 2) {
    res = separable_2d(op, c, lo, nodes);
  } else {
    throw CapabilityError("localized_propagator_supnorm: separable path supports at most 2 coordinates");
  }
  res.shell_lo = lo;
  res.shell_hi = hi;
  if (res.status == CellStatus::boundary_max) res.message = "maximum found on the grid boundary";
  return res;
}

SampledKernel localized_propagator_kernel(const ModelOperator& op, const PhaseFunction& phase,
                                          const FrequencyWindow& window, double lambda, double t,
                                          const PointSet& x_points, const PointSet& y_points) {
  check_inputs(op, phase, lambda, t);
  const auto shell = dyadic_shell(op, lambda);
  SpectralMultiplier mult;
  mult.label = "psi(sqrt(L)/lambda) exp(it phi(L))";
  mult.truncation = std::max(0, shell.second);
  mult.F = [&window, &phase, lambda, t](double r) {
    const double w = window.psi(r / lambda);
    return w == 0.0 ? cplx(0.0) : std::polar(w, t * phase.eval(r * r));
  };
  SampledKernel K = multiplier_kernel(op, mult, x_points, y_points);
  K.t = t;
  K.lambda = lambda;
  return K;
}

DecayScan scan(const ModelOperator& op, const PhaseFunction& phase, const FrequencyWindow& window,
               const std::vector<double>& t_grid, const std::vector<double>& lambda_grid,
               const SpatialGridConfig& grid, int jobs) {
  if (!phase.verified) {
    throw PreconditionError("phase '" + phase.label + "' has not passed hypothesis verification");
  }
  DecayScan out;
  out.operator_name = op.name();
  out.phase_label = phase.label;
  out.n = op.homogeneous_dimension();
  out.t_grid = t_grid;
  out.lambda_grid = lambda_grid;
  out.grid = grid;
  const std::size_t nt = t_grid.size(), nl = lambda_grid.size();
  out.M = Eigen::MatrixXd::Zero(nt, nl);
  out.status.assign(nt, std::vector<CellStatus>(nl, CellStatus::ok));
  std::vector<std::string> cell_msg(nt * nl);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t idx = next++; idx < nt * nl; idx = next++) {
      const std::size_t i = idx / nl, j = idx % nl;
      try {
        const SupnormResult r = localized_propagator_supnorm(op, phase, window, lambda_grid[j], t_grid[i], grid);
        out.M(i, j) = r.value;
        out.status[i][j] = r.status;
        cell_msg[idx] = r.message;
      } catch (const std::exception& e) {
        out.M(i, j) = std::numeric_limits<double>::quiet_NaN();
        out.status[i][j] = CellStatus::error;
        cell_msg[idx] = e.what();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(nt * nl)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t idx = 0; idx < nt * nl; ++idx) {
    if (!cell_msg[idx].empty()) {
      out.messages.push_back("t=" + std::to_string(t_grid[idx / nl]) + " lambda=" +
                             std::to_string(lambda_grid[idx % nl]) + ": " + cell_msg[idx]);
    }
  }
  return out;
}

DecayFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points) {
  if (x.size() != y.size()) throw FitError("fit: x and y differ in length");
  if (x.size() < min_points) {
    throw FitError("fit: need at least " + std::to_string(min_points) + " points, got " +
                   std::to_string(x.size()));
  }
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw FitError("fit: zero, negative or non-finite value in fit window");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw FitError("fit: abscissae are all equal");
  DecayFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (f.intercept + f.slope * lx[i]);
    sse += r * r;
  }
  f.stderr_ = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  f.x = x;
  f.y = y;
  return f;
}

namespace {

Regime regime_of(const DecayScan& scan) {
  const bool low = !scan.lambda_grid.empty() &&
                   std::all_of(scan.lambda_grid.begin(), scan.lambda_grid.end(),
                               [](double l) { return l < 1.0; });
  return low ? Regime::low : Regime::high;
}

std::size_t index_of(const std::vector<double>& grid, double v, const char* what) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i] - v) <= 1e-12 * std::max(1.0, std::abs(v))) return i;
  }
  throw FitError(std::string("fit: ") + what + " value not on the scan grid");
}

}  // namespace

DecayFit fit_time_exponent(const DecayScan& scan, const PhaseFunction& phase, double lambda,
                           double t_lo, double t_hi, double tolerance) {
  const std::size_t j = index_of(scan.lambda_grid, lambda, "lambda");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < scan.t_grid.size(); ++i) {
    const double t = std::abs(scan.t_grid[i]);
    if (t >= t_lo && t <= t_hi) {
      x.push_back(t);
      y.push_back(scan.M(i, j));
    }
  }
  DecayFit f = loglog_fit(x, y, 4);
  f.variable = "t";
  f.at = lambda;
  f.predicted = 0.0 - predict_exponents(phase, scan.n, regime_of(scan)).t_exponent;
  f.tolerance = tolerance;
  f.pass = f.slope <= f.predicted + tolerance;
  f.sharp = std::abs(f.slope - f.predicted) <= tolerance;
  return f;
}

DecayFit fit_lambda_exponent(const DecayScan& scan, const PhaseFunction& phase, double t,
                             double tolerance) {
  const std::size_t i = index_of(scan.t_grid, t, "t");
  std::vector<double> x, y;
  for (std::size_t j = 0; j < scan.lambda_grid.size(); ++j) {
    x.push_back(scan.lambda_grid[j]);
    y.push_back(scan.M(i, j));
  }
  DecayFit f = loglog_fit(x, y, 3);
  f.variable = "lambda";
  f.at = t;
  f.predicted = predict_exponents(phase, scan.n, regime_of(scan)).lambda_exponent;
  f.tolerance = tolerance;
  f.pass = std::abs(f.slope - f.predicted) <= tolerance;
  f.sharp = f.pass;
  return f;
}

double l2_unitarity(const ModelOperator& op, const PhaseFunction& phase, const SpectralExpansion& f,
                    const std::vector<double>& t_list) {
  const PointSet grid = norm_grid(op, f.max_level());
  const Eigen::MatrixXcd B = basis_matrix(op, f.basis, grid);
  const double base = lp_norm(B * f.coeffs, grid.weights, 2.0);
  double dev = 0.0;
  for (double t : t_list) {
    const SpectralExpansion g = apply_multiplier(f, [&phase, t](double r) {
      return std::polar(1.0, t * phase.eval(r * r));
    });
    dev = std::max(dev, std::abs(lp_norm(B * g.coeffs, grid.weights, 2.0) - base));
  }
  return dev;
}

}  // namespace dlab
