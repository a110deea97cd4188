#include "dlab/calculus.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>
#include <random>

#include "dlab/errors.hpp"
#include "dlab/specfun.hpp"

namespace dlab {

using cplx = std::complex<double>;

int SpectralExpansion::max_level() const {
  int m = 0;
  for (const auto& b : basis) m = std::max(m, b.level);
  return m;
}

double SpectralExpansion::max_frequency() const {
  double m = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs[i] != cplx(0.0)) m = std::max(m, std::sqrt(op.eigenvalue(basis[i].level)));
  }
  return m;
}

SpectralExpansion eigenfunction_expansion(const ModelOperator& op, const BasisFunction& b) {
  SpectralExpansion f;
  f.op = op;
  f.basis = {b};
  f.coeffs = Eigen::VectorXcd::Ones(1);
  return f;
}

SpectralExpansion random_expansion(const ModelOperator& op, int terms, int max_level,
                                   std::uint64_t seed, int mu_max) {
  std::vector<BasisFunction> all = enumerate_basis(op, max_level, mu_max);
  if (terms < 1 || static_cast<std::size_t>(terms) > all.size()) {
    throw DomainError("random_expansion: need 1 <= terms <= basis size (" +
                      std::to_string(all.size()) + ")");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  // Partial Fisher-Yates with explicit index draws keeps the selection portable.
  for (int i = 0; i < terms; ++i) {
    const std::size_t j = i + rng() % (order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::sort(order.begin(), order.begin() + terms);
  SpectralExpansion f;
  f.op = op;
  f.coeffs.resize(terms);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < terms; ++i) {
    f.basis.push_back(all[order[i]]);
    const double re = normal(rng);
    const double im = normal(rng);
    f.coeffs[i] = cplx(re, im);
  }
  return f;
}

SpectralExpansion project_samples(const ModelOperator& op, const PointSet& grid,
                                  const Eigen::VectorXcd& values, int max_level, int mu_max) {
  if (!grid.has_weights()) throw DomainError("project_samples: grid needs quadrature weights");
  if (static_cast<std::size_t>(values.size()) != grid.size()) {
    throw DomainError("project_samples: value count does not match grid");
  }
  SpectralExpansion f;
  f.op = op;
  f.basis = enumerate_basis(op, max_level, mu_max);
  const Eigen::MatrixXcd B = basis_matrix(op, f.basis, grid);
  Eigen::VectorXcd wv(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) wv[i] = grid.weights[i] * values[i];
  f.coeffs = B.adjoint() * wv;
  return f;
}

SpectralExpansion apply_multiplier(const SpectralExpansion& f, const Multiplier& F) {
  SpectralExpansion g = f;
  for (std::size_t i = 0; i < f.basis.size(); ++i) {
    g.coeffs[i] *= F(std::sqrt(f.op.eigenvalue(f.basis[i].level)));
  }
  return g;
}

Eigen::VectorXcd evaluate(const SpectralExpansion& f, const PointSet& points) {
  return basis_matrix(f.op, f.basis, points) * f.coeffs;
}

double l2_norm(const SpectralExpansion& f) { return f.coeffs.norm(); }

double lp_norm(const Eigen::VectorXcd& values, const std::vector<double>& weights, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  if (std::isinf(p)) return values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  if (weights.size() != static_cast<std::size_t>(values.size())) {
    throw DomainError("lp_norm: weights do not match values");
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) s += weights[i] * std::pow(std::abs(values[i]), p);
  return std::pow(s, 1.0 / p);
}

// -- Kernels -----------------------------------------------------------------

double truncation_tail(const ModelOperator& op, const Multiplier& F, int K) {
  const int stretch = std::max(256, 4 * K);
  double sum = 0.0;
  double last = 0.0;
  for (int k = K + 1; k <= K + stretch; ++k) {
    const double f = std::abs(F(std::sqrt(op.eigenvalue(k))));
    last = f == 0.0 ? 0.0 : f * op.projection_bound(k);
    sum += last;
  }
  if (last > 1e-3 * sum / stretch && last > 1e-300) return kInfinity;
  return sum;
}

int choose_truncation(const ModelOperator& op, const Multiplier& F, double tolerance, int cap) {
  int hi = 16;
  double tail = truncation_tail(op, F, hi);
  while (tail > tolerance) {
    if (hi >= cap) {
      throw TruncationError("spectral truncation cannot reach tail tolerance within level cap " +
                                std::to_string(cap),
                            tail);
    }
    hi = std::min(cap, 2 * hi);
    tail = truncation_tail(op, F, hi);
  }
  int lo = hi / 2;
  if (hi == 16) lo = 0;
  // Smallest K in (lo, hi] meeting the tolerance.
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (truncation_tail(op, F, mid) <= tolerance) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

namespace {

// Per-point coordinate tables (hermite / laguerre) for kernel sums.
std::vector<std::vector<std::vector<double>>> coordinate_tables(const ModelOperator& op,
                                                                const PointSet& pts, int K) {
  std::vector<std::vector<std::vector<double>>> out(pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const auto x = pts.point(p);
    op.check_point(x);
    out[p].resize(op.dim());
    for (int i = 0; i < op.dim(); ++i) {
      out[p][i] = op.kind() == OperatorKind::hermite ? hermite_all(K, x[i])
                                                     : laguerre_fn_all(K, op.alpha()[i], x[i]);
    }
  }
  return out;
}

// sum_k c_k P_k(x, y) from coordinate tables: nested sums over multi-indices
// collapsed dimension by dimension.
cplx separable_kernel_sum(const std::vector<std::vector<double>>& tx,
                          const std::vector<std::vector<double>>& ty, const std::vector<cplx>& c) {
  const int K = static_cast<int>(c.size()) - 1;
  const std::size_t d = tx.size();
  if (d == 1) {
    cplx s = 0.0;
    for (int k = 0; k <= K; ++k) s += c[k] * (tx[0][k] * ty[0][k]);
    return s;
  }
  // acc[k] = sum over multi-indices of the first dims with level k.
  std::vector<double> acc(K + 1);
  for (int k = 0; k <= K; ++k) acc[k] = tx[0][k] * ty[0][k];
  for (std::size_t dd = 1; dd + 1 < d; ++dd) {
    std::vector<double> next(K + 1, 0.0);
    for (int i = 0; i <= K; ++i) {
      for (int j = 0; i + j <= K; ++j) next[i + j] += acc[i] * tx[dd][j] * ty[dd][j];
    }
    acc.swap(next);
  }
  cplx s = 0.0;
  const auto& lx = tx[d - 1];
  const auto& ly = ty[d - 1];
  for (int i = 0; i <= K; ++i) {
    cplx inner = 0.0;
    for (int j = 0; i + j <= K; ++j) inner += c[i + j] * (lx[j] * ly[j]);
    s += acc[i] * inner;
  }
  return s;
}

}  // namespace

SampledKernel multiplier_kernel(const ModelOperator& op, const SpectralMultiplier& mult,
                                const PointSet& x_points, const PointSet& y_points,
                                double tail_tolerance) {
  SampledKernel out;
  out.x = x_points;
  out.y = y_points;
  out.operator_name = op.name();
  out.label = mult.label;
  const int K = mult.truncation >= 0 ? mult.truncation
                                     : choose_truncation(op, mult.F, tail_tolerance);
  out.truncation = K;
  out.tail_bound = truncation_tail(op, mult.F, K);
  std::vector<cplx> c(K + 1);
  for (int k = 0; k <= K; ++k) c[k] = mult.F(std::sqrt(op.eigenvalue(k)));
  out.values.resize(x_points.size(), y_points.size());
  if (op.kind() == OperatorKind::twisted) {
    for (std::size_t i = 0; i < x_points.size(); ++i) {
      for (std::size_t j = 0; j < y_points.size(); ++j) {
        const auto P = projection_kernels(op, K, x_points.point(i), y_points.point(j));
        cplx s = 0.0;
        for (int k = 0; k <= K; ++k) s += c[k] * P[k];
        out.values(i, j) = s;
      }
    }
    return out;
  }
  const auto tx = coordinate_tables(op, x_points, K);
  const auto ty = coordinate_tables(op, y_points, K);
  for (std::size_t i = 0; i < x_points.size(); ++i) {
    for (std::size_t j = 0; j < y_points.size(); ++j) {
      out.values(i, j) = separable_kernel_sum(tx[i], ty[j], c);
    }
  }
  return out;
}

// -- Besov norms -------------------------------------------------------------

namespace {

double block_norm(const Eigen::MatrixXcd& B, const SpectralExpansion& f,
                  const std::function<double(double)>& w, const PointSet& grid, double p,
                  bool* nonzero) {
  Eigen::VectorXcd c = f.coeffs;
  bool any = false;
  for (std::size_t i = 0; i < f.basis.size(); ++i) {
    const double m = w(std::sqrt(f.op.eigenvalue(f.basis[i].level)));
    c[i] *= m;
    any = any || (m != 0.0 && f.coeffs[i] != cplx(0.0));
  }
  if (nonzero) *nonzero = any;
  if (!any) return 0.0;
  return lp_norm(B * c, grid.weights, p);
}

void check_besov_args(const SpectralExpansion& f, double p, double q, int J, const PointSet& grid) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("besov_norm: p, q must be in [1, inf]");
  if (!std::isinf(p) && !grid.has_weights()) throw DomainError("besov_norm: grid needs weights");
  if (f.max_frequency() > std::ldexp(1.0, J)) {
    throw DomainError("besov_norm: spectral content above 2^J; raise J");
  }
}

double combine(const std::vector<double>& terms, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : terms) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : terms) s += std::pow(v, q);
  return std::pow(s, 1.0 / q);
}

double grid_radius(const PointSet& grid) {
  double r = 0.0;
  for (double v : grid.coords) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace

BesovResult besov_norm(const ModelOperator& op, const SpectralExpansion& f, double s, double p,
                       double q, const FrequencyWindow& window, int J, const PointSet& grid) {
  (void)op;
  check_besov_args(f, p, q, J, grid);
  const Eigen::MatrixXcd B = basis_matrix(f.op, f.basis, grid);
  BesovResult res;
  res.window_id = window.id();
  res.radius = grid_radius(grid);
  const double low = block_norm(B, f, [&](double r) { return window.Psi(r); }, grid, p, nullptr);
  res.blocks.push_back({INT_MIN, low});
  std::vector<double> terms;
  for (int j = 1; j <= J; ++j) {
    const double nj = block_norm(B, f, [&](double r) { return window.psi_j(j, r); }, grid, p, nullptr);
    res.blocks.push_back({j, nj});
    terms.push_back(std::pow(2.0, j * s) * nj);
  }
  res.value = low + combine(terms, q);
  return res;
}

BesovResult besov_norm_homogeneous(const ModelOperator& op, const SpectralExpansion& f, double s,
                                   double p, double q, const FrequencyWindow& window, int J,
                                   const PointSet& grid) {
  (void)op;
  check_besov_args(f, p, q, J, grid);
  const Eigen::MatrixXcd B = basis_matrix(f.op, f.basis, grid);
  BesovResult res;
  res.window_id = window.id();
  res.radius = grid_radius(grid);
  // psi_j vanishes on the spectrum once 2^{j+1} <= sqrt(lowest eigenvalue);
  // starting two octaves below the bottom covers every nonzero block.
  const double bottom = std::sqrt(f.op.eigenvalue(0));
  const int j_lo = static_cast<int>(std::floor(std::log2(bottom))) - 2;
  std::vector<double> terms;
  for (int j = j_lo; j <= J; ++j) {
    const double nj = block_norm(B, f, [&](double r) { return window.psi_j(j, r); }, grid, p, nullptr);
    res.blocks.push_back({j, nj});
    terms.push_back(std::pow(2.0, j * s) * nj);
  }
  res.value = combine(terms, q);
  return res;
}

PointSet norm_grid(const ModelOperator& op, int max_level) {
  const double R = default_radius(op, max_level);
  if (op.coordinate_dim() == 1) {
    const double span = op.kind() == OperatorKind::laguerre ? R : 2.0 * R;
    const int panels = std::max(25, static_cast<int>(std::ceil(span * std::sqrt(2.0 * max_level + 4.0) / 8.0)));
    return quadrature_grid(op, R, panels);
  }
  // About 8 nodes per local wavelength of the highest eigenfunction.
  const double k_max = std::sqrt(op.eigenvalue(max_level));
  const double span = op.kind() == OperatorKind::laguerre ? R : 2.0 * R;
  const int nodes = static_cast<int>(std::ceil(span * k_max / (2.0 * 3.141592653589793) * 8.0));
  const int panels = std::max(3, (nodes + 15) / 16);
  return quadrature_grid(op, R, panels);
}

// -- Operator-norm scaling ---------------------------------------------------

ScalingResult operator_norm_scaling(const ModelOperator& op, const std::function<double(double)>& profile,
                              const std::vector<double>& t_grid, double p, double q,
                              const PointSet& samples, double tail_tolerance) {
  const bool p1 = p == 1.0, p2 = p == 2.0, q2 = q == 2.0, qinf = std::isinf(q);
  if (!((p1 && qinf) || (p2 && q2) || (p1 && q2) || (p2 && qinf))) {
    throw CapabilityError("operator_norm_scaling: supported (p,q) pairs are (1,inf), (2,2), (1,2), (2,inf)");
  }
  const double n = op.homogeneous_dimension();
  ScalingResult res;
  res.p = p;
  res.q = q;
  res.exponent = n / p - (qinf ? 0.0 : n / q);
  for (double t : t_grid) {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("operator_norm_scaling: t must lie in (0, 1]");
    const Multiplier F = [&profile, t](double r) { return cplx(profile(t * r)); };
    ScalingPoint pt;
    pt.t = t;
    if (p2 && q2) {
      double sup = 0.0;
      const int K = choose_truncation(op, F, tail_tolerance);
      for (int k = 0; k <= K; ++k) sup = std::max(sup, std::abs(F(std::sqrt(op.eigenvalue(k)))));
      pt.norm = sup;
    } else if (p1 && qinf) {
      const SampledKernel K = multiplier_kernel(op, {F, "profile", -1}, samples, samples, tail_tolerance);
      pt.norm = K.values.cwiseAbs().maxCoeff();
    } else {
      // ||K(., y)||_{L^2} = (sum_k |F_k|^2 P_k(y, y))^{1/2}; same for the adjoint pair.
      const Multiplier F2 = [&F](double r) { return cplx(std::norm(F(r))); };
      const int K = choose_truncation(op, F2, tail_tolerance * tail_tolerance);
      double sup = 0.0;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto y = samples.point(i);
        const auto P = projection_kernels(op, K, y, y);
        double s = 0.0;
        for (int k = 0; k <= K; ++k) s += std::norm(F(std::sqrt(op.eigenvalue(k)))) * P[k].real();
        sup = std::max(sup, std::sqrt(s));
      }
      pt.norm = sup;
    }
    pt.scaled = pt.norm * std::pow(t, res.exponent);
    res.points.push_back(pt);
    res.constant = std::max(res.constant, pt.scaled);
  }
  return res;
}

}  // namespace dlab
