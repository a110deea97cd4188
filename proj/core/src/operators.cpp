#include "dlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dlab/errors.hpp"
#include "dlab/quadrature.hpp"
#include "dlab/specfun.hpp"

namespace dlab {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// -- ModelOperator -----------------------------------------------------------

ModelOperator ModelOperator::hermite(int n) {
  if (n < 1) throw DomainError("hermite: dimension must be >= 1");
  ModelOperator op;
  op.kind_ = OperatorKind::hermite;
  op.dim_ = n;
  return op;
}

ModelOperator ModelOperator::twisted(int d) {
  if (d < 1) throw DomainError("twisted: dimension must be >= 1");
  ModelOperator op;
  op.kind_ = OperatorKind::twisted;
  op.dim_ = d;
  return op;
}

ModelOperator ModelOperator::laguerre(std::vector<double> alpha) {
  if (alpha.empty()) throw DomainError("laguerre: alpha must have at least one entry");
  for (double a : alpha) {
    if (!(a > -0.5)) throw DomainError("laguerre: alpha entries must exceed -1/2");
  }
  ModelOperator op;
  op.kind_ = OperatorKind::laguerre;
  op.dim_ = static_cast<int>(alpha.size());
  op.alpha_ = std::move(alpha);
  return op;
}

double ModelOperator::homogeneous_dimension() const {
  switch (kind_) {
    case OperatorKind::hermite: return dim_;
    case OperatorKind::twisted: return 2.0 * dim_;
    case OperatorKind::laguerre: return 2.0 * spectral_offset();
  }
  return 0.0;
}

double ModelOperator::T0() const { return kind_ == OperatorKind::hermite ? kPi / 4 : kPi / 2; }

double ModelOperator::spectral_offset() const {
  if (kind_ != OperatorKind::laguerre) return dim_;
  double s = dim_;
  for (double a : alpha_) s += a;
  return s;
}

double ModelOperator::eigenvalue(int k) const {
  if (k < 0) throw DomainError("eigenvalue: negative level");
  return 2.0 * k + spectral_offset();
}

double eigenvalue(const ModelOperator& op, int k) { return op.eigenvalue(k); }

std::string ModelOperator::kind_name() const {
  switch (kind_) {
    case OperatorKind::hermite: return "hermite";
    case OperatorKind::twisted: return "twisted";
    case OperatorKind::laguerre: return "laguerre";
  }
  return "";
}

std::string ModelOperator::name() const {
  std::ostringstream os;
  os << kind_name();
  if (kind_ == OperatorKind::hermite) os << "(n=" << dim_ << ")";
  if (kind_ == OperatorKind::twisted) os << "(d=" << dim_ << ")";
  if (kind_ == OperatorKind::laguerre) {
    os << "(alpha=[";
    for (std::size_t i = 0; i < alpha_.size(); ++i) os << (i ? "," : "") << alpha_[i];
    os << "])";
  }
  return os.str();
}

namespace {

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// sup_x psi_k^{(a)}(x)^2 bound: 2^{-a} k!/Gamma(k+a+1) * B^2, with
// B = L_k^{(a)}(0) for a >= 0 and B = 2 for -1 < a < 0.
double laguerre_fn_sq_bound(int k, double a) {
  const double c2 = std::exp(std::lgamma(k + 1.0) - std::lgamma(k + a + 1.0)) * std::pow(2.0, -a);
  const double b = a >= 0.0 ? laguerre_at_zero(k, a) : 2.0;
  return c2 * b * b;
}

// Convolution of per-coordinate level tables, truncated at max_level.
std::vector<double> convolve_levels(const std::vector<std::vector<double>>& tables, int max_level) {
  std::vector<double> acc = tables.front();
  acc.resize(max_level + 1);
  for (std::size_t d = 1; d < tables.size(); ++d) {
    std::vector<double> next(max_level + 1, 0.0);
    for (int i = 0; i <= max_level; ++i) {
      if (acc[i] == 0.0) continue;
      for (int j = 0; i + j <= max_level; ++j) next[i + j] += acc[i] * tables[d][j];
    }
    acc.swap(next);
  }
  return acc;
}

}  // namespace

double ModelOperator::projection_bound(int k) const {
  switch (kind_) {
    case OperatorKind::hermite:
      // Cramer: |h_j| <= pi^{-1/4}; number of multi-indices binom(k+n-1, n-1).
      return std::exp(log_binomial(k + dim_ - 1.0, dim_ - 1.0)) * std::pow(kPi, -0.5 * dim_);
    case OperatorKind::twisted:
      return std::pow(2.0 * kPi, -dim_) * laguerre_at_zero(k, dim_ - 1.0);
    case OperatorKind::laguerre: {
      if (dim_ == 1) return laguerre_fn_sq_bound(k, alpha_[0]);
      std::vector<std::vector<double>> tables;
      for (double a : alpha_) {
        std::vector<double> t(k + 1);
        for (int j = 0; j <= k; ++j) t[j] = laguerre_fn_sq_bound(j, a);
        tables.push_back(std::move(t));
      }
      return convolve_levels(tables, k)[k];
    }
  }
  return 0.0;
}

double ModelOperator::measure_density(std::span<const double> x) const {
  if (kind_ != OperatorKind::laguerre) return 1.0;
  double w = 1.0;
  for (int i = 0; i < dim_; ++i) w *= std::pow(x[i], 2.0 * alpha_[i] + 1.0);
  return w;
}

void ModelOperator::check_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != coordinate_dim()) {
    throw DomainError(name() + ": point has " + std::to_string(x.size()) + " coordinates, expected " +
                      std::to_string(coordinate_dim()));
  }
  if (kind_ == OperatorKind::laguerre) {
    for (double v : x) {
      if (!(v > 0.0)) throw DomainError(name() + ": coordinates must be positive");
    }
  }
}

// -- Eigenbasis --------------------------------------------------------------

namespace {

void enumerate_compositions(int parts, int max_total, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int v : cur) used += v;
  for (int v = 0; used + v <= max_total; ++v) {
    cur.push_back(v);
    enumerate_compositions(parts, max_total, cur, out);
    cur.pop_back();
  }
}

int sum_of(const std::vector<int>& v, std::size_t from, std::size_t to) {
  int s = 0;
  for (std::size_t i = from; i < to; ++i) s += v[i];
  return s;
}

// One-dimensional special Hermite function Phi_{mu nu}(z), z = x + iy.
cplx special_hermite(int mu, int nu, double x, double y) {
  const double r2 = x * x + y * y;
  const double u = 0.5 * r2;
  const int lo = std::min(mu, nu);
  const int diff = std::abs(mu - nu);
  const double lag = laguerre_damped_all(lo, diff, u)[lo];
  double mag;
  if (diff == 0) {
    mag = lag;
  } else {
    if (r2 == 0.0) return 0.0;
    mag = lag * std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + diff + 1.0)) +
                         0.5 * diff * std::log(u));
  }
  // (i/sqrt2)^diff * conj(z)^diff / |z|^diff * (|z|^2/2)^{diff/2} collapsed above;
  // remaining unit phase: i^diff e^{-i diff theta} (mu >= nu) or e^{+i diff theta}.
  const double theta = std::atan2(y, x);
  const double angle = 0.5 * kPi * diff + (mu >= nu ? -1.0 : 1.0) * diff * theta;
  return std::polar(mag / std::sqrt(2.0 * kPi), angle);
}

}  // namespace

std::vector<BasisFunction> enumerate_basis(const ModelOperator& op, int max_level, int mu_max) {
  if (max_level < 0) throw DomainError("enumerate_basis: negative level");
  const int d = op.dim();
  std::vector<BasisFunction> out;
  if (op.kind() == OperatorKind::twisted) {
    if (mu_max < 0) mu_max = max_level;
    if (std::max(max_level, mu_max) > kMultiIndexMaxLevel) {
      throw CapabilityError("twisted basis enumeration capped at level " +
                            std::to_string(kMultiIndexMaxLevel));
    }
    std::vector<std::vector<int>> mus;
    std::vector<std::vector<int>> nus;
    std::vector<int> cur;
    enumerate_compositions(d, mu_max, cur, mus);
    enumerate_compositions(d, max_level, cur, nus);
    for (int level = 0; level <= max_level; ++level) {
      for (const auto& nu : nus) {
        if (sum_of(nu, 0, nu.size()) != level) continue;
        for (const auto& mu : mus) {
          BasisFunction b;
          b.level = level;
          b.index = mu;
          b.index.insert(b.index.end(), nu.begin(), nu.end());
          out.push_back(std::move(b));
        }
      }
    }
    return out;
  }
  if (d > 1 && max_level > kMultiIndexMaxLevel) {
    throw CapabilityError("multi-index enumeration capped at level " +
                          std::to_string(kMultiIndexMaxLevel));
  }
  std::vector<std::vector<int>> betas;
  std::vector<int> cur;
  enumerate_compositions(d, max_level, cur, betas);
  for (int level = 0; level <= max_level; ++level) {
    for (const auto& beta : betas) {
      if (sum_of(beta, 0, beta.size()) == level) out.push_back({level, beta});
    }
  }
  return out;
}

std::complex<double> eigenfunction(const ModelOperator& op, const BasisFunction& b,
                                   std::span<const double> x) {
  op.check_point(x);
  const int d = op.dim();
  switch (op.kind()) {
    case OperatorKind::hermite: {
      double v = 1.0;
      for (int i = 0; i < d; ++i) v *= hermite_fn(b.index[i], x[i]);
      return v;
    }
    case OperatorKind::laguerre: {
      double v = 1.0;
      for (int i = 0; i < d; ++i) v *= laguerre_fn(b.index[i], op.alpha()[i], x[i]);
      return v;
    }
    case OperatorKind::twisted: {
      cplx v = 1.0;
      for (int i = 0; i < d; ++i) v *= special_hermite(b.index[i], b.index[d + i], x[i], x[d + i]);
      return v;
    }
  }
  return 0.0;
}

Eigen::MatrixXcd basis_matrix(const ModelOperator& op, const std::vector<BasisFunction>& basis,
                              const PointSet& points) {
  const int d = op.dim();
  int max_index = 0;
  for (const auto& b : basis) {
    for (int v : b.index) max_index = std::max(max_index, v);
  }
  Eigen::MatrixXcd m(points.size(), basis.size());
  std::vector<std::vector<double>> tables(d);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto x = points.point(p);
    op.check_point(x);
    if (op.kind() == OperatorKind::twisted) {
      for (std::size_t j = 0; j < basis.size(); ++j) m(p, j) = eigenfunction(op, basis[j], x);
      continue;
    }
    for (int i = 0; i < d; ++i) {
      tables[i] = op.kind() == OperatorKind::hermite
                      ? hermite_all(max_index, x[i])
                      : laguerre_fn_all(max_index, op.alpha()[i], x[i]);
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      double v = 1.0;
      for (int i = 0; i < d; ++i) v *= tables[i][basis[j].index[i]];
      m(p, j) = v;
    }
  }
  return m;
}

// -- Kernels -----------------------------------------------------------------

namespace {

// Im(z . conj(w)) for z = x + iy, w = u + iv stored as (x.., y..), (u.., v..).
double twisted_symplectic(int d, std::span<const double> z, std::span<const double> w) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) s += z[d + k] * w[k] - z[k] * w[d + k];
  return s;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return s;
}

void check_time(const ModelOperator& op, double t) {
  if (!(std::abs(t) > 0.0 && std::abs(t) < op.T0())) {
    throw DomainError(op.name() + ": Schrodinger kernel requires 0 < |t| < T0");
  }
}

}  // namespace

std::vector<std::complex<double>> projection_kernels(const ModelOperator& op, int max_level,
                                                     std::span<const double> x,
                                                     std::span<const double> y) {
  op.check_point(x);
  op.check_point(y);
  if (max_level < 0) throw DomainError("projection_kernels: negative level");
  const int d = op.dim();
  std::vector<cplx> out(max_level + 1);
  if (op.kind() == OperatorKind::twisted) {
    const double r2 = squared_distance(x, y);
    const std::vector<double> lag = laguerre_damped_all(max_level, d - 1.0, 0.5 * r2);
    const cplx phase = std::polar(std::pow(2.0 * kPi, -d), -0.5 * twisted_symplectic(d, x, y));
    for (int k = 0; k <= max_level; ++k) out[k] = lag[k] * phase;
    return out;
  }
  std::vector<std::vector<double>> tables(d);
  for (int i = 0; i < d; ++i) {
    std::vector<double> hx, hy;
    if (op.kind() == OperatorKind::hermite) {
      hx = hermite_all(max_level, x[i]);
      hy = hermite_all(max_level, y[i]);
    } else {
      hx = laguerre_fn_all(max_level, op.alpha()[i], x[i]);
      hy = laguerre_fn_all(max_level, op.alpha()[i], y[i]);
    }
    tables[i].resize(max_level + 1);
    for (int j = 0; j <= max_level; ++j) tables[i][j] = hx[j] * hy[j];
  }
  const std::vector<double> conv = convolve_levels(tables, max_level);
  for (int k = 0; k <= max_level; ++k) out[k] = conv[k];
  return out;
}

std::complex<double> projection_kernel(const ModelOperator& op, int k, std::span<const double> x,
                                       std::span<const double> y) {
  if (k < 0) throw DomainError("projection_kernel: negative level");
  return projection_kernels(op, k, x, y)[k];
}

double laguerre_log_heat_kernel(const ModelOperator& op, double t, std::span<const double> x,
                                std::span<const double> y) {
  if (op.kind() != OperatorKind::laguerre) throw DomainError("laguerre_log_heat_kernel: not laguerre");
  if (!(t > 0.0)) throw DomainError("heat kernel requires t > 0");
  op.check_point(x);
  op.check_point(y);
  double log_p = 0.0;
  const double coth = 1.0 / std::tanh(t);
  const double log_pref = -t - std::log(-std::expm1(-2.0 * t));
  for (int i = 0; i < op.dim(); ++i) {
    const double a = op.alpha()[i];
    const double xy = x[i] * y[i];
    const ScaledReal bessel = bessel_i(a, xy / (2.0 * std::sinh(t)));
    log_p += log_pref - 0.25 * coth * (x[i] * x[i] + y[i] * y[i]) - a * std::log(xy) + bessel.log();
  }
  return log_p;
}

std::complex<double> heat_kernel(const ModelOperator& op, double t, std::span<const double> x,
                                 std::span<const double> y) {
  if (!(t > 0.0)) throw DomainError("heat kernel requires t > 0");
  op.check_point(x);
  op.check_point(y);
  const int d = op.dim();
  switch (op.kind()) {
    case OperatorKind::hermite: {
      double diff2 = 0.0, sum2 = 0.0;
      for (int i = 0; i < d; ++i) {
        diff2 += (x[i] - y[i]) * (x[i] - y[i]);
        sum2 += (x[i] + y[i]) * (x[i] + y[i]);
      }
      return std::pow(2.0 * kPi * std::sinh(2.0 * t), -0.5 * d) *
             std::exp(-0.25 * diff2 / std::tanh(t) - 0.25 * std::tanh(t) * sum2);
    }
    case OperatorKind::twisted: {
      const double r2 = squared_distance(x, y);
      const double mag = std::pow(4.0 * kPi * std::sinh(t), -d) * std::exp(-0.25 * r2 / std::tanh(t));
      return std::polar(mag, -0.5 * twisted_symplectic(d, x, y));
    }
    case OperatorKind::laguerre:
      return std::exp(laguerre_log_heat_kernel(op, t, x, y));
  }
  return 0.0;
}

std::complex<double> schrodinger_kernel(const ModelOperator& op, double t,
                                        std::span<const double> x, std::span<const double> y) {
  if (op.kind() == OperatorKind::laguerre) {
    throw CapabilityError("laguerre: closed-form Schrodinger kernel not available");
  }
  check_time(op, t);
  op.check_point(x);
  op.check_point(y);
  const int d = op.dim();
  const cplx i(0.0, 1.0);
  if (op.kind() == OperatorKind::hermite) {
    const double s2 = std::sin(2.0 * t);
    double sq = 0.0, dot = 0.0;
    for (int k = 0; k < d; ++k) {
      sq += x[k] * x[k] + y[k] * y[k];
      dot += x[k] * y[k];
    }
    const cplx pref = std::pow(cplx(0.0, 2.0 * kPi * s2), -0.5 * d);
    return pref * std::exp(i * (0.5 * sq * std::cos(2.0 * t) / s2 - dot / s2));
  }
  const double st = std::sin(t);
  const double r2 = squared_distance(x, y);
  const cplx pref = std::pow(cplx(0.0, 4.0 * kPi * st), -static_cast<double>(d));
  return pref * std::exp(i * (0.25 * r2 * std::cos(t) / st - 0.5 * twisted_symplectic(d, x, y)));
}

double schrodinger_kernel_magnitude(const ModelOperator& op, double t) {
  if (op.kind() == OperatorKind::laguerre) {
    throw CapabilityError("laguerre: closed-form Schrodinger kernel not available");
  }
  check_time(op, t);
  if (op.kind() == OperatorKind::hermite) {
    return std::pow(2.0 * kPi * std::abs(std::sin(2.0 * t)), -0.5 * op.dim());
  }
  return std::pow(4.0 * kPi * std::abs(std::sin(t)), -static_cast<double>(op.dim()));
}

// -- Quadrature grids --------------------------------------------------------

double default_radius(const ModelOperator& op, int max_level) {
  const double k = std::max(0, max_level);
  switch (op.kind()) {
    case OperatorKind::hermite: return std::sqrt(2.0 * k + 1.0) + 7.0;
    case OperatorKind::twisted: return std::sqrt(8.0 * k + 4.0) + 8.0;
    case OperatorKind::laguerre: {
      const double a = *std::max_element(op.alpha().begin(), op.alpha().end());
      return std::sqrt(2.0 * (4.0 * k + 2.0 * a + 2.0)) + 8.0;
    }
  }
  return 0.0;
}

namespace {

// Composite Gauss on (0, R]. A fractional power x^beta in the weight is only
// algebraically resolved near 0, so the first panel is split geometrically
// (ratio 4) until its remaining mass is below roundoff.
Axis radial_axis(double radius, int panels, double beta) {
  const double h = radius / panels;
  if (beta == std::floor(beta)) return gauss_axis(0.0, radius, panels);
  const int levels = std::min(40, static_cast<int>(std::ceil(40.0 / (beta + 1.0) / 2.0)) + 1);
  std::vector<double> breaks{0.0};
  for (int l = levels; l >= 1; --l) breaks.push_back(h * std::pow(0.25, l));
  breaks.push_back(h);
  std::vector<int> counts(breaks.size() - 1, 1);
  if (panels > 1) {
    breaks.push_back(radius);
    counts.push_back(panels - 1);
  }
  QuadratureRule r = composite_gauss_legendre(breaks, counts, 16);
  return Axis{std::move(r.nodes), std::move(r.weights)};
}

}  // namespace

PointSet quadrature_grid(const ModelOperator& op, double radius, int panels_per_axis) {
  if (!(radius > 0.0)) throw DomainError("quadrature_grid: radius must be positive");
  std::vector<Axis> axes;
  if (op.kind() == OperatorKind::laguerre) {
    for (double a : op.alpha()) {
      Axis ax = radial_axis(radius, panels_per_axis, 2.0 * a + 1.0);
      for (std::size_t i = 0; i < ax.nodes.size(); ++i) {
        ax.weights[i] *= std::pow(ax.nodes[i], 2.0 * a + 1.0);
      }
      axes.push_back(std::move(ax));
    }
  } else {
    for (int i = 0; i < op.coordinate_dim(); ++i) {
      axes.push_back(gauss_axis(-radius, radius, panels_per_axis));
    }
  }
  return tensor_grid(axes);
}

// -- Assumption checks -------------------------------------------------------

namespace {

std::vector<Axis> sample_axes(const ModelOperator& op, int points, double radius) {
  std::vector<Axis> axes;
  for (int i = 0; i < op.coordinate_dim(); ++i) {
    if (op.kind() == OperatorKind::laguerre) {
      axes.push_back(uniform_axis(radius / points, radius, points));
    } else {
      axes.push_back(uniform_axis(-radius, radius, points));
    }
  }
  return axes;
}

// sup over sample pairs of |sum_k e^{-(eps+it)(2k+a+1)} psi_k(x) psi_k(y)|, one coordinate.
double laguerre_damped_sup_1d(double a, double eps, double t, const std::vector<double>& nodes) {
  // Truncate where e^{-2 eps k} times the growth bound falls below 1e-13.
  int K = 16;
  while (K < 200000) {
    const double tail = std::exp(-2.0 * eps * K) * laguerre_fn_sq_bound(K, a) / (1.0 - std::exp(-2.0 * eps));
    if (tail < 1e-13) break;
    K *= 2;
  }
  std::vector<std::vector<double>> psi;
  psi.reserve(nodes.size());
  for (double x : nodes) psi.push_back(laguerre_fn_all(K, a, x));
  std::vector<cplx> weight(K + 1);
  for (int k = 0; k <= K; ++k) weight[k] = std::exp(-cplx(eps, t) * (2.0 * k + a + 1.0));
  double sup = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i; j < nodes.size(); ++j) {
      cplx s = 0.0;
      for (int k = 0; k <= K; ++k) s += weight[k] * (psi[i][k] * psi[j][k]);
      sup = std::max(sup, std::abs(s));
    }
  }
  return sup;
}

}  // namespace

A1Report verify_A1(const ModelOperator& op, const std::vector<double>& t_grid,
                   const A1Options& options) {
  A1Report rep;
  if (t_grid.empty()) throw DomainError("verify_A1: empty t grid");
  const double half_n = 0.5 * op.homogeneous_dimension();
  for (double t : t_grid) {
    if (!(t > 0.0 && t < op.T0())) throw DomainError("verify_A1: t outside (0, T0)");
  }
  const PointSet pts = tensor_grid(sample_axes(op, options.points_per_axis, options.radius));
  const double eps = options.damping_ratio * *std::min_element(t_grid.begin(), t_grid.end());
  for (double t : t_grid) {
    double sup = 0.0;
    double closed = std::numeric_limits<double>::quiet_NaN();
    if (op.kind() == OperatorKind::laguerre) {
      sup = 1.0;
      for (int i = 0; i < op.dim(); ++i) {
        const Axis ax = sample_axes(op, options.points_per_axis, options.radius)[i];
        sup *= laguerre_damped_sup_1d(op.alpha()[i], eps, t, ax.nodes);
      }
    } else {
      closed = schrodinger_kernel_magnitude(op, t);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
          sup = std::max(sup, std::abs(schrodinger_kernel(op, t, pts.point(i), pts.point(j))));
        }
      }
      rep.max_closed_form_error = std::max(rep.max_closed_form_error, std::abs(sup / closed - 1.0));
    }
    rep.t.push_back(t);
    rep.sup_magnitude.push_back(sup);
    rep.scaled.push_back(sup * std::pow(t, half_n));
    rep.closed_form.push_back(closed);
  }
  rep.constant = *std::max_element(rep.scaled.begin(), rep.scaled.end());
  rep.confirmed = std::isfinite(rep.constant) && rep.constant > 0.0;
  return rep;
}

A2Report verify_A2(const ModelOperator& op, const std::vector<double>& t_grid, const PointSet& points) {
  A2Report rep;
  const double n = op.homogeneous_dimension();
  if (op.kind() == OperatorKind::hermite) {
    for (double t : t_grid) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
          const auto x = points.point(i);
          const auto y = points.point(j);
          const double p = heat_kernel(op, t, x, y).real();
          const double bound =
              std::pow(4.0 * kPi * t, -0.5 * n) * std::exp(-squared_distance(x, y) / (4.0 * t));
          ++rep.samples;
          if (!(p <= bound)) ++rep.violations;
        }
      }
    }
    rep.C = 1.0;
    rep.c = 4.0;
    rep.bound_holds = rep.violations == 0;
    return rep;
  }
  if (op.kind() != OperatorKind::laguerre) {
    throw CapabilityError("verify_A2: fitted bound implemented for hermite and laguerre");
  }
  struct Sample {
    double log_pv;  // log(p * mu(B))
    double d2_over_t;
  };
  std::vector<Sample> samples;
  for (double t : t_grid) {
    const double r = std::sqrt(t);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto x = points.point(i);
      double log_vol = 0.0;
      for (int k = 0; k < op.dim(); ++k) {
        const double e = 2.0 * op.alpha()[k] + 2.0;
        const double lo = std::max(0.0, x[k] - r);
        log_vol += std::log((std::pow(x[k] + r, e) - std::pow(lo, e)) / e);
      }
      for (std::size_t j = 0; j < points.size(); ++j) {
        const auto y = points.point(j);
        samples.push_back({laguerre_log_heat_kernel(op, t, x, y) + log_vol, squared_distance(x, y) / t});
      }
    }
  }
  rep.samples = samples.size();
  auto fitted_C = [&](double c) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) best = std::max(best, s.log_pv + s.d2_over_t / c);
    return std::exp(best);
  };
  // C(c) decreases in c towards the on-diagonal constant C(inf); report the
  // smallest c with C(c) <= 1.5 C(inf), found by bisection.
  double limit = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) limit = std::max(limit, s.log_pv);
  const double target = 1.5 * std::exp(limit);
  double lo = 0.25, hi = 1024.0;
  if (fitted_C(lo) <= target) hi = lo;
  for (int it = 0; it < 80 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fitted_C(mid) <= target ? hi : lo) = mid;
  }
  rep.c = hi;
  rep.C = fitted_C(hi);
  rep.bound_holds = std::isfinite(rep.C) && rep.C > 0.0;
  return rep;
}

}  // namespace dlab
