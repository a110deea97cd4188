#include "dlab/grid.hpp"

#include <stdexcept>

#include "dlab/quadrature.hpp"

namespace dlab {

Axis uniform_axis(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("uniform_axis: count must be >= 1");
  Axis a;
  a.nodes.resize(count);
  for (int i = 0; i < count; ++i) {
    a.nodes[i] = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
  }
  return a;
}

Axis gauss_axis(double lo, double hi, int panels) {
  QuadratureRule r = composite_gauss_legendre(lo, hi, panels, 16);
  return Axis{std::move(r.nodes), std::move(r.weights)};
}

PointSet tensor_grid(const std::vector<Axis>& axes) {
  if (axes.empty()) throw std::invalid_argument("tensor_grid: no axes");
  PointSet ps;
  ps.dim = static_cast<int>(axes.size());
  bool weighted = true;
  std::size_t total = 1;
  for (const auto& a : axes) {
    total *= a.nodes.size();
    weighted = weighted && a.weights.size() == a.nodes.size();
  }
  ps.coords.resize(total * ps.dim);
  if (weighted) ps.weights.resize(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t p = 0; p < total; ++p) {
    double w = 1.0;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      ps.coords[p * ps.dim + d] = axes[d].nodes[idx[d]];
      if (weighted) w *= axes[d].weights[idx[d]];
    }
    if (weighted) ps.weights[p] = w;
    for (std::size_t d = axes.size(); d-- > 0;) {
      if (++idx[d] < axes[d].nodes.size()) break;
      idx[d] = 0;
    }
  }
  return ps;
}

PointSet single_point(std::span<const double> x) {
  PointSet ps;
  ps.dim = static_cast<int>(x.size());
  ps.coords.assign(x.begin(), x.end());
  return ps;
}

}  // namespace dlab
