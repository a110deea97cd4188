#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dlab {

/// A finite set of points in R^dim, stored row-major, with optional
/// quadrature weights (measure density already folded in).
struct PointSet {
  int dim = 1;
  std::vector<double> coords;
  std::vector<double> weights;

  std::size_t size() const { return dim > 0 ? coords.size() / dim : 0; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, static_cast<std::size_t>(dim)};
  }
  bool has_weights() const { return !weights.empty(); }
};

/// One axis of a tensor grid.
struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;  // may be empty for sampling-only grids
};

/// `count` equispaced nodes on [lo, hi] (endpoints included), no weights.
Axis uniform_axis(double lo, double hi, int count);

/// Composite 16-point Gauss-Legendre axis on [lo, hi] with `panels` panels.
Axis gauss_axis(double lo, double hi, int panels);

/// Cartesian product of axes; the last axis varies fastest. Weights are the
/// products of axis weights when every axis carries them.
PointSet tensor_grid(const std::vector<Axis>& axes);

/// Single-point set.
PointSet single_point(std::span<const double> x);

}  // namespace dlab
