#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `order` nodes on [-1, 1].
/// Nodes are ascending. Results are cached per order (thread-safe).
const QuadratureRule& gauss_legendre(int order);

/// Composite Gauss-Legendre: `panels` equal panels on [a, b], `order` nodes each.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order);

/// Composite rule over consecutive breakpoints; panel count per interval given.
QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks,
                                        const std::vector<int>& panels, int order);

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

}  // namespace dlab
