#include "dlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dlab {

namespace {

QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    if (order == 1) {
      it = cache.emplace(order, QuadratureRule{{0.0}, {2.0}}).first;
    } else {
      it = cache.emplace(order, compute_gauss_legendre(order)).first;
    }
  }
  return it->second;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
  return composite_gauss_legendre(std::vector<double>{a, b}, std::vector<int>{panels}, order);
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks,
                                        const std::vector<int>& panels, int order) {
  if (breaks.size() < 2 || panels.size() != breaks.size() - 1) {
    throw std::invalid_argument("composite_gauss_legendre: breaks/panels mismatch");
  }
  const QuadratureRule& base = gauss_legendre(order);
  QuadratureRule out;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s];
    const double b = breaks[s + 1];
    const int p = panels[s];
    if (p < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
    const double h = (b - a) / p;
    for (int q = 0; q < p; ++q) {
      const double lo = a + q * h;
      for (std::size_t i = 0; i < base.size(); ++i) {
        out.nodes.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
        out.weights.push_back(0.5 * h * base.weights[i]);
      }
    }
  }
  return out;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

}  // namespace dlab
