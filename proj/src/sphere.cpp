#include "kairon/sphere.hpp"

#include <cmath>
#include <stdexcept>

namespace kairon {

double SphereQuadrature::total_weight() const {
  KahanSum s;
  for (double w : weights) s.add(w);
  return s.value();
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n(x).
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

SphereQuadrature build_quadrature(int m, int resolution) {
  checked_spatial_dim(m);
  if (resolution < 1) throw std::invalid_argument("build_quadrature: resolution must be >= 1");

  SphereQuadrature q;
  q.m = m;
  switch (m) {
    case 1: {
      const double minus = -1.0, plus = 1.0;
      q.nodes.push_back(UnitDirection(1, {&minus, 1}));
      q.nodes.push_back(UnitDirection(1, {&plus, 1}));
      q.weights = {1.0, 1.0};
      q.order = 2 * resolution - 1;  // the two-point rule is exact for all f
      break;
    }
    case 2: {
      const int n = resolution;
      q.nodes.reserve(n);
      q.weights.assign(n, 2.0 * M_PI / n);
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * M_PI * k / n;
        const std::array<double, 2> w{std::cos(th), std::sin(th)};
        q.nodes.push_back(unit_direction_unchecked(2, w));
      }
      q.order = n - 1;
      break;
    }
    default: {
      std::vector<double> gl_nodes, gl_weights;
      gauss_legendre(resolution, gl_nodes, gl_weights);
      const int n_phi = 2 * resolution;
      const double w_phi = 2.0 * M_PI / n_phi;
      q.nodes.reserve(static_cast<std::size_t>(resolution) * n_phi);
      q.weights.reserve(static_cast<std::size_t>(resolution) * n_phi);
      for (int i = 0; i < resolution; ++i) {
        const double z = gl_nodes[i];
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < n_phi; ++j) {
          const double ph = 2.0 * M_PI * j / n_phi;
          const std::array<double, 3> w{r * std::cos(ph), r * std::sin(ph), z};
          q.nodes.push_back(unit_direction_unchecked(3, w));
          q.weights.push_back(gl_weights[i] * w_phi);
        }
      }
      q.order = 2 * resolution - 1;
      break;
    }
  }
  return q;
}

double integrate(const SphereQuadrature& quad, const SphereFunction& f) {
  if (!f) throw std::invalid_argument("integrate: empty function");
  KahanSum s;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) s.add(quad.weights[k] * f(quad.nodes[k]));
  return s.value();
}

}  // namespace kairon
