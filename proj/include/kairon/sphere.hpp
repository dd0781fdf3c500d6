#pragma once

#include <functional>
#include <vector>

#include "kairon/geometry.hpp"

namespace kairon {

// Opaque evaluator on S^{m-1}.  Must be deterministic and safe for concurrent
// read-only use.
using SphereFunction = std::function<double(const UnitDirection&)>;

// Compensated (Kahan) accumulator; used wherever a documented deterministic
// reduction is required.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// Node/weight rule approximating  integral_{S^{m-1}} f sigma0  with the round
// measure sigma0 (total 2, 2*pi, 4*pi for m = 1, 2, 3).
//
//   m = 1 : the two points {-1, +1}, weights {1, 1}; exact for everything
//   m = 2 : N equispaced angles, weights 2*pi/N (trapezoid; spectrally
//           accurate for smooth periodic integrands)
//   m = 3 : Gauss-Legendre in cos(theta) (resolution points) x equispaced
//           azimuth (2*resolution points), product weights
struct SphereQuadrature {
  int m = 0;
  std::vector<UnitDirection> nodes;
  std::vector<double> weights;
  int order = 0;  // polynomial exactness degree

  double total_weight() const;
};

SphereQuadrature build_quadrature(int m, int resolution);

// Sum_k weight_k f(node_k), accumulated in node order with compensated
// summation; sequential and bit-reproducible.
double integrate(const SphereQuadrature& quad, const SphereFunction& f);

// Gauss-Legendre nodes/weights on [-1, 1] (Newton on the Legendre recurrence).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace kairon
