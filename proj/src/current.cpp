#include "kairon/current.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kairon {

namespace {

void check_dims(const KaironField& psi1, const KaironField& psi2, const SphereQuadrature& quad) {
  if (psi1.spatial_dim() != quad.m || psi2.spatial_dim() != quad.m)
    throw std::invalid_argument("current: fields and quadrature must share m");
}

// Composite Simpson over [a, b] with n intervals (rounded up to even).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  if (b <= a) return 0.0;
  if (n < 2) n = 2;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  KahanSum s;
  s.add(f(a));
  s.add(f(b));
  for (int k = 1; k < n; ++k) s.add((k % 2 ? 4.0 : 2.0) * f(a + k * h));
  return s.value() * h / 3.0;
}

}  // namespace

double current_component(const KaironField& psi1, const KaironField& psi2,
                         const SpacetimeVector& x, const SpacetimeVector& xi,
                         const SphereQuadrature& quad) {
  check_dims(psi1, psi2, quad);
  if (xi.spatial_dim() != quad.m) throw std::invalid_argument("current: xi dimension mismatch");
  const int m = quad.m;
  KahanSum s;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const UnitDirection& w = quad.nodes[k];
    double fxi = xi[0];
    for (int i = 1; i <= m; ++i) fxi += xi[i] * w[i - 1];
    s.add(quad.weights[k] * psi1(x, w) * psi2(x, w) * fxi);
  }
  return s.value();
}

double closedness_defect(const KaironField& psi1, const KaironField& psi2,
                         std::span<const SpacetimeVector> loop, const SphereQuadrature& quad,
                         int n_steps) {
  check_dims(psi1, psi2, quad);
  if (loop.size() < 3) throw std::invalid_argument("closedness_defect: loop needs at least 3 vertices");
  const int m = quad.m;
  const SpacetimeVector& first = loop.front();
  const SpacetimeVector& last = loop.back();
  for (int a = 0; a <= m; ++a)
    if (std::abs(first[a] - last[a]) > 1e-12)
      throw std::invalid_argument("closedness_defect: loop is not closed (endpoints differ)");

  KahanSum total;
  for (std::size_t seg = 0; seg + 1 < loop.size(); ++seg) {
    const SpacetimeVector& a = loop[seg];
    const SpacetimeVector& b = loop[seg + 1];
    SpacetimeVector dir(m);
    for (int c = 0; c <= m; ++c) dir[c] = b[c] - a[c];
    const double value = simpson(
        [&](double t) {
          SpacetimeVector x(m);
          for (int c = 0; c <= m; ++c) x[c] = a[c] + t * dir[c];
          return current_component(psi1, psi2, x, dir, quad);
        },
        0.0, 1.0, n_steps);
    total.add(value);
  }
  return std::abs(total.value());
}

double inner_product(const KaironField& psi1, const KaironField& psi2, const Worldline& gamma,
                     const SphereQuadrature& quad, std::array<double, 2> s_window, int n_steps) {
  check_dims(psi1, psi2, quad);
  if (gamma.spatial_dim() != quad.m) throw std::invalid_argument("inner_product: worldline dimension mismatch");
  if (!(s_window[0] < s_window[1])) throw std::invalid_argument("inner_product: empty s_window");
  if (n_steps < 2) throw std::invalid_argument("inner_product: need n_steps >= 2");
  const int m = quad.m;

  const bool compact = psi1.data().support_bound && psi2.data().support_bound;

  KahanSum outer;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const UnitDirection& w = quad.nodes[k];

    double lo = s_window[0], hi = s_window[1];
    if (compact) {
      const auto i1 = support_interval_on(psi1, gamma, w);
      const auto i2 = support_interval_on(psi2, gamma, w);
      for (const auto& iv : {i1, i2}) {
        if (iv->at(0) < s_window[0] - 1e-9 || iv->at(1) > s_window[1] + 1e-9) {
          std::ostringstream os;
          os << "inner_product: support slab [" << iv->at(0) << ", " << iv->at(1)
             << "] for a sphere node is not contained in the s_window [" << s_window[0] << ", "
             << s_window[1] << "]";
          throw std::invalid_argument(os.str());
        }
      }
      lo = std::max(i1->at(0), i2->at(0));
      hi = std::min(i1->at(1), i2->at(1));
      if (!(lo < hi)) continue;  // supports do not meet at this direction
    }

    const double value = simpson(
        [&](double s) {
          const SpacetimeVector x = gamma.position(s);
          const SpacetimeVector v = gamma.tangent(s);
          double weight = v[0];
          for (int i = 1; i <= m; ++i) weight += w[i - 1] * v[i];
          return weight * psi1(x, w) * psi2(x, w);
        },
        lo, hi, n_steps);
    outer.add(quad.weights[k] * value);
  }
  return outer.value();
}

double path_independence_defect(const KaironField& psi1, const KaironField& psi2,
                                const Worldline& gamma_a, const Worldline& gamma_b,
                                const SphereQuadrature& quad, std::array<double, 2> window_a,
                                std::array<double, 2> window_b, int n_steps) {
  if (!psi1.data().support_bound || !psi2.data().support_bound)
    throw std::invalid_argument(
        "path_independence_defect: both fields need compactly supported data (the "
        "path-independence argument closes the loop outside the support)");
  const double ia = inner_product(psi1, psi2, gamma_a, quad, window_a, n_steps);
  const double ib = inner_product(psi1, psi2, gamma_b, quad, window_b, n_steps);
  return std::abs(ia - ib) / std::max(std::abs(ia), 1e-30);
}

}  // namespace kairon
