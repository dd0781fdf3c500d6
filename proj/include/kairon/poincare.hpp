#pragma once

#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "kairon/cone.hpp"
#include "kairon/expr.hpp"
#include "kairon/geometry.hpp"
#include "kairon/sphere.hpp"

namespace kairon {

// Initial data on the x^0 axis: a closed-form evaluator g(x^0, w), an element
// of the dense smooth subspace of the solution-space realization on the axis.
// Transforms compose as closed forms; nothing is ever sampled onto a grid.
class AxisState {
public:
  AxisState(int m, std::function<double(double, const UnitDirection&)> g);
  static AxisState from_expression(const Expression& e);

  double operator()(double x0, const UnitDirection& w) const { return g_(x0, w); }
  int spatial_dim() const { return m_; }

private:
  int m_;
  std::function<double(double, const UnitDirection&)> g_;
};

// (U_L g)(x^0, w) = ((w L)_0)^{-m/2} g(x^0 / (w L)_0, rho_{L^{-1}}(w)),
// with (w L)_0 the time component of act_covector(lift(w), L).
AxisState apply_lorentz(const AxisState& state, const LorentzMatrix& L);

// (U_a g)(x^0, w) = g(x^0 - a^0 - a_vec . w, w).
AxisState apply_translation(const AxisState& state, const SpacetimeVector& a);

using PoincareTransform = std::variant<LorentzMatrix, SpacetimeVector>;

AxisState apply(const AxisState& state, const PoincareTransform& transform);

// Composite Simpson rule on the x^0 axis.
struct AxisQuadrature {
  double t_min;
  double t_max;
  int n_steps;
};

// ||g||^2 = int_S sigma0(w) int dx^0 g(x^0, w)^2 over the given windows.
double axis_norm_squared(const AxisState& state, const SphereQuadrature& quad,
                         const AxisQuadrature& t_rule);

// | ||U g||^2 - ||g||^2 | / ||g||^2.  Throws std::domain_error when widening
// the x^0 window still changes either norm (the state is not integrable over
// the configured window).
double unitarity_defect(const AxisState& state, const PoincareTransform& transform,
                        const SphereQuadrature& quad, const AxisQuadrature& t_rule);

// max over the sample list of |U_{L1}(U_{L2} g) - U_{L1 L2} g| evaluated in
// closed form (no quadrature); this rests on the cocycle identity and the
// action law of rho.
double homomorphism_defect(const AxisState& state, const LorentzMatrix& L1, const LorentzMatrix& L2,
                           std::span<const std::pair<double, UnitDirection>> samples);

}  // namespace kairon
