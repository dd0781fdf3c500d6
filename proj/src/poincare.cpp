#include "kairon/poincare.hpp"

#include <cmath>
#include <stdexcept>

namespace kairon {

AxisState::AxisState(int m, std::function<double(double, const UnitDirection&)> g)
    : m_(checked_spatial_dim(m)), g_(std::move(g)) {
  if (!g_) throw std::invalid_argument("AxisState: missing evaluator");
}

AxisState AxisState::from_expression(const Expression& e) {
  return AxisState(e.spatial_dim(), [e](double t, const UnitDirection& w) { return e(t, w); });
}

AxisState apply_lorentz(const AxisState& state, const LorentzMatrix& L) {
  if (state.spatial_dim() != L.spatial_dim())
    throw std::invalid_argument("apply_lorentz: dimension mismatch");
  const int m = state.spatial_dim();
  const LorentzMatrix Linv = inverse(L);
  const double exponent = -0.5 * m;
  return AxisState(m, [state, L, Linv, exponent](double x0, const UnitDirection& w) {
    const SpacetimeCovector wl = act_covector(lift(w).covector(), L);
    const double wl0 = wl[0];
    return std::pow(wl0, exponent) * state(x0 / wl0, rho(Linv, w));
  });
}

AxisState apply_translation(const AxisState& state, const SpacetimeVector& a) {
  if (state.spatial_dim() != a.spatial_dim())
    throw std::invalid_argument("apply_translation: dimension mismatch");
  const int m = state.spatial_dim();
  return AxisState(m, [state, a, m](double x0, const UnitDirection& w) {
    double shift = a[0];
    for (int i = 1; i <= m; ++i) shift += a[i] * w[i - 1];
    return state(x0 - shift, w);
  });
}

AxisState apply(const AxisState& state, const PoincareTransform& transform) {
  if (std::holds_alternative<LorentzMatrix>(transform))
    return apply_lorentz(state, std::get<LorentzMatrix>(transform));
  return apply_translation(state, std::get<SpacetimeVector>(transform));
}

namespace {

double norm_squared_window(const AxisState& state, const SphereQuadrature& quad, double t_min,
                           double t_max, int n_steps) {
  if (n_steps < 2) n_steps = 2;
  if (n_steps % 2) ++n_steps;
  const double h = (t_max - t_min) / n_steps;
  KahanSum outer;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const UnitDirection& w = quad.nodes[k];
    KahanSum s;
    const double g0 = state(t_min, w);
    const double g1 = state(t_max, w);
    s.add(g0 * g0);
    s.add(g1 * g1);
    for (int j = 1; j < n_steps; ++j) {
      const double g = state(t_min + j * h, w);
      s.add((j % 2 ? 4.0 : 2.0) * g * g);
    }
    outer.add(quad.weights[k] * s.value() * h / 3.0);
  }
  return outer.value();
}

}  // namespace

double axis_norm_squared(const AxisState& state, const SphereQuadrature& quad,
                         const AxisQuadrature& t_rule) {
  if (state.spatial_dim() != quad.m) throw std::invalid_argument("axis_norm_squared: dimension mismatch");
  if (!(t_rule.t_min < t_rule.t_max)) throw std::invalid_argument("axis_norm_squared: empty t window");
  return norm_squared_window(state, quad, t_rule.t_min, t_rule.t_max, t_rule.n_steps);
}

double unitarity_defect(const AxisState& state, const PoincareTransform& transform,
                        const SphereQuadrature& quad, const AxisQuadrature& t_rule) {
  const AxisState transformed = apply(state, transform);

  // Window-growth gate: widen the x^0 window by 50% (step count scaled to keep
  // the mesh) and require both norms to be stable; otherwise the norm is not
  // captured by the configured window.
  const double half = 0.5 * (t_rule.t_max - t_rule.t_min);
  const double pad = 0.25 * (t_rule.t_max - t_rule.t_min);
  const int n_wide = static_cast<int>(t_rule.n_steps * (half + pad) / half);

  const double n0 = axis_norm_squared(state, quad, t_rule);
  const double n0_wide =
      norm_squared_window(state, quad, t_rule.t_min - pad, t_rule.t_max + pad, n_wide);
  const double n1 = axis_norm_squared(transformed, quad, t_rule);
  const double n1_wide =
      norm_squared_window(transformed, quad, t_rule.t_min - pad, t_rule.t_max + pad, n_wide);

  if (!(n0 > 0.0)) throw std::domain_error("unitarity_defect: state has zero norm on the window");
  const double growth = std::max(std::abs(n0_wide - n0), std::abs(n1_wide - n1)) / n0;
  if (growth > 1e-9)
    throw std::domain_error(
        "unitarity_defect: norm grows when the x^0 window is widened; the state (or its "
        "transform) is not integrable over the configured window");

  return std::abs(n1 - n0) / n0;
}

double homomorphism_defect(const AxisState& state, const LorentzMatrix& L1, const LorentzMatrix& L2,
                           std::span<const std::pair<double, UnitDirection>> samples) {
  const AxisState nested = apply_lorentz(apply_lorentz(state, L2), L1);
  const AxisState direct = apply_lorentz(state, compose(L1, L2));
  double defect = 0.0;
  for (const auto& [x0, w] : samples)
    defect = std::max(defect, std::abs(nested(x0, w) - direct(x0, w)));
  return defect;
}

}  // namespace kairon
