#pragma once

#include <span>

#include "kairon/field.hpp"
#include "kairon/sphere.hpp"

namespace kairon {

// j_{Psi1,Psi2}(x)(xi) = int_S Psi1(x,w) Psi2(x,w) (xi^0 + xi_vec . w) sigma0(w)
// evaluated by sphere quadrature.  Bilinear in the fields, linear in xi.
double current_component(const KaironField& psi1, const KaironField& psi2,
                         const SpacetimeVector& x, const SpacetimeVector& xi,
                         const SphereQuadrature& quad);

// |loop integral of j| over the closed polyline given by its vertices
// (first == last within 1e-12), composite Simpson with n_steps per segment.
// The current is a closed 1-form, so this tends to zero under refinement.
double closedness_defect(const KaironField& psi1, const KaironField& psi2,
                         std::span<const SpacetimeVector> loop, const SphereQuadrature& quad,
                         int n_steps);

// <Psi1, Psi2> = int_S sigma0(w) int ds (gamma_dot^0 + w . gamma_dot_vec)
//                Psi1(gamma(s), w) Psi2(gamma(s), w)
// Outer sphere quadrature, inner composite Simpson with n_steps intervals.
// When both fields carry support bounds the s-integral runs over the exact
// per-direction support slab (intersected); the given s_window must contain
// every slab or the call throws, naming the violated bound.  When either
// field has no support bound, the integral runs over s_window as given (the
// caller vouches for the decay).
double inner_product(const KaironField& psi1, const KaironField& psi2, const Worldline& gamma,
                     const SphereQuadrature& quad, std::array<double, 2> s_window, int n_steps);

// |<.,.>_A - <.,.>_B| / max(|<.,.>_A|, eps); both worldlines must carry the
// fields' compact support inside their windows.
double path_independence_defect(const KaironField& psi1, const KaironField& psi2,
                                const Worldline& gamma_a, const Worldline& gamma_b,
                                const SphereQuadrature& quad, std::array<double, 2> window_a,
                                std::array<double, 2> window_b, int n_steps);

}  // namespace kairon
