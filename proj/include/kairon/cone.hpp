#pragma once

#include <cstdint>
#include <functional>

#include "kairon/geometry.hpp"
#include "kairon/sphere.hpp"

namespace kairon {

// Function on the positive null cone {q(p) = 0, p0 > 0}.
using ConeFunction = std::function<double(const SpacetimeCovector&)>;

// Covector on the positive null cone; constructor enforces q(p) = 0 within
// 1e-10 * p0^2 and p0 > 0.
class IsotropicCovector {
public:
  explicit IsotropicCovector(const SpacetimeCovector& p);
  const SpacetimeCovector& covector() const { return p_; }
  double operator[](int alpha) const { return p_[alpha]; }
  int spatial_dim() const { return p_.spatial_dim(); }

private:
  SpacetimeCovector p_;
};

// omega = (1, w): the null lift of a sphere point.
IsotropicCovector lift(const UnitDirection& w);

struct ProjectedDirection {
  UnitDirection direction;
  double scale;  // p0
};

// (p_vec / p0, p0); throws if p0 <= 0 or p is off the cone.
ProjectedDirection project(const SpacetimeCovector& p);

// Aberration action on the sphere: rho_L(w)_i = (w L^{-1})_i / (w L^{-1})_0,
// with w the null lift (1, w).  Left action: rho_{L1 L2} = rho_{L1} o rho_{L2}.
UnitDirection rho(const LorentzMatrix& L, const UnitDirection& w);

// gamma_r(L, w) = ((w L^{-1})_0)^r.  Strictly positive; gamma_0 = 1;
// gamma_r * gamma_s = gamma_{r+s}.
double gamma(double r, const LorentzMatrix& L, const UnitDirection& w);

// Relative defect of the composition law
// gamma(L1 L2, w) = gamma(L1, rho_{L2}(w)) * gamma(L2, w).
double cocycle_defect(double r, const LorentzMatrix& L1, const LorentzMatrix& L2, const UnitDirection& w);

struct JacobianCheck {
  double defect;        // |jacobian_fd - expected| / expected
  double jacobian_fd;   // finite-difference Jacobian of rho_L at w
  double expected;      // gamma_{1-m}(L, w)
  int chart_axis;       // coordinate axis dropped when building the domain tangent frame
  int chart_axis_image; // same at the image point
};

// Compares the (m-1)-dimensional Jacobian determinant of rho_L at w, computed
// by central differences with step h in orthonormal tangent charts, against
// gamma_{1-m}(L, w).  Requires m >= 2.  The tangent frames avoid the chart
// singularity by dropping the largest-|component| axis (reported back).
JacobianCheck sigma_jacobian_defect(const LorentzMatrix& L, const UnitDirection& w, double h);

struct ConeMeasureCheck {
  double integral;              // MC estimate of  int f(p) mu0
  double integral_transformed;  // MC estimate of  int f(p L) mu0
  double mc_error;              // standard error of the difference estimator
};

// Monte Carlo check of the invariance of mu0 = dp_1...dp_m / |p| under the
// group action.  f must vanish for |p_vec| outside [support_inner,
// support_outer]; sampling covers the union of that annulus and its image
// under L.  Both estimates share the same sample set (same seed), so the
// difference estimator is exact for L = identity.  Deterministic given
// (seed, n_samples); samples are drawn by counter, so the result does not
// depend on evaluation order.
ConeMeasureCheck cone_measure_invariance(const ConeFunction& f, const LorentzMatrix& L,
                                         double support_inner, double support_outer,
                                         std::int64_t n_samples, std::uint64_t seed);

// Frame transition for equivariant functions of type r:
// (frame_change(psi, r, L))(w) = gamma_r(L, w)^{-1} psi(rho_L(w)).
// Composes contravariantly: frame_change(psi, r, L1 L2) ==
// frame_change(frame_change(psi, r, L1), r, L2).
SphereFunction frame_change(SphereFunction psi, double r, const LorentzMatrix& L);

// Sum_k weight_k phi(w_k) psi(w_k) (v^0 + v_vec . w_k).  For phi, psi of type
// r = m/2 in a common frame this is frame-independent (the integrand carries
// total weight zero).
double invariant_pairing(const SphereFunction& phi, const SphereFunction& psi,
                         const SpacetimeVector& v, const SphereQuadrature& quad);

// Homogeneous extension of degree -r: F(p) = p0^{-r} f(p_vec / p0), so
// F(lambda p) = lambda^{-r} F(p).  Throws on arguments off the positive cone.
ConeFunction hom_extend(SphereFunction f, double r);

// Restriction to the omega_0 = 1 section: w -> F((1, w)).
SphereFunction hom_restrict(ConeFunction F);

}  // namespace kairon
