#include "kairon/cone.hpp"

#include <cmath>
#include <stdexcept>

namespace kairon {

namespace {

// Orthonormal basis of the tangent space at w, built from the coordinate axes
// with the largest-|component| axis dropped (Gram-Schmidt against w).  Returns
// the dropped axis (0-based).
int tangent_frame(const UnitDirection& w, std::array<std::array<double, 3>, 2>& frame) {
  const int m = w.spatial_dim();
  int drop = 0;
  for (int k = 1; k < m; ++k)
    if (std::abs(w[k]) > std::abs(w[drop])) drop = k;

  int count = 0;
  for (int k = 0; k < m && count < m - 1; ++k) {
    if (k == drop) continue;
    std::array<double, 3> v{};
    v[k] = 1.0;
    // remove the w component
    double d = 0.0;
    for (int j = 0; j < m; ++j) d += v[j] * w[j];
    for (int j = 0; j < m; ++j) v[j] -= d * w[j];
    // remove previously accepted tangents
    for (int p = 0; p < count; ++p) {
      double dp = 0.0;
      for (int j = 0; j < m; ++j) dp += v[j] * frame[p][j];
      for (int j = 0; j < m; ++j) v[j] -= dp * frame[p][j];
    }
    double n = 0.0;
    for (int j = 0; j < m; ++j) n += v[j] * v[j];
    n = std::sqrt(n);
    for (int j = 0; j < m; ++j) v[j] /= n;
    frame[count++] = v;
  }
  return drop;
}

// Chart around w:  x -> (w + sum x_a t_a) / |w + sum x_a t_a|.
// Its differential at x = 0 maps e_a to t_a (orthonormal), so Jacobians taken
// through this chart are chart-free at the base point.
UnitDirection chart_point(const UnitDirection& w, const std::array<std::array<double, 3>, 2>& frame,
                          int n_tangent, std::span<const double> x) {
  const int m = w.spatial_dim();
  std::array<double, 3> v{};
  for (int j = 0; j < m; ++j) v[j] = w[j];
  for (int a = 0; a < n_tangent; ++a)
    for (int j = 0; j < m; ++j) v[j] += x[a] * frame[a][j];
  double n = 0.0;
  for (int j = 0; j < m; ++j) n += v[j] * v[j];
  n = std::sqrt(n);
  for (int j = 0; j < m; ++j) v[j] /= n;
  return unit_direction_unchecked(m, {v.data(), static_cast<std::size_t>(m)});
}

}  // namespace

IsotropicCovector::IsotropicCovector(const SpacetimeCovector& p) : p_(p) {
  if (!(p[0] > 0.0)) throw std::invalid_argument("IsotropicCovector: p0 must be > 0");
  const double q = quadratic_form(p);
  if (std::abs(q) > 1e-10 * p[0] * p[0])
    throw std::invalid_argument("IsotropicCovector: not on the null cone (q(p) != 0)");
}

IsotropicCovector lift(const UnitDirection& w) {
  const int m = w.spatial_dim();
  SpacetimeCovector p(m);
  p[0] = 1.0;
  for (int i = 1; i <= m; ++i) p[i] = w[i - 1];
  return IsotropicCovector(p);
}

ProjectedDirection project(const SpacetimeCovector& p) {
  if (!(p[0] > 0.0)) throw std::invalid_argument("project: p0 must be > 0");
  const int m = p.spatial_dim();
  const double q = quadratic_form(p);
  if (std::abs(q) > 1e-10 * p[0] * p[0])
    throw std::invalid_argument("project: covector is not on the null cone");
  std::array<double, 3> w{};
  for (int i = 1; i <= m; ++i) w[i - 1] = p[i] / p[0];
  // kill the rounding left by the division
  double n = 0.0;
  for (int k = 0; k < m; ++k) n += w[k] * w[k];
  n = std::sqrt(n);
  for (int k = 0; k < m; ++k) w[k] /= n;
  return ProjectedDirection{unit_direction_unchecked(m, {w.data(), static_cast<std::size_t>(m)}), p[0]};
}

UnitDirection rho(const LorentzMatrix& L, const UnitDirection& w) {
  const SpacetimeCovector q = act_covector(lift(w).covector(), inverse(L));
  return project(q).direction;
}

double gamma(double r, const LorentzMatrix& L, const UnitDirection& w) {
  const SpacetimeCovector q = act_covector(lift(w).covector(), inverse(L));
  return std::pow(q[0], r);
}

double cocycle_defect(double r, const LorentzMatrix& L1, const LorentzMatrix& L2, const UnitDirection& w) {
  const double lhs = gamma(r, compose(L1, L2), w);
  const double rhs = gamma(r, L1, rho(L2, w)) * gamma(r, L2, w);
  return std::abs(lhs - rhs) / lhs;
}

JacobianCheck sigma_jacobian_defect(const LorentzMatrix& L, const UnitDirection& w, double h) {
  const int m = w.spatial_dim();
  if (m < 2) throw std::invalid_argument("sigma_jacobian_defect: requires m >= 2");
  if (!(h > 0.0)) throw std::invalid_argument("sigma_jacobian_defect: step must be > 0");

  std::array<std::array<double, 3>, 2> frame{};
  const int drop = tangent_frame(w, frame);
  const UnitDirection image = rho(L, w);
  std::array<std::array<double, 3>, 2> frame_im{};
  const int drop_im = tangent_frame(image, frame_im);

  const int d = m - 1;
  // M[b][a] = t'_b . d/dx_a  rho_L(chart(x)) at x = 0, by central differences.
  std::array<std::array<double, 2>, 2> M{};
  for (int a = 0; a < d; ++a) {
    std::array<double, 2> xp{}, xm{};
    xp[a] = h;
    xm[a] = -h;
    const UnitDirection up = rho(L, chart_point(w, frame, d, {xp.data(), 2}));
    const UnitDirection um = rho(L, chart_point(w, frame, d, {xm.data(), 2}));
    for (int b = 0; b < d; ++b) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += frame_im[b][j] * (up[j] - um[j]);
      M[b][a] = s / (2.0 * h);
    }
  }
  const double jac = d == 1 ? std::abs(M[0][0]) : std::abs(M[0][0] * M[1][1] - M[0][1] * M[1][0]);
  const double expected = gamma(1.0 - m, L, w);
  return JacobianCheck{std::abs(jac - expected) / expected, jac, expected, drop, drop_im};
}

ConeMeasureCheck cone_measure_invariance(const ConeFunction& f, const LorentzMatrix& L,
                                         double support_inner, double support_outer,
                                         std::int64_t n_samples, std::uint64_t seed) {
  if (!f) throw std::invalid_argument("cone_measure_invariance: empty function");
  if (n_samples <= 0) throw std::invalid_argument("cone_measure_invariance: need at least one sample");
  if (!(support_outer > 0.0) || support_inner < 0.0 || support_inner >= support_outer)
    throw std::invalid_argument("cone_measure_invariance: bad support annulus");
  const int m = L.spatial_dim();

  // On null covectors p0 scales under L by a factor in [s_min, s_max]:
  // (w L)_0 = L^0_0 + w_i L^i_0 with |w| = 1, and s_min s_max = 1.
  double col = 0.0;
  for (int i = 1; i <= m; ++i) col += L(i, 0) * L(i, 0);
  col = std::sqrt(col);
  const double s_max = L(0, 0) + col;
  const double s_min = 1.0 / s_max;
  // The sampling annulus must cover supp(f) and supp(f o L).
  const double r_lo = support_inner * s_min;
  const double r_hi = support_outer * s_max;

  // Volume of the annulus {r_lo <= |p| <= r_hi} in R^m.
  double volume = 0.0;
  switch (m) {
    case 1: volume = 2.0 * (r_hi - r_lo); break;
    case 2: volume = M_PI * (r_hi * r_hi - r_lo * r_lo); break;
    default: volume = 4.0 * M_PI / 3.0 * (r_hi * r_hi * r_hi - r_lo * r_lo * r_lo); break;
  }

  // int f dmu0 = int f((|p|, p)) / |p| d^m p  ~  (V/N) sum f(p_i)/|p_i|.
  KahanSum acc1, acc2, acc_d, acc_d2;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const auto n = static_cast<std::uint64_t>(i);
    // radius with density ~ r^{m-1}, direction uniform; u kept away from 0 so
    // a degenerate annulus (r_lo = 0) cannot produce a zero radius
    const double u = std::max(rng::u01_at(seed, n, 0), 0x1.0p-53);
    double radius = 0.0;
    switch (m) {
      case 1: radius = r_lo + u * (r_hi - r_lo); break;
      case 2: radius = std::sqrt(r_lo * r_lo + u * (r_hi * r_hi - r_lo * r_lo)); break;
      default: radius = std::cbrt(r_lo * r_lo * r_lo + u * (r_hi * r_hi * r_hi - r_lo * r_lo * r_lo)); break;
    }
    std::array<double, 3> dir{};
    switch (m) {
      case 1:
        dir[0] = rng::u01_at(seed, n, 1) < 0.5 ? -1.0 : 1.0;
        break;
      case 2: {
        const double th = 2.0 * M_PI * rng::u01_at(seed, n, 1);
        dir[0] = std::cos(th);
        dir[1] = std::sin(th);
        break;
      }
      default: {
        const double z = 2.0 * rng::u01_at(seed, n, 1) - 1.0;
        const double ph = 2.0 * M_PI * rng::u01_at(seed, n, 2);
        const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
        dir[0] = rr * std::cos(ph);
        dir[1] = rr * std::sin(ph);
        dir[2] = z;
        break;
      }
    }
    SpacetimeCovector p(m);
    p[0] = radius;
    for (int k = 1; k <= m; ++k) p[k] = radius * dir[k - 1];

    const double v1 = f(p) / radius;
    const double v2 = f(act_covector(p, L)) / radius;
    acc1.add(v1);
    acc2.add(v2);
    acc_d.add(v1 - v2);
    acc_d2.add((v1 - v2) * (v1 - v2));
  }
  const double inv_n = 1.0 / static_cast<double>(n_samples);
  const double i1 = volume * acc1.value() * inv_n;
  const double i2 = volume * acc2.value() * inv_n;
  const double mean_d = acc_d.value() * inv_n;
  const double var_d = std::max(0.0, acc_d2.value() * inv_n - mean_d * mean_d);
  const double se = volume * std::sqrt(var_d * inv_n);
  return ConeMeasureCheck{i1, i2, se};
}

SphereFunction frame_change(SphereFunction psi, double r, const LorentzMatrix& L) {
  if (!psi) throw std::invalid_argument("frame_change: empty function");
  return [psi = std::move(psi), r, L](const UnitDirection& w) {
    return psi(rho(L, w)) / gamma(r, L, w);
  };
}

double invariant_pairing(const SphereFunction& phi, const SphereFunction& psi,
                         const SpacetimeVector& v, const SphereQuadrature& quad) {
  if (v.spatial_dim() != quad.m) throw std::invalid_argument("invariant_pairing: dimension mismatch");
  const int m = quad.m;
  KahanSum s;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const UnitDirection& w = quad.nodes[k];
    double fv = v[0];
    for (int i = 1; i <= m; ++i) fv += v[i] * w[i - 1];
    s.add(quad.weights[k] * phi(w) * psi(w) * fv);
  }
  return s.value();
}

ConeFunction hom_extend(SphereFunction f, double r) {
  if (!f) throw std::invalid_argument("hom_extend: empty function");
  return [f = std::move(f), r](const SpacetimeCovector& p) {
    const ProjectedDirection pr = project(p);  // validates cone membership
    return std::pow(pr.scale, -r) * f(pr.direction);
  };
}

SphereFunction hom_restrict(ConeFunction F) {
  if (!F) throw std::invalid_argument("hom_restrict: empty function");
  return [F = std::move(F)](const UnitDirection& w) { return F(lift(w).covector()); };
}

}  // namespace kairon
