#include "kairon/field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kairon {

Worldline Worldline::time_axis(int m) {
  return Worldline(checked_spatial_dim(m), Kind::TimeAxis);
}

Worldline Worldline::straight_line(std::span<const double> beta, const SpacetimeVector& base) {
  const int m = base.spatial_dim();
  if (beta.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("straight_line: beta needs m components");
  double b2 = 0.0;
  for (double b : beta) b2 += b * b;
  const double speed = std::sqrt(b2);
  if (!(speed < 1.0))
    throw std::invalid_argument("straight_line: |beta| must be < 1 (time-like worldline required)");
  Worldline w(m, Kind::StraightLine);
  for (int k = 0; k < m; ++k) w.beta_[k] = beta[k];
  w.base_ = base;
  w.beta_max_ = speed;
  return w;
}

Worldline Worldline::straight_line(int m, std::span<const double> beta) {
  return straight_line(beta, SpacetimeVector::zero(m));
}

Worldline Worldline::analytic(int m, std::function<SpacetimeVector(double)> position,
                              std::function<SpacetimeVector(double)> tangent, double beta_max) {
  checked_spatial_dim(m);
  if (!position || !tangent) throw std::invalid_argument("analytic worldline: missing evaluators");
  Worldline w(m, Kind::Analytic);
  w.position_ = std::move(position);
  w.tangent_ = std::move(tangent);
  w.beta_max_ = beta_max;
  return w;
}

SpacetimeVector Worldline::position(double s) const {
  switch (kind_) {
    case Kind::TimeAxis: {
      SpacetimeVector x(m_);
      x[0] = s;
      return x;
    }
    case Kind::StraightLine: {
      SpacetimeVector x = base_;
      x[0] += s;
      for (int k = 1; k <= m_; ++k) x[k] += s * beta_[k - 1];
      return x;
    }
    case Kind::Analytic:
      return position_(s);
  }
  throw std::logic_error("worldline kind");
}

SpacetimeVector Worldline::tangent(double s) const {
  switch (kind_) {
    case Kind::TimeAxis: {
      SpacetimeVector v(m_);
      v[0] = 1.0;
      return v;
    }
    case Kind::StraightLine: {
      SpacetimeVector v(m_);
      v[0] = 1.0;
      for (int k = 1; k <= m_; ++k) v[k] = beta_[k - 1];
      return v;
    }
    case Kind::Analytic:
      return tangent_(s);
  }
  throw std::logic_error("worldline kind");
}

double phase(const Worldline& gamma, const UnitDirection& w, double s) {
  switch (gamma.kind()) {
    case Worldline::Kind::TimeAxis:
      return s;
    case Worldline::Kind::StraightLine: {
      const SpacetimeVector& b = gamma.base();
      double p = b[0] + s;
      for (int k = 1; k <= gamma.spatial_dim(); ++k)
        p += w[k - 1] * (b[k] + s * gamma.beta()[k - 1]);
      return p;
    }
    case Worldline::Kind::Analytic: {
      const SpacetimeVector x = gamma.position(s);
      double p = x[0];
      for (int k = 1; k <= gamma.spatial_dim(); ++k) p += w[k - 1] * x[k];
      return p;
    }
  }
  throw std::logic_error("worldline kind");
}

ClassTReport class_t_check(const Worldline& gamma, double s_min, double s_max, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("class_t_check: need at least 2 samples");
  if (!(s_min < s_max)) throw std::invalid_argument("class_t_check: empty sample range");

  ClassTReport r;
  r.declared_beta_max = gamma.beta_max();
  r.n_samples = n_samples;
  r.s_min = s_min;
  r.s_max = s_max;
  r.min_tangent_time = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    const double s = s_min + (s_max - s_min) * k / (n_samples - 1.0);
    const SpacetimeVector v = gamma.tangent(s);
    double sp = 0.0;
    for (int i = 1; i <= gamma.spatial_dim(); ++i) sp += v[i] * v[i];
    sp = std::sqrt(sp);
    r.min_tangent_time = std::min(r.min_tangent_time, v[0]);
    if (v[0] > 0.0) r.sampled_max_speed = std::max(r.sampled_max_speed, sp / v[0]);
  }
  r.pass = r.min_tangent_time > 0.0 && r.declared_beta_max < 1.0 &&
           r.sampled_max_speed <= r.declared_beta_max + 1e-12;
  r.note =
      "sufficient condition only: a uniform speed bound |gamma_dot_vec|/gamma_dot^0 <= "
      "beta_max < 1 makes tau_w(s) = gamma^0(s) + w.gamma_vec(s) surjective for every "
      "direction w; it does not characterize the class of worldlines meeting every "
      "maximal isotropic hyperplane";
  return r;
}

double invert_phase(const Worldline& gamma, const UnitDirection& w, double tau, double root_tolerance) {
  if (!(root_tolerance > 0.0)) throw std::invalid_argument("invert_phase: root_tolerance must be > 0");
  switch (gamma.kind()) {
    case Worldline::Kind::TimeAxis:
      return tau;
    case Worldline::Kind::StraightLine: {
      double slope = 1.0;
      const SpacetimeVector& b = gamma.base();
      double offset = b[0];
      for (int k = 1; k <= gamma.spatial_dim(); ++k) {
        slope += w[k - 1] * gamma.beta()[k - 1];
        offset += w[k - 1] * b[k];
      }
      return (tau - offset) / slope;
    }
    case Worldline::Kind::Analytic:
      break;
  }

  // Monotone bracket expansion by doubling from s = 0, then bisection.
  double lo = 0.0, hi = 0.0;
  double f0 = phase(gamma, w, 0.0) - tau;
  if (f0 == 0.0) return 0.0;
  double step = 1.0;
  const int kMaxExpand = 80;
  bool bracketed = false;
  if (f0 > 0.0) {
    hi = 0.0;
    for (int i = 0; i < kMaxExpand; ++i) {
      lo = hi - step;
      if (phase(gamma, w, lo) - tau <= 0.0) { bracketed = true; break; }
      hi = lo;
      step *= 2.0;
    }
  } else {
    lo = 0.0;
    for (int i = 0; i < kMaxExpand; ++i) {
      hi = lo + step;
      if (phase(gamma, w, hi) - tau >= 0.0) { bracketed = true; break; }
      lo = hi;
      step *= 2.0;
    }
  }
  if (!bracketed) {
    std::ostringstream os;
    os << "invert_phase: no bracket found for tau = " << tau << " at direction (";
    for (int k = 0; k < w.spatial_dim(); ++k) os << (k ? "," : "") << w[k];
    os << "); the worldline may not reach this isotropic hyperplane";
    throw std::runtime_error(os.str());
  }
  while (hi - lo > root_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // interval at rounding resolution
    if (phase(gamma, w, mid) - tau <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

InitialData InitialData::from_expression(const Expression& e) {
  InitialData d;
  d.g = [e](double s, const UnitDirection& w) { return e(s, w); };
  return d;
}

InitialData InitialData::from_expression(const Expression& e, std::array<double, 2> support) {
  InitialData d = from_expression(e);
  d.support_bound = support;
  return d;
}

KaironField::KaironField(Worldline worldline, InitialData data, double root_tolerance,
                         std::array<double, 2> certify_range)
    : worldline_(std::move(worldline)), data_(std::move(data)), root_tolerance_(root_tolerance) {
  if (!data_.g) throw std::invalid_argument("KaironField: missing initial data");
  if (data_.support_bound && !(data_.support_bound->at(0) < data_.support_bound->at(1)))
    throw std::invalid_argument("KaironField: empty support bound");
  const ClassTReport rep = class_t_check(worldline_, certify_range[0], certify_range[1], 513);
  if (!rep.pass) {
    std::ostringstream os;
    os << "KaironField: worldline failed class-T certification (declared beta_max = "
       << rep.declared_beta_max << ", sampled max speed = " << rep.sampled_max_speed
       << "); a uniform speed bound < 1 is required";
    throw std::invalid_argument(os.str());
  }
}

double KaironField::operator()(const SpacetimeVector& x, const UnitDirection& w) const {
  double tau = x[0];
  for (int k = 1; k <= spatial_dim(); ++k) tau += w[k - 1] * x[k];
  const double s = invert_phase(worldline_, w, tau, root_tolerance_);
  return on_worldline(s, w);
}

double KaironField::on_worldline(double s, const UnitDirection& w) const {
  if (data_.support_bound) {
    const auto& b = *data_.support_bound;
    if (s < b[0] || s > b[1]) return 0.0;
  }
  return data_.g(s, w);
}

double evaluate_field(const KaironField& field, const SpacetimeVector& x, const UnitDirection& w) {
  return field(x, w);
}

double field_equation_residual(const KaironField& field, const SpacetimeVector& x,
                               const UnitDirection& w, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("field_equation_residual: step must be > 0");
  const int m = field.spatial_dim();
  std::array<double, kMaxSpatialDim + 1> grad{};
  for (int mu = 0; mu <= m; ++mu) {
    SpacetimeVector xp = x, xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    grad[mu] = (field(xp, w) - field(xm, w)) / (2.0 * h);
  }
  std::array<double, kMaxSpatialDim + 1> omega{};
  omega[0] = 1.0;
  for (int i = 1; i <= m; ++i) omega[i] = w[i - 1];
  double residual = 0.0;
  for (int mu = 0; mu <= m; ++mu)
    for (int nu = mu + 1; nu <= m; ++nu)
      residual = std::max(residual, std::abs(omega[mu] * grad[nu] - omega[nu] * grad[mu]));
  return residual;
}

std::optional<std::array<double, 2>> support_interval_on(const KaironField& field,
                                                         const Worldline& gamma,
                                                         const UnitDirection& w) {
  if (!field.data().support_bound) return std::nullopt;
  const auto& b = *field.data().support_bound;
  const double tau_lo = phase(field.worldline(), w, b[0]);
  const double tau_hi = phase(field.worldline(), w, b[1]);
  const double s_lo = invert_phase(gamma, w, tau_lo, field.root_tolerance());
  const double s_hi = invert_phase(gamma, w, tau_hi, field.root_tolerance());
  return std::array<double, 2>{s_lo, s_hi};
}

InitialData restrict_to_worldline(const KaironField& field, const Worldline& gamma2) {
  const int m = field.spatial_dim();
  checked_spatial_dim(gamma2.spatial_dim());
  if (gamma2.spatial_dim() != m) throw std::invalid_argument("restrict_to_worldline: dimension mismatch");

  InitialData out;
  // Capture the pieces by value; fields are immutable so this is safe to share.
  const Worldline source = field.worldline();
  const InitialData data = field.data();
  const double tol = field.root_tolerance();
  out.g = [source, data, gamma2, tol, m](double s, const UnitDirection& w) {
    double tau = 0.0;
    {
      const SpacetimeVector x = gamma2.position(s);
      tau = x[0];
      for (int k = 1; k <= m; ++k) tau += w[k - 1] * x[k];
    }
    const double s1 = invert_phase(source, w, tau, tol);
    if (data.support_bound) {
      const auto& b = *data.support_bound;
      if (s1 < b[0] || s1 > b[1]) return 0.0;
    }
    return data.g(s1, w);
  };

  if (field.data().support_bound) {
    // Map the support slab onto gamma2, scanning directions densely; padded a
    // little because the scan is a sampled bound.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const int n_dir = m == 1 ? 2 : 512;
    rng::Stream stream(0x5eedULL);
    for (int k = 0; k < n_dir; ++k) {
      UnitDirection w = m == 1 ? (k == 0 ? UnitDirection::axis(1, 1) : UnitDirection::axis(1, 1).antipode())
                               : random_direction(m, stream);
      const auto iv = support_interval_on(field, gamma2, w);
      lo = std::min(lo, iv->at(0));
      hi = std::max(hi, iv->at(1));
    }
    const double pad = 0.05 * (hi - lo) + 1e-9;
    out.support_bound = std::array<double, 2>{lo - pad, hi + pad};
  }
  return out;
}

}  // namespace kairon
