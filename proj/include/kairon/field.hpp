#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "kairon/expr.hpp"
#include "kairon/geometry.hpp"

namespace kairon {

// Future-directed time-like path gamma(s), parametrized by a monotone
// coordinate-time-like parameter (gamma_dot^0 > 0); no arc-length
// normalization is assumed anywhere.
class Worldline {
public:
  enum class Kind { TimeAxis, StraightLine, Analytic };

  static Worldline time_axis(int m);
  // gamma(s) = base + s * (1, beta); throws if |beta| >= 1.
  static Worldline straight_line(std::span<const double> beta, const SpacetimeVector& base);
  static Worldline straight_line(int m, std::span<const double> beta);
  // Caller supplies position/tangent evaluators and an asymptotic speed bound
  // beta_max < 1 that is certified by sampling in class_t_check.
  static Worldline analytic(int m, std::function<SpacetimeVector(double)> position,
                            std::function<SpacetimeVector(double)> tangent, double beta_max);

  SpacetimeVector position(double s) const;
  SpacetimeVector tangent(double s) const;

  Kind kind() const { return kind_; }
  int spatial_dim() const { return m_; }
  double beta_max() const { return beta_max_; }
  // straight-line data (Kind::StraightLine only)
  std::span<const double> beta() const { return {beta_.data(), static_cast<std::size_t>(m_)}; }
  const SpacetimeVector& base() const { return base_; }

private:
  Worldline(int m, Kind kind) : m_(m), kind_(kind), base_(m) {}

  int m_;
  Kind kind_;
  std::array<double, kMaxSpatialDim> beta_{};
  SpacetimeVector base_;
  double beta_max_ = 0.0;
  std::function<SpacetimeVector(double)> position_;
  std::function<SpacetimeVector(double)> tangent_;
};

// tau_w(s) = gamma^0(s) + w . gamma_vec(s); strictly increasing in s because
// d tau / ds = gamma_dot^0 (1 + w . beta) >= gamma_dot^0 (1 - beta_max) > 0.
double phase(const Worldline& gamma, const UnitDirection& w, double s);

struct ClassTReport {
  bool pass = false;
  double declared_beta_max = 0.0;
  double sampled_max_speed = 0.0;  // sup |gamma_dot_vec| / gamma_dot^0 over samples
  double min_tangent_time = 0.0;   // inf gamma_dot^0 over samples
  int n_samples = 0;
  double s_min = 0.0, s_max = 0.0;
  // States explicitly that this is a sufficient condition (a uniform speed
  // bound < 1 makes tau_w surjective for every w), not a characterization.
  std::string note;
};

ClassTReport class_t_check(const Worldline& gamma, double s_min, double s_max, int n_samples);

// Solves phase(gamma, w, s) = tau for s.  Closed form for time axes and
// straight lines; monotone bracket expansion plus bisection (to width
// root_tolerance) for analytic worldlines.  Throws if no bracket is found
// within the expansion limit (diagnostic names w and tau).
double invert_phase(const Worldline& gamma, const UnitDirection& w, double tau,
                    double root_tolerance = 1e-12);

struct InitialData {
  std::function<double(double, const UnitDirection&)> g;
  // If present, g(s, .) == 0 exactly for s outside [first, second].
  std::optional<std::array<double, 2>> support_bound;

  static InitialData from_expression(const Expression& e);
  static InitialData from_expression(const Expression& e, std::array<double, 2> support);
};

// A solution of the transport equations, represented by a worldline carrying
// initial data.  Evaluation anywhere follows the constant value along the
// isotropic hyperplane through x with conormal (1, w):
//   Psi(x, w) = g(s*, w)  with  phase(gamma, w, s*) = x^0 + w . x_vec.
class KaironField {
public:
  // Certifies the worldline at construction (uniform speed bound sampled over
  // certify_range) and throws if certification fails.
  KaironField(Worldline worldline, InitialData data, double root_tolerance = 1e-12,
              std::array<double, 2> certify_range = {-64.0, 64.0});

  double operator()(const SpacetimeVector& x, const UnitDirection& w) const;
  // Initial data read back through the field: g(s, w).
  double on_worldline(double s, const UnitDirection& w) const;

  const Worldline& worldline() const { return worldline_; }
  const InitialData& data() const { return data_; }
  int spatial_dim() const { return worldline_.spatial_dim(); }
  double root_tolerance() const { return root_tolerance_; }

private:
  Worldline worldline_;
  InitialData data_;
  double root_tolerance_;
};

double evaluate_field(const KaironField& field, const SpacetimeVector& x, const UnitDirection& w);

// max over index pairs mu < nu of |w_mu D_nu Psi - w_nu D_mu Psi| at (x, w),
// with D the central difference with step h per coordinate and w_mu the null
// covector (1, w).  O(h^2) for smooth data.
double field_equation_residual(const KaironField& field, const SpacetimeVector& x,
                               const UnitDirection& w, double h);

// Reads the field along gamma2: data (s, w) -> Psi(gamma2(s), w), with the
// support bound mapped through the phase slabs (sampled over directions, with
// a small relative pad).
InitialData restrict_to_worldline(const KaironField& field, const Worldline& gamma2);

// s-interval outside which Psi(gamma(s), w) vanishes for the given direction,
// derived from the field's support slab; nullopt when the field has no
// declared support bound.
std::optional<std::array<double, 2>> support_interval_on(const KaironField& field,
                                                         const Worldline& gamma,
                                                         const UnitDirection& w);

}  // namespace kairon
