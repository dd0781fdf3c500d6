#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "kairon/rng.hpp"

namespace kairon {

// Conventions used throughout this library:
//   - signature (+,-,...,-): eta = diag(1, -1, ..., -1)
//   - spacetime indices alpha, beta run 0..m with index 0 the time component
//   - matrix entry(row, col) stores L^row_col (upper index = row)
//   - covectors act as row vectors from the left: (p L)_a = p_b L^b_a
//   - spatial components of a UnitDirection are 0-indexed: w[k] = omega_{k+1}

inline constexpr int kMaxSpatialDim = 3;

// Tolerance for membership in the restricted Lorentz group.
inline constexpr double kGroupTol = 1e-10;

// Throws std::invalid_argument unless 1 <= m <= 3.
int checked_spatial_dim(int m);

class SpacetimeVector {
public:
  explicit SpacetimeVector(int m);
  SpacetimeVector(int m, std::span<const double> components);

  static SpacetimeVector zero(int m) { return SpacetimeVector(m); }

  int spatial_dim() const { return m_; }
  int size() const { return m_ + 1; }
  double operator[](int alpha) const { return c_[alpha]; }
  double& operator[](int alpha) { return c_[alpha]; }
  double time() const { return c_[0]; }
  // Euclidean norm of the spatial part.
  double spatial_norm() const;

private:
  int m_;
  std::array<double, kMaxSpatialDim + 1> c_{};
};

class SpacetimeCovector {
public:
  explicit SpacetimeCovector(int m);
  SpacetimeCovector(int m, std::span<const double> components);

  static SpacetimeCovector zero(int m) { return SpacetimeCovector(m); }

  int spatial_dim() const { return m_; }
  int size() const { return m_ + 1; }
  double operator[](int alpha) const { return c_[alpha]; }
  double& operator[](int alpha) { return c_[alpha]; }
  double time() const { return c_[0]; }
  double spatial_norm() const;

private:
  int m_;
  std::array<double, kMaxSpatialDim + 1> c_{};
};

// Point on the unit sphere S^{m-1}.  Constructor enforces unit norm to 1e-12.
class UnitDirection {
public:
  UnitDirection(int m, std::span<const double> components);

  // +e_k for the 1-based spatial axis k (axis(m, 1) is the first spatial axis).
  static UnitDirection axis(int m, int k);

  int spatial_dim() const { return m_; }
  double operator[](int k) const { return w_[k]; }
  UnitDirection antipode() const;

  // omega . x for a spatial m-vector x
  double dot(std::span<const double> x) const;

private:
  UnitDirection() = default;
  int m_ = 0;
  std::array<double, kMaxSpatialDim> w_{};
  friend UnitDirection unit_direction_unchecked(int, std::span<const double>);
};

// Internal: trusted construction from components already unit to rounding.
UnitDirection unit_direction_unchecked(int m, std::span<const double> components);

struct LorentzValidation {
  double metric_residual;        // max |L^T eta L - eta|
  double det_residual;           // |det L - 1|
  double orthochronous_margin;   // L^0_0 - 1
  bool pass(double tol) const {
    return metric_residual <= tol && det_residual <= tol && orthochronous_margin >= -tol;
  }
};

// Checks an arbitrary (m+1)x(m+1) row-major matrix against the defining
// relations of the restricted group SO0(1,m).
LorentzValidation validate_lorentz(int m, std::span<const double> row_major);

// Element of SO0(1,m).  Every public construction path validates at kGroupTol.
class LorentzMatrix {
public:
  static LorentzMatrix identity(int m);
  // Throws std::invalid_argument if the entries fail validate_lorentz.
  static LorentzMatrix from_entries(int m, std::span<const double> row_major);

  int spatial_dim() const { return m_; }
  double operator()(int row, int col) const { return e_[row * (m_ + 1) + col]; }
  std::span<const double> row_major() const { return {e_.data(), static_cast<std::size_t>((m_ + 1) * (m_ + 1))}; }

private:
  explicit LorentzMatrix(int m) : m_(m) {}
  double& at(int row, int col) { return e_[row * (m_ + 1) + col]; }

  int m_;
  std::array<double, (kMaxSpatialDim + 1) * (kMaxSpatialDim + 1)> e_{};

  friend LorentzMatrix boost(const UnitDirection&, double);
  friend LorentzMatrix rotation(int, int, int, double);
  friend LorentzMatrix compose(const LorentzMatrix&, const LorentzMatrix&);
  friend LorentzMatrix inverse(const LorentzMatrix&);
};

// q(p) = p_0^2 - p_1^2 - ... - p_m^2
double quadratic_form(const SpacetimeCovector& p);

// <p, v> = p_a v^a (covector applied to vector; no metric factors)
double pairing(const SpacetimeCovector& p, const SpacetimeVector& v);

// Pure boost along a unit spatial direction n with rapidity chi:
//   L^0_0 = cosh chi,  L^0_i = L^i_0 = sinh chi * n_i,
//   L^i_j = delta_ij + (cosh chi - 1) n_i n_j
LorentzMatrix boost(const UnitDirection& direction, double rapidity);

// Spatial rotation in the (i, j) coordinate plane, 1 <= i < j <= m.
// Acting on covectors from the right, angle +pi/2 sends e^i to -e^j:
// act_covector((..,1_i,..,0_j,..), rotation(i,j,pi/2)) has -1 in slot j.
LorentzMatrix rotation(int m, int axis_i, int axis_j, double angle);

LorentzMatrix compose(const LorentzMatrix& first, const LorentzMatrix& second);

// Exact pseudo-orthogonal inverse eta L^T eta (no linear solve).
LorentzMatrix inverse(const LorentzMatrix& L);

// (p L)_a = p_b L^b_a
SpacetimeCovector act_covector(const SpacetimeCovector& p, const LorentzMatrix& L);

// (L v)^a = L^a_b v^b
SpacetimeVector act_vector(const LorentzMatrix& L, const SpacetimeVector& v);

// Deterministic pseudo-random group element: boost * rotation * boost with
// rapidities and rotation angle uniform in [-bound, bound] (for m = 1 the
// rotation factor is the identity).  Same (m, seed, bound) gives the same
// matrix on every platform.
LorentzMatrix random_lorentz(int m, std::uint64_t seed, double rapidity_bound);

// Uniform point on S^{m-1}, drawn from the given stream.
UnitDirection random_direction(int m, rng::Stream& stream);

}  // namespace kairon
