#include "kairon/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kairon {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw std::invalid_argument(what);
}

double eta(int a, int b) {
  if (a != b) return 0.0;
  return a == 0 ? 1.0 : -1.0;
}

// Determinant by cofactor expansion in extended precision; n <= 4 here, and
// the extra bits keep the residual far below kGroupTol even at rapidity ~4
// where entries reach cosh(4) and the expansion cancels heavily.
long double det_small(std::span<const long double> a, int n) {
  if (n == 1) return a[0];
  if (n == 2) return a[0] * a[3] - a[1] * a[2];
  long double det = 0.0L;
  std::array<long double, 9> minor{};
  for (int col = 0; col < n; ++col) {
    int k = 0;
    for (int r = 1; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (c != col) minor[k++] = a[r * n + c];
    const long double cof =
        det_small({minor.data(), static_cast<std::size_t>((n - 1) * (n - 1))}, n - 1);
    det += ((col % 2 == 0) ? 1.0L : -1.0L) * a[col] * cof;
  }
  return det;
}

}  // namespace

int checked_spatial_dim(int m) {
  require(m >= 1 && m <= kMaxSpatialDim, "spatial dimension m must be 1, 2 or 3");
  return m;
}

SpacetimeVector::SpacetimeVector(int m) : m_(checked_spatial_dim(m)) {}

SpacetimeVector::SpacetimeVector(int m, std::span<const double> components) : m_(checked_spatial_dim(m)) {
  require(components.size() == static_cast<std::size_t>(m + 1), "SpacetimeVector needs m+1 components");
  require_finite(components, "SpacetimeVector components must be finite");
  for (int a = 0; a <= m; ++a) c_[a] = components[a];
}

double SpacetimeVector::spatial_norm() const {
  double s = 0.0;
  for (int i = 1; i <= m_; ++i) s += c_[i] * c_[i];
  return std::sqrt(s);
}

SpacetimeCovector::SpacetimeCovector(int m) : m_(checked_spatial_dim(m)) {}

SpacetimeCovector::SpacetimeCovector(int m, std::span<const double> components) : m_(checked_spatial_dim(m)) {
  require(components.size() == static_cast<std::size_t>(m + 1), "SpacetimeCovector needs m+1 components");
  require_finite(components, "SpacetimeCovector components must be finite");
  for (int a = 0; a <= m; ++a) c_[a] = components[a];
}

double SpacetimeCovector::spatial_norm() const {
  double s = 0.0;
  for (int i = 1; i <= m_; ++i) s += c_[i] * c_[i];
  return std::sqrt(s);
}

UnitDirection::UnitDirection(int m, std::span<const double> components) : m_(checked_spatial_dim(m)) {
  require(components.size() == static_cast<std::size_t>(m), "UnitDirection needs m components");
  require_finite(components, "UnitDirection components must be finite");
  double n2 = 0.0;
  for (int k = 0; k < m; ++k) {
    w_[k] = components[k];
    n2 += w_[k] * w_[k];
  }
  require(std::abs(n2 - 1.0) <= 1e-12, "UnitDirection must have unit norm (within 1e-12)");
}

UnitDirection UnitDirection::axis(int m, int k) {
  checked_spatial_dim(m);
  require(k >= 1 && k <= m, "axis index out of range");
  UnitDirection w;
  w.m_ = m;
  w.w_[k - 1] = 1.0;
  return w;
}

UnitDirection UnitDirection::antipode() const {
  UnitDirection w;
  w.m_ = m_;
  for (int k = 0; k < m_; ++k) w.w_[k] = -w_[k];
  return w;
}

double UnitDirection::dot(std::span<const double> x) const {
  double s = 0.0;
  for (int k = 0; k < m_; ++k) s += w_[k] * x[k];
  return s;
}

UnitDirection unit_direction_unchecked(int m, std::span<const double> components) {
  UnitDirection w;
  w.m_ = m;
  for (int k = 0; k < m; ++k) w.w_[k] = components[k];
  return w;
}

LorentzValidation validate_lorentz(int m, std::span<const double> row_major) {
  checked_spatial_dim(m);
  const int n = m + 1;
  require(row_major.size() == static_cast<std::size_t>(n * n), "matrix size must be (m+1)^2");

  std::array<long double, 16> wide{};
  for (int k = 0; k < n * n; ++k) wide[k] = row_major[k];

  long double metric_residual = 0.0L;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      // (L^T eta L)_{ab} = sum_c L^c_a eta_cc L^c_b
      long double s = 0.0L;
      for (int c = 0; c < n; ++c) s += wide[c * n + a] * eta(c, c) * wide[c * n + b];
      const long double r = s - eta(a, b);
      metric_residual = std::max(metric_residual, r < 0 ? -r : r);
    }
  }
  const long double det = det_small({wide.data(), static_cast<std::size_t>(n * n)}, n);
  return LorentzValidation{static_cast<double>(metric_residual),
                           static_cast<double>(det < 1.0L ? 1.0L - det : det - 1.0L),
                           row_major[0] - 1.0};
}

LorentzMatrix LorentzMatrix::identity(int m) {
  LorentzMatrix L(checked_spatial_dim(m));
  for (int a = 0; a <= m; ++a) L.at(a, a) = 1.0;
  return L;
}

LorentzMatrix LorentzMatrix::from_entries(int m, std::span<const double> row_major) {
  const LorentzValidation v = validate_lorentz(m, row_major);
  if (!v.pass(kGroupTol)) {
    std::ostringstream os;
    os << "matrix is not in SO0(1," << m << "): metric residual " << v.metric_residual
       << ", det residual " << v.det_residual << ", L^0_0 - 1 = " << v.orthochronous_margin;
    throw std::invalid_argument(os.str());
  }
  LorentzMatrix L(m);
  const int n = m + 1;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) L.at(a, b) = row_major[a * n + b];
  return L;
}

double quadratic_form(const SpacetimeCovector& p) {
  double q = p[0] * p[0];
  for (int i = 1; i <= p.spatial_dim(); ++i) q -= p[i] * p[i];
  return q;
}

double pairing(const SpacetimeCovector& p, const SpacetimeVector& v) {
  require(p.spatial_dim() == v.spatial_dim(), "pairing: dimension mismatch");
  double s = 0.0;
  for (int a = 0; a <= p.spatial_dim(); ++a) s += p[a] * v[a];
  return s;
}

LorentzMatrix boost(const UnitDirection& direction, double rapidity) {
  const int m = direction.spatial_dim();
  double n2 = 0.0;
  for (int k = 0; k < m; ++k) n2 += direction[k] * direction[k];
  require(std::abs(n2 - 1.0) <= 1e-12, "boost: direction must be a unit vector");
  require(std::isfinite(rapidity), "boost: rapidity must be finite");

  const double ch = std::cosh(rapidity);
  const double sh = std::sinh(rapidity);
  LorentzMatrix L(m);
  L.at(0, 0) = ch;
  for (int i = 1; i <= m; ++i) {
    L.at(0, i) = sh * direction[i - 1];
    L.at(i, 0) = sh * direction[i - 1];
    for (int j = 1; j <= m; ++j)
      L.at(i, j) = (i == j ? 1.0 : 0.0) + (ch - 1.0) * direction[i - 1] * direction[j - 1];
  }
  return L;
}

LorentzMatrix rotation(int m, int axis_i, int axis_j, double angle) {
  checked_spatial_dim(m);
  require(axis_i >= 1 && axis_j <= m && axis_i < axis_j, "rotation: need 1 <= i < j <= m");
  require(std::isfinite(angle), "rotation: angle must be finite");

  LorentzMatrix L(m);
  for (int a = 0; a <= m; ++a) L.at(a, a) = 1.0;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  L.at(axis_i, axis_i) = c;
  L.at(axis_i, axis_j) = -s;
  L.at(axis_j, axis_i) = s;
  L.at(axis_j, axis_j) = c;
  return L;
}

LorentzMatrix compose(const LorentzMatrix& first, const LorentzMatrix& second) {
  require(first.spatial_dim() == second.spatial_dim(), "compose: dimension mismatch");
  const int m = first.spatial_dim();
  const int n = m + 1;
  LorentzMatrix L(m);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += first(a, c) * second(c, b);
      L.at(a, b) = s;
    }
  const LorentzValidation v = validate_lorentz(m, L.row_major());
  require(v.pass(kGroupTol), "compose: product drifted out of the group");
  return L;
}

LorentzMatrix inverse(const LorentzMatrix& L) {
  const int m = L.spatial_dim();
  LorentzMatrix R(m);
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= m; ++b) {
      // (eta L^T eta)^a_b = eta_aa L^b_a eta_bb; sign flips are exact, so
      // inverse(inverse(L)) == L bit for bit.
      const double sign = eta(a, a) * eta(b, b);
      R.at(a, b) = sign == 1.0 ? L(b, a) : -L(b, a);
    }
  return R;
}

SpacetimeCovector act_covector(const SpacetimeCovector& p, const LorentzMatrix& L) {
  require(p.spatial_dim() == L.spatial_dim(), "act_covector: dimension mismatch");
  const int m = p.spatial_dim();
  SpacetimeCovector r(m);
  for (int a = 0; a <= m; ++a) {
    double s = 0.0;
    for (int b = 0; b <= m; ++b) s += p[b] * L(b, a);
    r[a] = s;
  }
  return r;
}

SpacetimeVector act_vector(const LorentzMatrix& L, const SpacetimeVector& v) {
  require(v.spatial_dim() == L.spatial_dim(), "act_vector: dimension mismatch");
  const int m = v.spatial_dim();
  SpacetimeVector r(m);
  for (int a = 0; a <= m; ++a) {
    double s = 0.0;
    for (int b = 0; b <= m; ++b) s += L(a, b) * v[b];
    r[a] = s;
  }
  return r;
}

UnitDirection random_direction(int m, rng::Stream& stream) {
  checked_spatial_dim(m);
  std::array<double, 3> w{};
  switch (m) {
    case 1:
      w[0] = stream.u01() < 0.5 ? -1.0 : 1.0;
      break;
    case 2: {
      const double th = stream.uniform(0.0, 2.0 * M_PI);
      w[0] = std::cos(th);
      w[1] = std::sin(th);
      break;
    }
    default: {
      const double z = stream.uniform(-1.0, 1.0);
      const double ph = stream.uniform(0.0, 2.0 * M_PI);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      w[0] = r * std::cos(ph);
      w[1] = r * std::sin(ph);
      w[2] = z;
      break;
    }
  }
  // Renormalize so the result is unit to machine precision.
  double n = 0.0;
  for (int k = 0; k < m; ++k) n += w[k] * w[k];
  n = std::sqrt(n);
  for (int k = 0; k < m; ++k) w[k] /= n;
  return UnitDirection(m, {w.data(), static_cast<std::size_t>(m)});
}

LorentzMatrix random_lorentz(int m, std::uint64_t seed, double rapidity_bound) {
  checked_spatial_dim(m);
  require(rapidity_bound >= 0.0, "random_lorentz: rapidity_bound must be >= 0");
  rng::Stream s(seed);

  const UnitDirection n1 = random_direction(m, s);
  const double chi1 = s.uniform(-rapidity_bound, rapidity_bound);
  const UnitDirection n2 = random_direction(m, s);
  const double chi2 = s.uniform(-rapidity_bound, rapidity_bound);

  LorentzMatrix L = boost(n1, chi1);
  if (m >= 2) {
    int i = 1, j = 2;
    if (m == 3) {
      const int pick = static_cast<int>(s.below(3));
      if (pick == 1) { i = 1; j = 3; }
      if (pick == 2) { i = 2; j = 3; }
    }
    const double angle = s.uniform(-rapidity_bound, rapidity_bound);
    L = compose(L, rotation(m, i, j, angle));
  }
  return compose(L, boost(n2, chi2));
}

}  // namespace kairon
