#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kairon/field.hpp"
#include "kairon/poincare.hpp"

using namespace kairon;

namespace {

UnitDirection dir3(double a, double b, double c) {
  const std::array<double, 3> v{a, b, c};
  return UnitDirection(3, v);
}

AxisState bump_state(int m) {
  return AxisState(m, [](double t, const UnitDirection& w) { return bump(t) * (1.0 + 0.5 * w[0]); });
}

std::vector<std::pair<double, UnitDirection>> sample_points(int m, int count, std::uint64_t seed) {
  rng::Stream s(seed);
  std::vector<std::pair<double, UnitDirection>> pts;
  for (int k = 0; k < count; ++k) pts.emplace_back(s.uniform(-2, 2), random_direction(m, s));
  return pts;
}

}  // namespace

TEST_CASE("lorentz action on axis data") {
  const int m = 3;
  const AxisState g = bump_state(m);

  SUBCASE("identity acts trivially") {
    const AxisState moved = apply_lorentz(g, LorentzMatrix::identity(m));
    for (const auto& [t, w] : sample_points(m, 30, 1))
      CHECK(moved(t, w) == doctest::Approx(g(t, w)).epsilon(1e-14));
  }

  SUBCASE("boost at its pole: the scale factor is computed, not assumed") {
    const UnitDirection n = dir3(0, 0, 1);
    const double chi = 0.8;
    const LorentzMatrix L = boost(n, chi);
    // oracle: (w L)_0 through act_covector
    const double wl0 = act_covector(lift(n).covector(), L)[0];
    CHECK(wl0 == doctest::Approx(std::exp(chi)).epsilon(1e-14));
    const AxisState moved = apply_lorentz(g, L);
    const double t = 0.37;
    const double expected = std::pow(wl0, -1.5) * g(t / wl0, n);
    CHECK(moved(t, n) == doctest::Approx(expected).epsilon(1e-13));
  }

  SUBCASE("rotations have unit prefactor") {
    const LorentzMatrix r = rotation(m, 1, 3, 1.1);
    const AxisState moved = apply_lorentz(g, r);
    const LorentzMatrix rinv = inverse(r);
    for (const auto& [t, w] : sample_points(m, 30, 2)) {
      CHECK(std::abs(act_covector(lift(w).covector(), r)[0] - 1.0) <= 1e-14);
      CHECK(moved(t, w) == doctest::Approx(g(t, rho(rinv, w))).epsilon(1e-13));
    }
  }

  SUBCASE("linear in the state") {
    const LorentzMatrix L = random_lorentz(m, 77, 1.0);
    const AxisState g2(m, [](double t, const UnitDirection& w) { return std::sin(t) * w[1]; });
    const AxisState sum(m, [&](double t, const UnitDirection& w) { return 2.0 * bump_state(3)(t, w) + g2(t, w); });
    const AxisState moved_sum = apply_lorentz(sum, L);
    const AxisState a = apply_lorentz(bump_state(3), L);
    const AxisState b = apply_lorentz(g2, L);
    for (const auto& [t, w] : sample_points(m, 20, 3))
      CHECK(moved_sum(t, w) == doctest::Approx(2.0 * a(t, w) + b(t, w)).epsilon(1e-12));
  }
}

TEST_CASE("translations") {
  const int m = 2;
  const AxisState g = bump_state(m);

  SUBCASE("zero shift is the identity") {
    const AxisState moved = apply_translation(g, SpacetimeVector(m));
    for (const auto& [t, w] : sample_points(m, 20, 4)) CHECK(moved(t, w) == g(t, w));
  }
  SUBCASE("pure time shift") {
    SpacetimeVector a(m);
    a[0] = 0.75;
    const AxisState moved = apply_translation(g, a);
    for (const auto& [t, w] : sample_points(m, 20, 5))
      CHECK(moved(t, w) == g(t - 0.75, w));
  }
  SUBCASE("additivity is exact") {
    rng::Stream s(6);
    for (int k = 0; k < 20; ++k) {
      SpacetimeVector a(m), b(m), ab(m);
      for (int c = 0; c <= m; ++c) {
        a[c] = s.uniform(-1, 1);
        b[c] = s.uniform(-1, 1);
        ab[c] = a[c] + b[c];
      }
      const AxisState nested = apply_translation(apply_translation(g, b), a);
      const AxisState direct = apply_translation(g, ab);
      for (const auto& [t, w] : sample_points(m, 10, 100 + k))
        CHECK(std::abs(nested(t, w) - direct(t, w)) <= 1e-14);
    }
  }
}

TEST_CASE("unitarity") {
  SUBCASE("identity transform") {
    const int m = 2;
    const AxisState g = bump_state(m);
    const double defect = unitarity_defect(g, LorentzMatrix::identity(m),
                                           build_quadrature(m, 256), AxisQuadrature{-4, 4, 2000});
    CHECK(defect <= 1e-14);
  }
  SUBCASE("boosts across m") {
    rng::Stream s(7);
    for (int m = 1; m <= 3; ++m) {
      const AxisState g = bump_state(m);
      const SphereQuadrature quad = build_quadrature(m, m == 2 ? 256 : 24);
      double worst = 0.0;
      for (int k = 0; k < 3; ++k) {
        const UnitDirection n = random_direction(m, s);
        const double chi = s.uniform(-1, 1);
        worst = std::max(worst,
                         unitarity_defect(g, boost(n, chi), quad, AxisQuadrature{-4, 4, 2000}));
      }
      CHECK(worst <= (m == 3 ? 1e-6 : 1e-8));
    }
  }
  SUBCASE("translations") {
    rng::Stream s(8);
    for (int m = 1; m <= 3; ++m) {
      const AxisState g = bump_state(m);
      const SphereQuadrature quad = build_quadrature(m, m == 2 ? 256 : 32);
      SpacetimeVector a(m);
      for (int c = 0; c <= m; ++c) a[c] = s.uniform(-0.5, 0.5);
      CHECK(unitarity_defect(g, a, quad, AxisQuadrature{-4, 4, 3000}) <= 1e-10);
    }
  }
  SUBCASE("states that leak out of the window are reported") {
    const int m = 2;
    const AxisState constant(m, [](double, const UnitDirection&) { return 1.0; });
    CHECK_THROWS_AS(unitarity_defect(constant, LorentzMatrix::identity(m), build_quadrature(m, 32),
                                     AxisQuadrature{-4, 4, 400}),
                    std::domain_error);
  }
}

TEST_CASE("group law") {
  const int m = 3;
  const AxisState g = bump_state(m);
  const auto pts = sample_points(m, 100, 9);

  SUBCASE("inverse pairs act trivially") {
    rng::Stream s(10);
    for (int k = 0; k < 20; ++k) {
      const LorentzMatrix L = random_lorentz(m, s.next_u64(), 1.5);
      const AxisState round = apply_lorentz(apply_lorentz(g, L), inverse(L));
      for (const auto& [t, w] : pts)
        CHECK(std::abs(round(t, w) - g(t, w)) <= 1e-12 * (1.0 + std::abs(g(t, w))));
    }
  }
  SUBCASE("random pairs") {
    rng::Stream s(11);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const LorentzMatrix l1 = random_lorentz(m, s.next_u64(), 1.5);
      const LorentzMatrix l2 = random_lorentz(m, s.next_u64(), 1.5);
      worst = std::max(worst, homomorphism_defect(g, l1, l2, pts));
    }
    CHECK(worst <= 1e-10);
  }
  SUBCASE("rotation pairs stay on the unit-prefactor branch") {
    rng::Stream s(12);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const LorentzMatrix l1 = rotation(m, 1, 2, s.uniform(-3, 3));
      const LorentzMatrix l2 = rotation(m, 2, 3, s.uniform(-3, 3));
      worst = std::max(worst, homomorphism_defect(g, l1, l2, pts));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("a chain followed by its reversed inverse chain is the identity") {
  const int m = 3;
  const AxisState g = bump_state(m);
  const UnitDirection n = dir3(0.6, 0.0, 0.8);
  const LorentzMatrix b = boost(n, 1.0);
  const LorentzMatrix r = rotation(m, 1, 2, 0.7);
  SpacetimeVector a(m);
  a[0] = 0.2;
  a[1] = -0.3;
  SpacetimeVector neg_a(m);
  neg_a[0] = -0.2;
  neg_a[1] = 0.3;

  AxisState state = apply_translation(apply_lorentz(apply_lorentz(g, b), r), a);
  state = apply_lorentz(apply_lorentz(apply_translation(state, neg_a), inverse(r)), inverse(b));

  double worst = 0.0;
  for (const auto& [t, w] : sample_points(m, 100, 55))
    worst = std::max(worst, std::abs(state(t, w) - g(t, w)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("consistency with propagation") {
  // Transform the axis data, then propagate; compare against transforming the
  // propagated solution directly.
  const int m = 2;
  const AxisState g = bump_state(m);
  InitialData data;
  data.g = [g](double t, const UnitDirection& w) { return g(t, w); };
  const KaironField base(Worldline::time_axis(m), data);

  rng::Stream s(13);
  for (int k = 0; k < 25; ++k) {
    const LorentzMatrix L = random_lorentz(m, s.next_u64(), 1.0);
    const LorentzMatrix Linv = inverse(L);
    const AxisState moved = apply_lorentz(g, L);
    InitialData moved_data;
    moved_data.g = [moved](double t, const UnitDirection& w) { return moved(t, w); };
    const KaironField transformed(Worldline::time_axis(m), moved_data);

    for (int p = 0; p < 8; ++p) {
      SpacetimeVector x(m);
      for (int c = 0; c <= m; ++c) x[c] = s.uniform(-2, 2);
      const UnitDirection w = random_direction(m, s);
      const double wl0 = act_covector(lift(w).covector(), L)[0];
      const double expected = std::pow(wl0, -0.5 * m) * base(act_vector(Linv, x), rho(Linv, w));
      CHECK(std::abs(transformed(x, w) - expected) <= 1e-12);
    }
  }
}
