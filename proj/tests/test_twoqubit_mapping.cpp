#include "oracle.hpp"

#include <qubitgeo/twoqubit_mapping.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qubitgeo;

namespace {

// R(theta1) (x) R(theta2) applied to (sqrt(1/2 + r), 0, 0, sgn(s) sqrt(1/2 - r)),
// built from explicit matrices.
oracle::V4 forward_oracle(double s, double t1, double t2) {
  const double r = oracle::radius_of_s(s);
  const oracle::V4 chi0{std::sqrt(0.5 + r), 0, 0, (s < 0 ? -1 : 1) * std::sqrt(0.5 - r)};
  return oracle::apply(oracle::kron(oracle::rot(t1), oracle::rot(t2)), chi0);
}

const GeometricParams &regular(const ParamsOrKnot &p) {
  return std::get<GeometricParams>(p);
}

} // namespace

TEST(Chi0, SpotValues) {
  EXPECT_LT(oracle::max_diff(chi0_from_s(0.0).amplitudes(), {1, 0, 0, 0}), 1e-15);
  EXPECT_LT(oracle::max_diff(chi0_from_s(0.5).amplitudes(), {oracle::h, 0, 0, oracle::h}),
            1e-15);
  EXPECT_LT(oracle::max_diff(chi0_from_s(-0.5).amplitudes(), {oracle::h, 0, 0, -oracle::h}),
            1e-15);
  EXPECT_THROW(chi0_from_s(0.51), Error);
}

TEST(Chi0, CarriesItsEntanglement) {
  for (double s = -0.5; s <= 0.5; s += 0.01)
    EXPECT_NEAR(entanglement_s(chi0_from_s(s)), s, 1e-12) << s;
}

TEST(StateFromParams, MatchesMatrixOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double s = oracle::uniform(rng, -0.5, 0.5);
    const double t1 = oracle::uniform(rng, -kPi, kPi), t2 = oracle::uniform(rng, -kPi, kPi);
    const auto chi = state_from_params(s, Angle(t1), Angle(t2));
    ASSERT_LT(oracle::ray_distance(chi.amplitudes(), forward_oracle(s, t1, t2)), 1e-14);
    ASSERT_NEAR(entanglement_s(chi), s, 1e-12);
  }
}

TEST(StateFromParams, SeparableEqualsTensorProduct) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    const Angle t1(oracle::uniform(rng, -kPi, kPi)), t2(oracle::uniform(rng, -kPi, kPi));
    const auto chi = state_from_params(0.0, t1, t2);
    const auto want = tensor_product(ket_from_angle(t1), ket_from_angle(t2));
    ASSERT_LT(oracle::max_diff(chi.amplitudes(), want.amplitudes()), 1e-15);
  }
}

TEST(StateFromParams, SpotValues) {
  EXPECT_LT(oracle::max_diff(state_from_params(0.5, Angle(0), Angle(0)).amplitudes(),
                             {oracle::h, 0, 0, oracle::h}),
            1e-15);
  EXPECT_LT(oracle::max_diff(state_from_params(-0.5, Angle(kPi / 2), Angle(kPi / 2)).amplitudes(),
                             {0, oracle::h, oracle::h, 0}),
            1e-15);
  EXPECT_THROW(state_from_params(-0.6, Angle(0), Angle(0)), Error);
}

TEST(StateFromParams, TwoToOneInTheInterior) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double s = oracle::uniform(rng, 0.01, 0.49);
    const Angle t1(oracle::uniform(rng, -kPi, kPi)), t2(oracle::uniform(rng, -kPi, kPi));
    const auto plus = state_from_params(s, t1, t2), minus = state_from_params(-s, t1, t2);
    ASSERT_GT(oracle::ray_distance(plus.amplitudes(), minus.amplitudes()), 1e-6);
    // Same one-qubit statepoints for both.
    for (int q : {1, 2}) {
      ASSERT_NEAR(reduced_density(plus, q).p_top(), reduced_density(minus, q).p_top(), 1e-12);
      ASSERT_NEAR(reduced_density(plus, q).c(), reduced_density(minus, q).c(), 1e-12);
    }
  }
}

TEST(StateFromParams, PartialTracesLandAtTheAngles) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10000; ++i) {
    const double s = oracle::uniform(rng, -0.49, 0.49);
    const double t1 = oracle::uniform(rng, -kPi, kPi), t2 = oracle::uniform(rng, -kPi, kPi);
    const auto chi = state_from_params(s, Angle(t1), Angle(t2));
    const double r = std::sqrt(0.25 - s * s);
    const double angles[] = {t1, t2};
    for (int q : {1, 2}) {
      const auto m = oracle::reduce(oracle::outer(chi.amplitudes()), q);
      ASSERT_NEAR(oracle::radius(m), r, 1e-12);
      // Statepoint (c, p_top - 1/2) = r (sin theta, cos theta).
      ASSERT_NEAR(m[0][1], r * std::sin(angles[q - 1]), 1e-9);
      ASSERT_NEAR(m[0][0] - 0.5, r * std::cos(angles[q - 1]), 1e-9);
    }
  }
}

TEST(ParamsFromState, SpotValues) {
  const auto p = params_from_state(normalize_phase(Amplitudes4{1, 0, 0, 0}));
  ASSERT_FALSE(is_knot(p));
  EXPECT_EQ(regular(p).s, 0.0);
  EXPECT_EQ(regular(p).r, 0.5);
  EXPECT_EQ(regular(p).theta1.value(), 0.0);
  EXPECT_EQ(regular(p).theta2.value(), 0.0);

  const auto k = params_from_state(normalize_phase(Amplitudes4{oracle::h, 0, 0, oracle::h}));
  ASSERT_TRUE(is_knot(k));
  EXPECT_EQ(std::get<KnotDescriptor>(k).surface, Surface::Outer);
  EXPECT_NEAR(std::get<KnotDescriptor>(k).xi.value(), 0.0, 1e-15);
}

TEST(ParamsFromState, BasisStatesSitAtPoles) {
  const double want[4][2] = {{0, 0}, {0, kPi}, {kPi, 0}, {kPi, kPi}};
  for (int i = 0; i < 4; ++i) {
    Amplitudes4 v{};
    v[i] = 1.0;
    const auto p = regular(params_from_state(normalize_phase(v)));
    EXPECT_NEAR(p.theta1.value(), want[i][0], 1e-15) << i;
    EXPECT_NEAR(p.theta2.value(), want[i][1], 1e-15) << i;
  }
}

TEST(ParamsFromState, RoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100000; ++i) {
    const double s = oracle::uniform(rng, -0.499, 0.499);
    const double t1 = oracle::uniform(rng, -kPi, kPi), t2 = oracle::uniform(rng, -kPi, kPi);
    const auto p = params_from_state(state_from_params(s, Angle(t1), Angle(t2)));
    ASSERT_FALSE(is_knot(p));
    ASSERT_NEAR(regular(p).s, s, 1e-9);
    ASSERT_LT(oracle::angle_gap(regular(p).theta1.value(), t1), 1e-9);
    ASSERT_LT(oracle::angle_gap(regular(p).theta2.value(), t2), 1e-9);
  }
}

TEST(ParamsFromState, RoundTripCloseToTheBoundary) {
  std::mt19937_64 rng(6);
  const double s_max = 0.5 - 1e-6;
  for (int i = 0; i < 10000; ++i) {
    const double s = (i % 2 ? 1 : -1) * oracle::uniform(rng, 0.49, s_max);
    const double t1 = oracle::uniform(rng, -kPi, kPi), t2 = oracle::uniform(rng, -kPi, kPi);
    const auto p = params_from_state(state_from_params(s, Angle(t1), Angle(t2)));
    ASSERT_FALSE(is_knot(p));
    ASSERT_NEAR(regular(p).s, s, 1e-9);
    ASSERT_LT(oracle::angle_gap(regular(p).theta1.value(), t1), 1e-9);
    ASSERT_LT(oracle::angle_gap(regular(p).theta2.value(), t2), 1e-9);
  }
}

TEST(ParamsFromState, RightTriangleOnRandomStates) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const auto p = params_from_state(normalize_phase(oracle::random_unit(rng)));
    if (const auto *g = std::get_if<GeometricParams>(&p)) {
      ASSERT_NEAR(g->s * g->s + g->r * g->r, 0.25, 1e-12);
    }
  }
}

TEST(MaximallyEntangled, SpotValues) {
  EXPECT_LT(oracle::max_diff(maximally_entangled(Surface::Outer, Angle(0)).amplitudes(),
                             {oracle::h, 0, 0, oracle::h}),
            1e-15);
  EXPECT_LT(oracle::max_diff(maximally_entangled(Surface::Inner, Angle(0)).amplitudes(),
                             {oracle::h, 0, 0, -oracle::h}),
            1e-15);
  EXPECT_LT(oracle::max_diff(maximally_entangled(Surface::Outer, Angle(kPi / 2)).amplitudes(),
                             {0.5, -0.5, 0.5, 0.5}),
            1e-15);
}

TEST(MaximallyEntangled, ReducedStatesAreMaximallyMixed) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10000; ++i) {
    const Surface surface = i % 2 ? Surface::Outer : Surface::Inner;
    const auto chi = maximally_entangled(surface, Angle(oracle::uniform(rng, -kPi, kPi)));
    ASSERT_NEAR(entanglement_s(chi), 0.5 * sign_of(surface), 1e-12);
    for (int q : {1, 2}) {
      const auto rho = reduced_density(chi, q);
      ASSERT_NEAR(rho.p_top(), 0.5, 1e-12);
      ASSERT_NEAR(rho.c(), 0.0, 1e-12);
    }
  }
}

TEST(MaximallyEntangled, XiRoundTripsThroughTheInverse) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10000; ++i) {
    const Surface surface = i % 2 ? Surface::Outer : Surface::Inner;
    // Include the exact edges of the range.
    const double xi = i < 4 ? (i < 2 ? kPi : 0.0) : oracle::uniform(rng, -kPi, kPi);
    const auto p = params_from_state(maximally_entangled(surface, Angle(xi)));
    ASSERT_TRUE(is_knot(p));
    const auto &k = std::get<KnotDescriptor>(p);
    ASSERT_EQ(k.surface, surface);
    ASSERT_LT(oracle::angle_gap(k.xi.value(), xi), 1e-9);
  }
}

TEST(KnotEquivalent, SpotValues) {
  EXPECT_NEAR(knot_equivalent(Angle(kPi / 2), Angle(kPi / 2), Surface::Outer).xi.value(), 0.0,
              1e-15);
  EXPECT_NEAR(knot_equivalent(Angle(kPi / 2), Angle(kPi / 2), Surface::Inner).xi.value(), kPi,
              1e-15);
  EXPECT_NEAR(knot_equivalent(Angle(3.0), Angle(-3.0), Surface::Outer).xi.value(),
              6.0 - kTwoPi, 1e-15);
}

TEST(KnotEquivalent, MatchesBoundaryStates) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 10000; ++i) {
    const Surface surface = i % 2 ? Surface::Outer : Surface::Inner;
    const Angle t1(oracle::uniform(rng, -kPi, kPi)), t2(oracle::uniform(rng, -kPi, kPi));
    const auto on_surface = state_from_params(0.5 * sign_of(surface), t1, t2);
    const auto knot = maximally_entangled(knot_equivalent(t1, t2, surface));
    ASSERT_LT(oracle::max_diff(on_surface.amplitudes(), knot.amplitudes()), 1e-12);
  }
}

TEST(KnotThreshold, SwitchesOnRadius) {
  // r just above the threshold stays regular.
  const double r = 1e-6;
  const double s = std::sqrt(0.25 - r * r);
  EXPECT_FALSE(is_knot(params_from_state(state_from_params(s, Angle(0.3), Angle(0.1)))));
  EXPECT_TRUE(is_knot(params_from_state(state_from_params(0.5, Angle(0.3), Angle(0.1)))));
}
