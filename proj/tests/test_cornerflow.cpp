#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sgweyl/cornerflow.hpp"

using namespace sgweyl;

namespace {

const double kS3 = std::sqrt(3.0) / 2;

CornerState orthogonal2() { return CornerState({1.0, 0.0}, {0.0, 1.0}); }
CornerState tilted2() { return CornerState({1.0, 0.0}, {kS3, 0.5}); }

// random state with |c| <= max_c; d >= 2 only, every d = 1 state is degenerate
CornerState sample_nondegenerate(int d, std::mt19937_64& rng, double max_c = 0.99) {
  for (;;) {
    auto z = sample_corner_state(d, rng);
    if (std::abs(conserved_angle(z)) <= max_c) return z;
  }
}

}  // namespace

TEST(CornerState, RejectsNonUnit) {
  EXPECT_THROW(CornerState({1.0, 1.0}, {0.0, 1.0}), ValidationError);
  EXPECT_THROW(CornerState({1.0}, {0.0, 1.0}), ValidationError);
  EXPECT_NO_THROW(CornerState::normalized({3.0, 4.0}, {0.0, 2.0}));
}

TEST(ConservedAngle, Examples) {
  EXPECT_DOUBLE_EQ(conserved_angle(CornerState({0.6, 0.8}, {0.6, 0.8})), 1.0);
  EXPECT_DOUBLE_EQ(conserved_angle(orthogonal2()), 0.0);
  EXPECT_NEAR(conserved_angle(tilted2()), kS3, 1e-16);
}

TEST(HamiltonianRhs, Examples) {
  const auto fixed = hamiltonian_rhs(CornerState({0.6, 0.8}, {0.6, 0.8}));
  for (double v : fixed.d_omega) EXPECT_NEAR(v, 0.0, 1e-16);
  for (double v : fixed.d_theta) EXPECT_NEAR(v, 0.0, 1e-16);
  const auto rot = hamiltonian_rhs(orthogonal2());
  EXPECT_EQ(rot.d_omega, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(rot.d_theta, (std::vector<double>{-1.0, 0.0}));
}

TEST(FlowNumeric, Examples) {
  const auto z = tilted2();
  EXPECT_EQ(distance(flow_numeric(z, 0.0), z), 0.0);
  EXPECT_LE(distance(flow_numeric(orthogonal2(), 2 * kPi), orthogonal2()), 1e-8);
  const auto half = flow_numeric(orthogonal2(), kPi);
  EXPECT_LE(distance(half, CornerState({-1.0, 0.0}, {0.0, -1.0})), 1e-8);
  EXPECT_THROW(flow_numeric(z, 1.0, 0.0), ValidationError);
}

TEST(FlowClosed, Examples) {
  const auto z = tilted2();
  EXPECT_EQ(distance(flow_closed(z, 0.0), z), 0.0);
  EXPECT_LE(distance(flow_closed(orthogonal2(), 2 * kPi), orthogonal2()), 1e-14);
  EXPECT_LE(distance(flow_closed(z, 4 * kPi), z), 1e-13);
}

TEST(ReturnTime, Examples) {
  EXPECT_NEAR(return_time(orthogonal2()).period, 2 * kPi, 1e-15);
  EXPECT_FALSE(return_time(orthogonal2()).fixed_point);
  const auto fixed = return_time(CornerState({0.6, 0.8}, {0.6, 0.8}));
  EXPECT_EQ(fixed.period, 0.0);
  EXPECT_TRUE(fixed.fixed_point);
  EXPECT_TRUE(return_time(CornerState({0.6, 0.8}, {-0.6, -0.8})).fixed_point);
  EXPECT_NEAR(return_time(tilted2()).period, 4 * kPi, 1e-13);
}

TEST(FlowProperties, ConservationAndNorms) {
  const double tol = 1e-9;
  std::mt19937_64 rng(1);
  for (int d = 2; d <= 3; ++d)
    for (int i = 0; i < 20; ++i) {
      const auto z = sample_nondegenerate(d, rng, 0.95);
      const double period = return_time(z).period;
      for (double t : {0.37 * period, 3.1 * period, 10.0 * period}) {
        const auto w = flow_numeric(z, t, tol);
        EXPECT_LE(std::abs(dot(w.omega(), w.theta()) - conserved_angle(z)), 100 * tol);
        EXPECT_LE(std::abs(norm(w.omega()) - 1.0), 100 * tol);
        EXPECT_LE(std::abs(norm(w.theta()) - 1.0), 100 * tol);
      }
    }
}

TEST(FlowProperties, NumericMatchesClosed) {
  const double tol = 1e-9;
  std::mt19937_64 rng(2);
  for (int d = 1; d <= 3; ++d)
    for (int i = 0; i < 200; ++i) {
      const auto z = sample_corner_state(d, rng);
      const double t = 4 * kPi * (i + 0.5) / 200.0;
      EXPECT_LE(distance(flow_numeric(z, t, tol), flow_closed(z, t)), 1e3 * tol) << d << " " << i;
    }
}

TEST(FlowProperties, ExactReturnAndNoEarlyReturn) {
  std::mt19937_64 rng(3);
  for (int d = 2; d <= 3; ++d)
    for (int i = 0; i < 50; ++i) {
      const auto z = sample_nondegenerate(d, rng, 0.999);
      const double period = return_time(z).period;
      EXPECT_LE(distance(flow_closed(z, period), z), 1e-10);
      if (std::abs(conserved_angle(z)) > 1e-6)
        EXPECT_GT(distance(flow_closed(z, period / 2), z), 0.1);
    }
}

TEST(FlowProperties, GroupProperty) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> time(-20.0, 20.0);
  for (int d = 1; d <= 3; ++d)
    for (int i = 0; i < 50; ++i) {
      const auto z = sample_corner_state(d, rng);
      const double s = time(rng), t = time(rng);
      EXPECT_LE(distance(flow_closed(flow_closed(z, s), t), flow_closed(z, s + t)), 1e-10);
    }
}

TEST(FlowProperties, DegenerateStatesAreStationary) {
  const CornerState z({0.0, 0.6, 0.8}, {0.0, 0.6, 0.8});
  EXPECT_LE(distance(flow_closed(z, 17.0), z), 1e-15);
  EXPECT_LE(distance(flow_numeric(z, 17.0), z), 1e-12);
}

TEST(NumericReturnTime, MatchesFormula) {
  EXPECT_NEAR(numeric_return_time(tilted2()), 4 * kPi, 1e-5);
  EXPECT_NEAR(numeric_return_time(orthogonal2()), 2 * kPi, 1e-5);
  EXPECT_EQ(numeric_return_time(CornerState({1.0}, {1.0})), 0.0);
}

TEST(PeriodicMeasure, ModelFlowIsPeriodic) {
  for (int d = 1; d <= 3; ++d)
    for (std::uint64_t seed : {0u, 17u}) {
      const auto m = periodic_measure_estimate(d, seed, 1000);
      EXPECT_EQ(m.fraction, 1.0) << d << " " << seed;
      EXPECT_EQ(m.samples, 1000u);
    }
}

TEST(PeriodicMeasure, NonReturningFlowGivesZero) {
  std::mt19937_64 rng(5);
  // translation of omega along theta never comes back
  auto drift = [](const CornerState& z, double t) {
    auto w = z.omega();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += t * z.theta()[i];
    return CornerState::unchecked(w, z.theta());
  };
  const auto m = periodic_fraction([&] { return sample_nondegenerate(2, rng); }, drift,
                                   [](const CornerState& z) { return return_time(z); }, 200, 1e3,
                                   1e-8);
  EXPECT_EQ(m.fraction, 0.0);
}

TEST(PeriodicMeasure, ShortTimeWindowGivesZero) {
  const auto m = periodic_measure_estimate(2, 9, 100, 1.0);
  EXPECT_EQ(m.fraction, 0.0);
}

TEST(PeriodicMeasure, DegenerateSampleUsesFixedPointConvention) {
  const auto m = periodic_fraction(
      [] { return CornerState({0.6, 0.8}, {-0.6, -0.8}); },
      [](const CornerState& z, double t) { return flow_closed(z, t); },
      [](const CornerState& z) { return return_time(z); }, 1, 1.0, 1e-8);
  EXPECT_EQ(m.fixed_points, 1u);
  EXPECT_EQ(m.fraction, 1.0);
}

TEST(PeriodicMeasure, Validation) {
  EXPECT_THROW(periodic_measure_estimate(0, 1, 10), ValidationError);
  EXPECT_THROW(periodic_measure_estimate(2, 1, 0), ValidationError);
  EXPECT_THROW(periodic_measure_estimate(2, 1, 10, 1.0, -1.0), ValidationError);
}
