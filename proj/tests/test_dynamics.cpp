#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bdcorr/dynamics.hpp"
#include "frozen_values.hpp"

using namespace bdcorr;

namespace {

const PhaseFlipParams kFig{5.0, 1.0};

double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * detail::unit_uniform(g);
}

}  // namespace

TEST(PhaseFlip, KernelValues) {
  EXPECT_EQ(phase_flip_f(0.0, kFig), 1.0);
  EXPECT_NEAR(kFig.mu(), std::sqrt(399.0), 1e-14);
  EXPECT_NEAR(phase_flip_f(0.1, kFig), frozen::kF01, 1e-13);
  EXPECT_NEAR(phase_flip_f(0.5, kFig), frozen::kF05, 1e-13);
  for (int i = 0; i <= 1000; ++i) EXPECT_LE(std::abs(phase_flip_f(i * 0.005, kFig)), 1.0);
}

TEST(PhaseFlip, RejectsNonOscillatingRegime) {
  for (const PhaseFlipParams& p : {PhaseFlipParams{0.25, 1.0}, PhaseFlipParams{0.1, 1.0}, PhaseFlipParams{-1, 1}}) {
    try {
      phase_flip_f(0.1, p);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnsupportedRegime);
    }
  }
}

TEST(PhaseFlip, LevelCrossingMatchesRootFinder) {
  EXPECT_NEAR(phase_flip_level_time(0.6, kFig), frozen::kNuStarLevel06, 1e-13);
  EXPECT_NEAR(phase_flip_level_time(2.0 / 3.0, kFig), frozen::kNuStarLevel23, 1e-13);
  EXPECT_THROW(phase_flip_level_time(1.5, kFig), Error);
}

TEST(PhaseFlip, Evolution) {
  const BellDiagonal r0{1, -0.6, 0.6};
  EXPECT_EQ(evolve_phase_flip(r0, 0.0, kFig), r0);
  const double nu = phase_flip_level_time(0.5, kFig);
  const BellDiagonal r = evolve_phase_flip(r0, nu, kFig);
  EXPECT_NEAR(r.r11, 0.5, 1e-12);
  EXPECT_NEAR(r.r22, -0.3, 1e-12);
  EXPECT_EQ(r.r33, 0.6);
}

TEST(RandomField, Unitary) {
  EXPECT_LT(max_abs_diff(random_field_unitary(1, 0.0), ComplexMatrix::identity(2)), 1e-15);
  const ComplexMatrix u = random_field_unitary(1, std::numbers::pi / 2);
  EXPECT_LT(max_abs_diff(u, ComplexMatrix(2, {0.0, -1.0, 1.0, 0.0})), 1e-15);
  std::mt19937_64 g(1);
  for (int k = 0; k < 100; ++k) {
    for (int b : {1, 2}) {
      const ComplexMatrix v = random_field_unitary(b, uniform(g, 0, 10));
      EXPECT_LT(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(2)), 1e-12);
    }
  }
  EXPECT_THROW(random_field_unitary(3, 0.1), Error);
}

TEST(RandomField, CoefficientEvolution) {
  const BellDiagonal r0{0.3, -0.2, 0.5};
  EXPECT_EQ(evolve_random_field(r0, 0.0), r0);
  const BellDiagonal q = evolve_random_field(r0, std::numbers::pi / 4);
  EXPECT_NEAR(q.r11, 0.0, 1e-15);
  EXPECT_EQ(q.r22, -0.2);
  EXPECT_NEAR(q.r33, 0.0, 1e-15);
  const BellDiagonal f = evolve_random_field(r0, 0.37);
  EXPECT_NEAR(f.r11, frozen::kRandomFieldR[0], 1e-14);
  EXPECT_NEAR(f.r22, frozen::kRandomFieldR[1], 1e-14);
  EXPECT_NEAR(f.r33, frozen::kRandomFieldR[2], 1e-14);
}

TEST(RandomField, MatrixMapAgreesWithCoefficientMap) {
  std::mt19937_64 g(2);
  BellDiagonalSampler s(3);
  for (int k = 0; k < 1000; ++k) {
    const BellDiagonal r = s();
    const double gt = uniform(g, 0.0, 2.0 * std::numbers::pi);
    const DensityMatrix out = apply_random_field_map(bd_to_matrix(r), gt);
    EXPECT_LT(max_abs_diff(out.matrix(), bd_to_matrix(evolve_random_field(r, gt)).matrix()), 1e-12);
  }
  EXPECT_LT(max_abs_diff(apply_random_field_map(bd_to_matrix({0.3, -0.2, 0.5}), 0.0).matrix(),
                         bd_to_matrix({0.3, -0.2, 0.5}).matrix()),
            1e-15);
  EXPECT_THROW(apply_random_field_map(DensityMatrix::maximally_mixed(2), 0.1), Error);
}

TEST(Channels, ValidityConstancyAndContractivity) {
  std::mt19937_64 g(4);
  BellDiagonalSampler s(5);
  for (int k = 0; k < 1000; ++k) {
    const BellDiagonal a = s(), b = s();
    const double nu = uniform(g, 0.0, 3.0), gt = uniform(g, 0.0, 3.2);
    const BellDiagonal pa = evolve_phase_flip(a, nu, kFig), pb = evolve_phase_flip(b, nu, kFig);
    const BellDiagonal ra = evolve_random_field(a, gt), rb = evolve_random_field(b, gt);
    EXPECT_TRUE(bd_validate(pa));
    EXPECT_TRUE(bd_validate(ra));
    EXPECT_EQ(pa.r33, a.r33);
    EXPECT_EQ(ra.r22, a.r22);
    const double before = trace_distance(bd_to_matrix(a), bd_to_matrix(b));
    EXPECT_LE(trace_distance(bd_to_matrix(pa), bd_to_matrix(pb)), before + 1e-10);
    EXPECT_LE(trace_distance(bd_to_matrix(ra), bd_to_matrix(rb)), before + 1e-10);
  }
}

TEST(Freezing, Condition) {
  const ChannelParams pf = kFig, rf = RandomFieldParams{};
  EXPECT_TRUE(freezing_condition({1, -0.6, 0.6}, pf));
  EXPECT_FALSE(freezing_condition({0.6, 0, 0.4}, pf));
  EXPECT_TRUE(freezing_condition({0.8, 0.8, -1}, rf));
  EXPECT_FALSE(freezing_condition({-0.7, -0.7, -0.8}, rf));
}

TEST(SuddenChange, Examples) {
  const std::vector<double> t = sudden_change_times({0.8, 0.8, -1}, RandomFieldParams{}, 3.14);
  ASSERT_FALSE(t.empty());
  EXPECT_NEAR(t.front(), 0.5 * std::acos(std::sqrt(0.8)), 1e-9);
  EXPECT_NEAR(t.front(), 0.231823804500403, 1e-9);
  EXPECT_TRUE(sudden_change_times({0, 0, 0}, RandomFieldParams{}, 3.14).empty());
  EXPECT_TRUE(sudden_change_times({0, 0, 0}, kFig, 3.0).empty());
  const std::vector<double> p = sudden_change_times({1, -0.6, 0.6}, kFig, 3.0);
  ASSERT_FALSE(p.empty());
  EXPECT_NEAR(p.front(), frozen::kNuStarLevel06, 1e-9);
  EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
}

TEST(SuddenChange, DetectorHandlesTinyGrid) {
  const std::vector<double> p = sudden_change_times({1, -0.6, 0.6}, kFig, 3.0, 2);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(p.front(), frozen::kNuStarLevel06, 1e-9);
}

TEST(Trajectory, PhaseFlipPlateau) {
  const Trajectory tr = trajectory({1, -0.6, 0.6}, kFig, 3.0, 2000);
  ASSERT_EQ(tr.times.size(), 2000u);
  for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_LT(tr.times[i - 1], tr.times[i]);
  const double nu_star = phase_flip_level_time(0.6, kFig);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    EXPECT_TRUE(bd_validate(tr.states[i]));
    if (tr.times[i] < nu_star) {
      EXPECT_NEAR(tr.td_records[i].quantum, 0.3, 1e-12);
    }
  }
  EXPECT_EQ(tr.sudden_changes, tr.classical_changes);
  EXPECT_LT(tr.td_records.back().quantum, 0.01);
}

TEST(Trajectory, RandomFieldFreezingAndOscillation) {
  const Trajectory frozen_tr = trajectory({0.8, 0.8, -1}, RandomFieldParams{}, 3.14, 2000);
  const double t_star = random_field_freezing_end(0.8);
  for (std::size_t i = 0; i < frozen_tr.times.size() && frozen_tr.times[i] < t_star; ++i) {
    EXPECT_NEAR(frozen_tr.td_records[i].quantum, 0.4, 1e-12);
    EXPECT_NEAR(frozen_tr.ent_records[i].quantum, frozen_tr.ent_records[0].quantum, 1e-10);
  }

  // (-0.7, -0.7, -0.8): D_TD alternates between 0.35 and 0.4 cos^2(2gt);
  // the entropic discord is never constant.
  const Trajectory osc = trajectory(bd_from_spectrum({0.1, 0.8, 0.05, 0.05}), RandomFieldParams{}, 3.14, 2000);
  EXPECT_NEAR(osc.states[0].r11, -0.7, 1e-14);
  EXPECT_NEAR(osc.states[0].r33, -0.8, 1e-14);
  for (std::size_t i = 0; i < osc.times.size(); ++i) {
    const double c2 = std::pow(std::cos(2.0 * osc.times[i]), 2);
    EXPECT_NEAR(osc.td_records[i].quantum, std::min(0.35, 0.4 * c2), 1e-12);
  }
  for (std::size_t i = 1; i < 50; ++i) EXPECT_NE(osc.ent_records[i].quantum, osc.ent_records[i - 1].quantum);
}

TEST(Trajectory, Errors) {
  EXPECT_THROW(trajectory({1, 1, 1}, kFig, 1.0, 10), Error);
  EXPECT_THROW(trajectory({0, 0, 0}, kFig, 1.0, 1), Error);
  EXPECT_THROW(trajectory({0, 0, 0}, PhaseFlipParams{0.1, 1.0}, 1.0, 10), Error);
}

TEST(FreezingScan, PlateausAndChangeTimes) {
  const std::vector<double> ls{0.7, 0.8, 0.9, 1.0};
  const auto scan = freezing_scaling_scan(ls, 3.14, 2000);
  ASSERT_EQ(scan.size(), 4u);
  const double plateaus[] = {0.2, 0.3, 0.4, 0.5};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(scan[i].plateau, plateaus[i], 1e-15);
  EXPECT_NEAR(scan[0].closed_form_change, 0.443038561895982, 1e-12);
  EXPECT_NEAR(scan[2].closed_form_change, 0.231823804500403, 1e-12);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_TRUE(scan[i].detected_change.has_value());
    EXPECT_NEAR(*scan[i].detected_change, scan[i].closed_form_change, 1e-8);
  }
  EXPECT_GT(*scan[0].detected_change, *scan[1].detected_change);
  EXPECT_GT(*scan[1].detected_change, *scan[2].detected_change);
  // All-equal moduli: the intermediate index never switches after t = 0.
  EXPECT_FALSE(scan[3].detected_change.has_value());
}

TEST(FreezingScan, RejectsOutOfRange) {
  for (double bad : {0.5, 0.3, 1.2}) {
    const std::vector<double> ls{bad};
    try {
      freezing_scaling_scan(ls, 1.0, 10);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidSpectrum);
    }
  }
}
