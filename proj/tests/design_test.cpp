#include "herald/design.hpp"

#include "herald/analytic.hpp"
#include "herald/noise_opt.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace herald {
namespace {

DesignQuery query(double eta, double alpha, double F, double eta_h, int M = 1,
                  Topology topology = Topology::complete) {
  DesignQuery q;
  q.topology = topology;
  q.M = M;
  q.eta = eta;
  q.alpha = alpha;
  q.fidelity_target = F;
  q.eta_h = eta_h;
  return q;
}

TEST(PlanSources, QuotedCountsWithinOneSource) {
  EXPECT_NEAR(plan_sources(query(0.9, 1.0, 0.99, 0.25)).sources.count, 44, 1);
  EXPECT_NEAR(plan_sources(query(0.95, 1.0, 0.99, 0.25)).sources.count, 22, 1);
  EXPECT_NEAR(plan_sources(query(0.9, 1.0, 0.99, 0.5)).sources.count, 75, 1);
  const auto zalm = plan_sources(query(0.9, 1.0, 0.99, 0.5, 2, Topology::bipartite));
  EXPECT_NEAR(zalm.sources.count / 2, 41, 1);
  EXPECT_EQ(zalm.sources.count % 2, 0);
}

TEST(PlanSources, FortyFourSourcesExceedNinetyNinePercentAtLowFidelity) {
  const auto r = plan_sources(query(0.9, 1.0, 0.90, 0.99));
  ASSERT_TRUE(r.feasible);
  EXPECT_LE(r.sources.count, 44);
  EXPECT_GT(complete_prob(44, r.p_single), 0.99);
}

TEST(PlanSources, PartialPnrSaturatesAtAlphaFloor) {
  // Source counts never drop below the eta -> 1 floor set by alpha.
  for (auto [alpha, floor] : {std::pair{2.0 / 3.0, 114}, std::pair{0.0, 335}}) {
    const auto limit = plan_sources(query(1.0, alpha, 0.99, 0.5));
    EXPECT_NEAR(limit.sources.count, floor, 1) << alpha;
    EXPECT_NEAR(limit.mu, mu_bound_pnr_availability(alpha, 0.99), 1e-12);
    double prev = INFINITY;
    for (double eta = 0.9; eta <= 1.0 + 1e-12; eta += 0.01) {
      const auto r = plan_sources(query(std::min(eta, 1.0), alpha, 0.99, 0.5));
      EXPECT_GE(r.sources.real, limit.sources.real - 1e-9) << alpha << " " << eta;
      EXPECT_LE(r.sources.real, prev) << alpha << " " << eta;
      prev = r.sources.real;
    }
  }
}

TEST(PlanSources, MeetsTargetExactlyBelowCap) {
  const auto r = plan_sources(query(0.9, 1.0, 0.99, 0.5));
  EXPECT_NEAR(r.fidelity, 0.99, 1e-12);
  EXPECT_NEAR(r.mu, mu_max_pnr(1, 0.9, 0.99), 1e-14);
  EXPECT_NEAR(complete_prob(r.sources.real, r.p_single), 0.5, 1e-9);
}

TEST(PlanSources, CapsAtInverseModesWhenLossless) {
  const auto r = plan_sources(query(1.0, 1.0, 0.99, 0.5, 4));
  EXPECT_EQ(r.mu, 0.25);
  EXPECT_NEAR(r.p_single, herald_prob_ideal(4, 0.2), 1e-15);
}

TEST(PlanSources, NoiseLowersReachableMu) {
  auto q = query(0.9, 1.0, 0.99, 0.5);
  const auto quiet = plan_sources(q);
  q.delta1 = 1e-6;
  q.delta2 = default_delta2(1.0, q.delta1);
  const auto noisy = plan_sources(q);
  ASSERT_TRUE(noisy.feasible);
  EXPECT_LT(noisy.mu, quiet.mu);
  EXPECT_NEAR(noisy.fidelity, 0.99, 1e-9);
  EXPECT_GE(noisy.fidelity_ceiling, 0.99);
}

TEST(PlanSources, InfeasibleAboveNoiseCeiling) {
  auto q = query(0.9, 1.0, 0.999, 0.5);
  q.delta1 = 1e-2;
  q.delta2 = default_delta2(1.0, q.delta1);
  const auto r = plan_sources(q);
  EXPECT_FALSE(r.feasible);
  EXPECT_LT(r.fidelity_ceiling, 0.999);
  EXPECT_EQ(r.sources.count, 0);
}

TEST(PlanSources, RejectsBadQueries) {
  EXPECT_THROW(plan_sources(query(0.9, 1.0, 1.0, 0.5)), std::invalid_argument);
  EXPECT_THROW(plan_sources(query(0.9, 1.0, 0.99, 1.0)), std::invalid_argument);
  EXPECT_THROW(plan_sources(query(1.2, 1.0, 0.99, 0.5)), std::invalid_argument);
  EXPECT_THROW(plan_sources(query(0.9, 1.0, 0.99, 0.5, 0)), std::invalid_argument);
}

}  // namespace
}  // namespace herald
