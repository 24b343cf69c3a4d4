#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "jtmc/errors.hpp"
#include "jtmc/priors.hpp"
#include "support.hpp"

namespace jtmc {
namespace {

TEST(Priors, UniformRatioIsZero) {
  std::mt19937_64 rng(1);
  const auto law = CliqueSeparatorLaw::uniform();
  for (int rep = 0; rep < 200; ++rep) {
    const JunctionTree t = testing::random_state(2 + rng() % 8, rng);
    const auto m = testing::random_move(t, rng);
    if (m) {
      EXPECT_EQ(log_prior_ratio(law, *m), 0.0);
    }
  }
}

TEST(Priors, ExpFamilyGrowingACliqueInsideItsSeparator) {
  // {1} next to {0, 1}: adding 0 grows the clique and the separator by one.
  const JunctionTree t(2, {VertexSet(2, {0, 1}), VertexSet(2, {1})}, path_tree(2));
  const auto m = make_move(t, 0, MoveKind::Add, {1, 0});
  EXPECT_FALSE(m.graph_update());
  EXPECT_DOUBLE_EQ(log_prior_ratio(CliqueSeparatorLaw::exp_family(2, 4), m), -2.0);
  EXPECT_DOUBLE_EQ(log_prior_ratio(CliqueSeparatorLaw::plain_exp_family(2, 4), m), -2.0);
}

TEST(Priors, EmptySetsContributeNothing) {
  const auto law = CliqueSeparatorLaw::exp_family(2, 4);
  EXPECT_EQ(law.log_phi(VertexSet(3)), 0.0);
  EXPECT_EQ(law.log_psi(VertexSet(3)), 0.0);
  EXPECT_DOUBLE_EQ(law.log_phi(VertexSet(3, {0, 1, 2})), 4.0);
  EXPECT_DOUBLE_EQ(law.log_psi(VertexSet(3, {0, 1})), 8.0);
  const auto plain = CliqueSeparatorLaw::plain_exp_family(2, 4);
  EXPECT_EQ(plain.log_phi(VertexSet(3)), 0.0);
  EXPECT_DOUBLE_EQ(plain.log_phi(VertexSet(3, {0})), 2.0);
}

TEST(Priors, RatioMatchesTotalPriorDifference) {
  std::mt19937_64 rng(3);
  const auto law = CliqueSeparatorLaw::exp_family(0.7, 1.3);
  for (int rep = 0; rep < 500; ++rep) {
    JunctionTree t = testing::random_state(2 + rng() % 8, rng);
    const auto m = testing::random_move(t, rng);
    if (!m) continue;
    const double before = log_prior(law, t);
    apply_move(t, *m);
    EXPECT_NEAR(log_prior(law, t) - before, log_prior_ratio(law, *m), 1e-12);
  }
}

TEST(Priors, CustomFactorsMustBeFinite) {
  const auto bad = CliqueSeparatorLaw::custom(
      [](const VertexSet&) { return std::numeric_limits<double>::infinity(); },
      [](const VertexSet&) { return 0.0; });
  EXPECT_THROW(bad.log_phi(VertexSet(2, {0})), DomainError);
  const auto ok = CliqueSeparatorLaw::custom(
      [](const VertexSet& c) { return static_cast<double>(c.count() * c.count()); },
      [](const VertexSet&) { return 0.0; });
  EXPECT_EQ(ok.kind(), CliqueSeparatorLaw::Kind::Custom);
  EXPECT_DOUBLE_EQ(ok.log_phi(VertexSet(3, {0, 2})), 4.0);
}

TEST(Priors, SkeletonPrior) {
  EXPECT_EQ(log_skeleton_prior(1), 0.0);
  EXPECT_EQ(log_skeleton_prior(2), 0.0);
  EXPECT_DOUBLE_EQ(log_skeleton_prior(4), -2 * std::log(4.0));
  EXPECT_DOUBLE_EQ(log_skeleton_prior(10), -8 * std::log(10.0));
}

}  // namespace
}  // namespace jtmc
