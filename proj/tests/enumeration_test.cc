// Copyright 2026 The gapsvt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gapsvt/enumeration.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "gapsvt/budget.h"
#include "gapsvt/mechanisms.h"
#include "gapsvt/noise.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace gapsvt {
namespace {

using ::testing::HasSubstr;

Workload Pairs(std::vector<QueryPair> pairs, double threshold, int k,
               double epsilon, std::optional<double> sigma = std::nullopt) {
  return Workload{std::move(pairs), threshold, k, epsilon, sigma};
}

OutputDistribution Enumerate(MechanismId id, const Workload& w, Side side,
                             ExecutionPolicy policy,
                             std::optional<EnumerationBox> box = std::nullopt) {
  const MechanismBudget budget = *DefaultBudget(id, w);
  const EnumerationBox used = box.value_or(EnumerationBox::ForTail(
      NoiseSpecFor(budget, NoiseKind::kDiscreteLaplace), 1e-12));
  absl::StatusOr<OutputDistribution> d =
      EnumerateOutputDist(id, w, side, budget, used, kDefaultGridBudget, policy);
  EXPECT_TRUE(d.ok()) << d.status();
  return *std::move(d);
}

void ExpectSameDistribution(const OutputDistribution& a,
                            const OutputDistribution& b, double rel_tol) {
  ASSERT_EQ(a.masses.size(), b.masses.size());
  for (const auto& [output, mass] : a.masses) {
    auto it = b.masses.find(output);
    ASSERT_NE(it, b.masses.end()) << ToTrace(Decanonicalize(output));
    EXPECT_NEAR(it->second, mass, rel_tol * mass + 1e-300);
  }
  EXPECT_EQ(a.truncation_loss, b.truncation_loss);
}

TEST(EnumerateOutputDistTest, ParallelMatchesSerialReference) {
  const EnumerationBox small{6, 9, 7};
  for (MechanismId id : {MechanismId::kSvt, MechanismId::kSvtGap,
                         MechanismId::kAdaptiveGap}) {
    const Workload w = Pairs({{1, 0}, {0, 1}}, 0, 1, 2.0, 1.0);
    for (Side side : {Side::kD, Side::kDprime}) {
      ExpectSameDistribution(
          Enumerate(id, w, side, ExecutionPolicy::kSerial, small),
          Enumerate(id, w, side, ExecutionPolicy::kParallel, small), 1e-12);
    }
  }
  const Workload three = Pairs({{1, 0}, {0, 1}, {2, 2}}, 1, 2, 1.0);
  ExpectSameDistribution(
      Enumerate(MechanismId::kSvtGap, three, Side::kD, ExecutionPolicy::kSerial,
                EnumerationBox{5, 8, std::nullopt}),
      Enumerate(MechanismId::kSvtGap, three, Side::kD,
                ExecutionPolicy::kParallel, EnumerationBox{5, 8, std::nullopt}),
      1e-12);
}

TEST(EnumerateOutputDistTest, IdenticalSidesGiveIdenticalMaps) {
  const Workload w = Pairs({{2, 2}, {0, 0}}, 1, 1, 1.0);
  const OutputDistribution d =
      Enumerate(MechanismId::kSvtGap, w, Side::kD, ExecutionPolicy::kParallel);
  const OutputDistribution dp = Enumerate(MechanismId::kSvtGap, w,
                                          Side::kDprime,
                                          ExecutionPolicy::kParallel);
  ASSERT_EQ(d.masses.size(), dp.masses.size());
  for (const auto& [o, m] : d.masses) EXPECT_EQ(dp.masses.at(o), m);
  EXPECT_EQ(MaxPrivacyLoss(d, dp)->raw, 0.0);
}

TEST(EnumerateOutputDistTest, MassesPlusTruncationSumToOne) {
  for (MechanismId id : {MechanismId::kSvtGap, MechanismId::kAdaptiveGap}) {
    const Workload w = Pairs({{1, 0}}, 0, 1, 1.0, 2.0);
    const OutputDistribution d =
        Enumerate(id, w, Side::kD, ExecutionPolicy::kParallel);
    EXPECT_NEAR(d.total_mass() + d.truncation_loss, 1.0, 1e-9);
    EXPECT_LT(d.truncation_loss, 1e-9);
  }
}

TEST(EnumerateOutputDistTest, AnalyticTruncationMatchesMissingMass) {
  // A narrow box leaves visible tail mass; the closed-form loss must account
  // for exactly what the enumeration did not see.
  for (MechanismId id : {MechanismId::kSvtGap, MechanismId::kAdaptiveGap}) {
    const Workload w = Pairs({{1, 0}, {0, 1}}, 0, 1, 1.0, 2.0);
    const MechanismBudget budget = *DefaultBudget(id, w);
    for (int bound : {2, 5, 9}) {
      absl::StatusOr<OutputDistribution> d = EnumerateOutputDist(
          id, w, Side::kD, budget, EnumerationBox::Uniform(bound, LayoutFor(id)));
      ASSERT_TRUE(d.ok()) << d.status();
      EXPECT_GT(d->truncation_loss, 1e-6);
      EXPECT_NEAR(d->total_mass() + d->truncation_loss, 1.0, 1e-12)
          << MechanismName(id) << " B=" << bound;
    }
  }
}

// Single query, k = 1: P[TopGap(g)] = sum_eta P[eta] P[eta_1 = g + T + eta - q]
// and P[Bot] = 1 - sum_g P[TopGap(g)], computed straight from the pmf.
TEST(EnumerateOutputDistTest, SingleQueryMatchesDirectConvolution) {
  const double q = 2.0;
  const double t = 1.0;
  const Workload w = Pairs({{q, q - 1}}, t, 1, 1.0);
  const SvtBudget b = *SplitSvtBudget(1.0, 1);
  const double s0 = 1.0 / b.epsilon0;
  const double s1 = 1.0 / b.epsilon1;
  const EnumerationBox box{60, 120, std::nullopt};
  const OutputDistribution d = Enumerate(MechanismId::kSvtGap, w, Side::kD,
                                         ExecutionPolicy::kParallel, box);
  double top_total = 0.0;
  for (int64_t g = 0; g <= 200; ++g) {
    double p = 0.0;
    for (int64_t eta = -box.threshold; eta <= box.threshold; ++eta) {
      const int64_t eta1 = g + static_cast<int64_t>(t - q) + eta;
      if (std::abs(eta1) > box.query) continue;
      p += DiscreteLaplacePmf(eta, s0) * DiscreteLaplacePmf(eta1, s1);
    }
    top_total += p;
    const CanonicalOutput key =
        Canonicalize(OutputSequence{{Answer::TopGap(static_cast<double>(g))}});
    const double got = d.masses.contains(key) ? d.masses.at(key) : 0.0;
    EXPECT_NEAR(got, p, 1e-14 + 1e-12 * p) << g;
  }
  const CanonicalOutput bot = Canonicalize(OutputSequence{{Answer::Bot()}});
  EXPECT_NEAR(d.masses.at(bot), d.total_mass() - top_total, 1e-9);
}

TEST(EnumerateOutputDistTest, GridBudgetExceeded) {
  const Workload w = Pairs({{1, 0}, {0, 1}, {0, 0}}, 0, 1, 1.0);
  const MechanismBudget budget = *DefaultBudget(MechanismId::kSvtGap, w);
  auto d = EnumerateOutputDist(MechanismId::kSvtGap, w, Side::kD, budget,
                               EnumerationBox::Uniform(1000, TapeLayout::kSingle),
                               1'000'000);
  ASSERT_FALSE(d.ok());
  EXPECT_EQ(d.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_THAT(d.status().message(), HasSubstr("GridBudgetExceeded"));
}

TEST(EnumerateOutputDistTest, RejectsRealValuedWorkloads) {
  const Workload w = Pairs({{1.5, 1}}, 0, 1, 1.0);
  const MechanismBudget budget = *DefaultBudget(MechanismId::kSvtGap, w);
  EXPECT_FALSE(EnumerateOutputDist(MechanismId::kSvtGap, w, Side::kD, budget,
                                   EnumerationBox{5, 5, std::nullopt})
                   .ok());
}

TEST(GridPointsTest, ProductOfBoxSizes) {
  EXPECT_EQ(GridPoints(EnumerationBox{1, 2, std::nullopt}, TapeLayout::kSingle,
                       2),
            3u * 5u * 5u);
  EXPECT_EQ(GridPoints(EnumerationBox{1, 2, 3}, TapeLayout::kPaired, 1),
            3u * 5u * 7u);
  EXPECT_EQ(GridPoints(EnumerationBox::Uniform(1'000'000, TapeLayout::kSingle),
                       TapeLayout::kSingle, 10),
            UINT64_MAX);
}

OutputDistribution FromMasses(std::vector<std::pair<int64_t, double>> masses) {
  OutputDistribution d;
  for (auto [gap, mass] : masses) {
    d.masses[Canonicalize(
        OutputSequence{{Answer::TopGap(static_cast<double>(gap))}})] = mass;
  }
  d.num_queries = 1;
  return d;
}

TEST(MaxPrivacyLossTest, IdenticalDistributionsHaveZeroLoss) {
  const OutputDistribution p = FromMasses({{0, 0.3}, {1, 0.7}});
  const PrivacyLoss loss = *MaxPrivacyLoss(p, p);
  EXPECT_EQ(loss.raw, 0.0);
  EXPECT_EQ(loss.padded, 0.0);
}

TEST(MaxPrivacyLossTest, TwoPointPair) {
  const PrivacyLoss loss = *MaxPrivacyLoss(FromMasses({{0, 0.6}, {1, 0.4}}),
                                           FromMasses({{0, 0.4}, {1, 0.6}}));
  EXPECT_NEAR(loss.raw, std::log(1.5), 1e-15);
  EXPECT_NEAR(loss.raw, 0.405, 1e-3);
  EXPECT_NEAR(loss.padded, std::log(1.5), 1e-15);
}

TEST(MaxPrivacyLossTest, TruncationPadsOneSidedOutputs) {
  OutputDistribution p = FromMasses({{0, 0.5}, {1, 1e-13}});
  OutputDistribution q = FromMasses({{0, 0.5}});
  p.truncation_loss = q.truncation_loss = 1e-12;
  const PrivacyLoss loss = *MaxPrivacyLoss(p, q);
  EXPECT_TRUE(std::isinf(loss.raw));
  EXPECT_EQ(loss.padding_tau, 1e-12);
  EXPECT_LT(loss.padded, 1e-9);
}

TEST(MaxPrivacyLossTest, DomainMismatch) {
  OutputDistribution p = FromMasses({{0, 1.0}});
  OutputDistribution q = p;
  q.num_queries = 2;
  EXPECT_THAT(MaxPrivacyLoss(p, q).status().message(),
              HasSubstr("DomainMismatch"));
}

TEST(SampleOutputDistTest, SerialAndParallelCountsAgree) {
  const Workload w = Pairs({{1, 0}, {0, 1}}, 0, 1, 1.0, 1.0);
  for (MechanismId id : {MechanismId::kSvtGap, MechanismId::kAdaptiveGap}) {
    const MechanismBudget budget = *DefaultBudget(id, w);
    auto serial = SampleOutputDist(id, w, Side::kD, budget,
                                   NoiseKind::kDiscreteLaplace, 100'000, 5, 1.0,
                                   ExecutionPolicy::kSerial);
    auto parallel = SampleOutputDist(id, w, Side::kD, budget,
                                     NoiseKind::kDiscreteLaplace, 100'000, 5,
                                     1.0, ExecutionPolicy::kParallel);
    ASSERT_TRUE(serial.ok() && parallel.ok());
    EXPECT_EQ(serial->counts, parallel->counts);
  }
}

// Enumeration vs sampling on the two-query example used throughout.
TEST(EnumerationMonteCarloTest, TotalVariationIsSmall) {
  const Workload w = Pairs({{1, 0}, {0, 1}}, 0, 1, 1.0);
  const MechanismBudget budget = *DefaultBudget(MechanismId::kSvtGap, w);
  const OutputDistribution exact = Enumerate(MechanismId::kSvtGap, w, Side::kD,
                                             ExecutionPolicy::kParallel);
  auto sampled = SampleOutputDist(MechanismId::kSvtGap, w, Side::kD, budget,
                                  NoiseKind::kDiscreteLaplace, 10'000'000, 77);
  ASSERT_TRUE(sampled.ok());
  EXPECT_LT(TotalVariation(exact, *sampled), 3e-3);
}

}  // namespace
}  // namespace gapsvt
