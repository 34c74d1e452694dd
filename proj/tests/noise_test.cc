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

#include "gapsvt/noise.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace gapsvt {
namespace {

using ::testing::HasSubstr;

TEST(LaplaceInverseCdfTest, ClosedFormValues) {
  EXPECT_EQ(*LaplaceInverseCdf(0.5, 1.0), 0.0);
  EXPECT_NEAR(*LaplaceInverseCdf(0.75, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(*LaplaceInverseCdf(0.75, 1.0), 0.693147, 1e-6);
  EXPECT_NEAR(*LaplaceInverseCdf(0.25, 2.0), -2.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(*LaplaceInverseCdf(0.25, 2.0), -1.386294, 1e-6);
}

TEST(LaplaceInverseCdfTest, RejectsOutsideOpenInterval) {
  for (double u : {0.0, 1.0, -0.1, 1.5}) {
    absl::StatusOr<double> x = LaplaceInverseCdf(u, 1.0);
    ASSERT_FALSE(x.ok()) << u;
    EXPECT_THAT(x.status().message(), HasSubstr("DomainError"));
  }
}

TEST(LaplaceInverseCdfTest, StrictlyIncreasing) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1e-9, 1.0 - 1e-9);
  for (int t = 0; t < 10000; ++t) {
    double a = u(rng);
    double b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const double scale = 0.1 + 5.0 * u(rng);
    EXPECT_LT(*LaplaceInverseCdf(a, scale), *LaplaceInverseCdf(b, scale))
        << a << " " << b;
  }
}

// Independent evaluation of (1 - alpha) / (1 + alpha) * alpha^|x|.
double PmfOracle(int64_t x, double scale) {
  const double alpha = std::exp(-1.0 / scale);
  return (1.0 - alpha) / (1.0 + alpha) * std::pow(alpha, std::abs(x));
}

TEST(DiscreteLaplacePmfTest, MatchesClosedForm) {
  EXPECT_NEAR(DiscreteLaplacePmf(0, 1.0), 0.462117, 1e-6);
  for (double scale : {0.25, 1.0, 4.0, 16.0}) {
    for (int64_t x : {-7, -1, 0, 1, 3, 20}) {
      EXPECT_NEAR(DiscreteLaplacePmf(x, scale), PmfOracle(x, scale),
                  1e-15 * (1.0 + PmfOracle(x, scale)));
    }
  }
}

TEST(DiscreteLaplacePmfTest, Symmetric) {
  for (double scale : {0.5, 3.0}) {
    for (int64_t x = 0; x < 50; ++x) {
      EXPECT_EQ(DiscreteLaplacePmf(x, scale), DiscreteLaplacePmf(-x, scale));
    }
  }
}

TEST(DiscreteLaplacePmfTest, ResidualBeyondFortyScalesIsNegligible) {
  for (double scale : {1.0, 2.0, 4.0}) {
    const int64_t bound = static_cast<int64_t>(40 * scale);
    double sum = 0.0;
    for (int64_t x = bound; x >= 1; --x) {
      sum += PmfOracle(x, scale) + PmfOracle(-x, scale);
    }
    sum += PmfOracle(0, scale);
    EXPECT_LT(1.0 - sum, 1e-12) << scale;
  }
}

TEST(DiscreteLaplacePmfTest, TruncatedSumPlusTailIsOne) {
  for (double scale : {0.3, 1.0, 2.5, 8.0}) {
    for (int64_t bound : {0, 1, 5, 30}) {
      double sum = 0.0;
      for (int64_t x = -bound; x <= bound; ++x) {
        sum += DiscreteLaplacePmf(x, scale);
      }
      EXPECT_NEAR(sum + DiscreteLaplaceTail(bound, scale), 1.0, 1e-12)
          << scale << " " << bound;
    }
  }
}

TEST(DiscreteLaplaceBoundTest, SmallestBoundBelowTail) {
  for (double scale : {0.25, 1.0, 4.0, 8.0}) {
    const int64_t b = DiscreteLaplaceBound(scale, 1e-12);
    EXPECT_LT(DiscreteLaplaceTail(b, scale), 1e-12);
    if (b > 0) EXPECT_GE(DiscreteLaplaceTail(b - 1, scale), 1e-12);
  }
}

NoiseSpec SingleSpec(double threshold_scale, double query_scale) {
  return NoiseSpec{NoiseKind::kContinuousLaplace, threshold_scale, query_scale,
                   std::nullopt};
}

TEST(SampleTapeTest, DeterministicForSeed) {
  NoiseSpec spec = SingleSpec(2.0, 4.0);
  EXPECT_EQ(*SampleTape(spec, 16, 42), *SampleTape(spec, 16, 42));
  spec.second_query_scale = 3.0;
  spec.kind = NoiseKind::kDiscreteLaplace;
  EXPECT_EQ(*SampleTape(spec, 16, 42), *SampleTape(spec, 16, 42));
}

TEST(SampleTapeTest, DistinctSeedsDiffer) {
  const NoiseSpec spec = SingleSpec(2.0, 4.0);
  EXPECT_NE(*SampleTape(spec, 16, 1), *SampleTape(spec, 16, 2));
}

TEST(SampleTapeTest, LayoutAndLength) {
  NoiseSpec spec = SingleSpec(1.0, 1.0);
  NoiseTape single = *SampleTape(spec, 5, 3);
  EXPECT_EQ(single.layout(), TapeLayout::kSingle);
  EXPECT_EQ(single.num_queries(), 5u);
  EXPECT_EQ(single.flat().size(), 6u);
  spec.second_query_scale = 1.0;
  NoiseTape paired = *SampleTape(spec, 5, 3);
  EXPECT_EQ(paired.layout(), TapeLayout::kPaired);
  EXPECT_EQ(paired.num_queries(), 5u);
  EXPECT_EQ(paired.flat().size(), 11u);
  EXPECT_FALSE(SampleTape(spec, 0, 3).ok());
}

TEST(SampleTapeTest, ThresholdDrawMeanAbsoluteDeviationIsScale) {
  // |Laplace(b)| is exponential with mean b and standard deviation b.
  const NoiseSpec spec = SingleSpec(2.0, 0.5);
  constexpr int kDraws = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    sum += std::abs(SampleTape(spec, 1, DeriveSeed(7, i))->threshold_noise());
  }
  const double mean = sum / kDraws;
  const double standard_error = 2.0 / std::sqrt(static_cast<double>(kDraws));
  EXPECT_NEAR(mean, 2.0, 3 * standard_error);
}

TEST(SampleTapeTest, RolesUseTheirScales) {
  NoiseSpec spec{NoiseKind::kContinuousLaplace, 1.0, 3.0, 0.5};
  NoiseTape tape = *SampleTape(spec, 200'000, 5);
  double first = 0.0;
  double second = 0.0;
  for (size_t i = 0; i < tape.num_queries(); ++i) {
    first += std::abs(tape.first(i));
    second += std::abs(tape.second(i));
  }
  const double n = static_cast<double>(tape.num_queries());
  EXPECT_NEAR(first / n, 3.0, 3 * 3.0 / std::sqrt(n));
  EXPECT_NEAR(second / n, 0.5, 3 * 0.5 / std::sqrt(n));
}

TEST(SampleTapeTest, DiscreteDrawsMatchPmf) {
  const double scale = 1.5;
  NoiseSpec spec{NoiseKind::kDiscreteLaplace, scale, scale, std::nullopt};
  NoiseTape tape = *SampleTape(spec, 400'000, 9);
  std::vector<int64_t> counts(7, 0);
  for (size_t i = 0; i < tape.num_queries(); ++i) {
    const double x = tape.first(i);
    ASSERT_EQ(x, std::round(x));
    if (std::abs(x) <= 3) ++counts[static_cast<int>(x) + 3];
  }
  const double n = static_cast<double>(tape.num_queries());
  for (int x = -3; x <= 3; ++x) {
    const double p = PmfOracle(x, scale);
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(counts[x + 3] / n, p, 4 * se) << x;
  }
}

TEST(NoiseTapeTest, TruncatedKeepsPrefix) {
  const std::vector<std::pair<double, double>> noise = {{1, 2}, {3, 4}, {5, 6}};
  NoiseTape tape = NoiseTape::Paired(-1, noise);
  NoiseTape cut = tape.Truncated(2);
  EXPECT_EQ(cut.num_queries(), 2u);
  EXPECT_EQ(cut.first(1), 3.0);
  EXPECT_EQ(cut.second(1), 4.0);
  EXPECT_EQ(cut.threshold_noise(), -1.0);
}

TEST(NoiseTapeTest, FromFlatRejectsOddPairedLength) {
  EXPECT_FALSE(NoiseTape::FromFlat(TapeLayout::kPaired, {0, 1}).ok());
  EXPECT_TRUE(NoiseTape::FromFlat(TapeLayout::kPaired, {0, 1, 2}).ok());
  EXPECT_FALSE(NoiseTape::FromFlat(TapeLayout::kSingle, {}).ok());
}

}  // namespace
}  // namespace gapsvt
