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

#ifndef GAPSVT_NOISE_H_
#define GAPSVT_NOISE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace gapsvt {

enum class NoiseKind { kContinuousLaplace, kDiscreteLaplace };

// kSingle stores one draw per query (eta_i). kPaired stores (xi_i, eta_i).
enum class TapeLayout { kSingle, kPaired };

// Scales are in units of query value; a role with budget e has scale 1/e.
// `second_query_scale` is set exactly when the layout is paired.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kContinuousLaplace;
  double threshold_scale = 1.0;
  double query_scale = 1.0;
  std::optional<double> second_query_scale;

  TapeLayout layout() const {
    return second_query_scale.has_value() ? TapeLayout::kPaired
                                          : TapeLayout::kSingle;
  }
};

absl::Status ValidateNoiseSpec(const NoiseSpec& spec);

// The randomness a mechanism consumes, laid out flat as
//   [eta, q_1, q_2, ...]             (single)
//   [eta, xi_1, eta_1, xi_2, ...]    (paired)
// A finite tape stands in for the infinite sequence; reading past its end is
// an error, never a resample.
class NoiseTape {
 public:
  NoiseTape() = default;

  static NoiseTape Single(double threshold_noise,
                          std::vector<double> query_noise);
  static NoiseTape Paired(double threshold_noise,
                          std::span<const std::pair<double, double>> noise);
  // `values` is the flat layout described above.
  static absl::StatusOr<NoiseTape> FromFlat(TapeLayout layout,
                                            std::vector<double> values);

  TapeLayout layout() const { return layout_; }
  size_t stride() const { return layout_ == TapeLayout::kSingle ? 1 : 2; }
  size_t num_queries() const {
    return values_.empty() ? 0 : (values_.size() - 1) / stride();
  }

  double threshold_noise() const { return values_[0]; }
  // Single layout: eta_i. Paired layout: xi_i.
  double first(size_t i) const { return values_[1 + i * stride()]; }
  // Paired layout only: eta_i.
  double second(size_t i) const { return values_[2 + i * stride()]; }

  std::span<const double> flat() const { return values_; }
  std::span<double> mutable_flat() { return values_; }

  // Copy keeping the threshold draw and the first `num_queries` entries.
  NoiseTape Truncated(size_t num_queries) const;

  bool operator==(const NoiseTape&) const = default;

 private:
  NoiseTape(TapeLayout layout, std::vector<double> values)
      : layout_(layout), values_(std::move(values)) {}

  TapeLayout layout_ = TapeLayout::kSingle;
  std::vector<double> values_ = {0.0};
};

// Inverse CDF of Laplace(0, scale). Requires 0 < u < 1.
absl::StatusOr<double> LaplaceInverseCdf(double u, double scale);

// P[X = x] for the discrete Laplace distribution with parameter
// alpha = exp(-1/scale): (1 - alpha) / (1 + alpha) * alpha^|x|.
double DiscreteLaplacePmf(int64_t x, double scale);

// P[|X| > bound] for the same distribution: 2 alpha^(bound+1) / (1 + alpha).
double DiscreteLaplaceTail(int64_t bound, double scale);

// Smallest bound with DiscreteLaplaceTail(bound, scale) < max_tail.
int64_t DiscreteLaplaceBound(double scale, double max_tail);

// Deterministic 64-bit stream. Uses std::mt19937_64, whose output sequence
// is fixed by the standard, so tapes are reproducible across platforms.
class NoiseSource {
 public:
  explicit NoiseSource(uint64_t seed);

  // Uniform in the open interval (0, 1).
  double Uniform();
  double Laplace(double scale);
  int64_t DiscreteLaplace(double scale);
  double Draw(NoiseKind kind, double scale);

 private:
  std::mt19937_64 engine_;
};

// Mixes a master seed with a stream index into an independent seed
// (splitmix64 finalizer).
uint64_t DeriveSeed(uint64_t master_seed, uint64_t stream);

// Draws the threshold noise first, then per query in order (xi_i before
// eta_i for the paired layout).
absl::StatusOr<NoiseTape> SampleTape(const NoiseSpec& spec, size_t length,
                                     uint64_t seed);

}  // namespace gapsvt

#endif  // GAPSVT_NOISE_H_
