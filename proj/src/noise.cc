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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace gapsvt {

absl::Status ValidateNoiseSpec(const NoiseSpec& spec) {
  auto bad = [](double scale) { return !(scale > 0.0) || !std::isfinite(scale); };
  if (bad(spec.threshold_scale) || bad(spec.query_scale) ||
      (spec.second_query_scale.has_value() && bad(*spec.second_query_scale))) {
    return absl::InvalidArgumentError("noise scales must be positive");
  }
  return absl::OkStatus();
}

NoiseTape NoiseTape::Single(double threshold_noise,
                            std::vector<double> query_noise) {
  std::vector<double> values;
  values.reserve(query_noise.size() + 1);
  values.push_back(threshold_noise);
  values.insert(values.end(), query_noise.begin(), query_noise.end());
  return NoiseTape(TapeLayout::kSingle, std::move(values));
}

NoiseTape NoiseTape::Paired(double threshold_noise,
                            std::span<const std::pair<double, double>> noise) {
  std::vector<double> values;
  values.reserve(2 * noise.size() + 1);
  values.push_back(threshold_noise);
  for (const auto& [xi, eta] : noise) {
    values.push_back(xi);
    values.push_back(eta);
  }
  return NoiseTape(TapeLayout::kPaired, std::move(values));
}

absl::StatusOr<NoiseTape> NoiseTape::FromFlat(TapeLayout layout,
                                              std::vector<double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("tape needs a threshold draw");
  }
  if (layout == TapeLayout::kPaired && (values.size() - 1) % 2 != 0) {
    return absl::InvalidArgumentError(
        "LayoutMismatch: paired tape has an odd number of query draws");
  }
  return NoiseTape(layout, std::move(values));
}

NoiseTape NoiseTape::Truncated(size_t num_queries) const {
  std::vector<double> values(
      values_.begin(),
      values_.begin() + 1 + std::min(num_queries, this->num_queries()) *
                                stride());
  return NoiseTape(layout_, std::move(values));
}

absl::StatusOr<double> LaplaceInverseCdf(double u, double scale) {
  if (!(u > 0.0 && u < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("DomainError: u=", u, " is outside (0, 1)"));
  }
  if (!(scale > 0.0)) {
    return absl::InvalidArgumentError("DomainError: scale must be positive");
  }
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(centered));
}

double DiscreteLaplacePmf(int64_t x, double scale) {
  // (1 - alpha) / (1 + alpha) == tanh(1 / (2 scale)).
  const double magnitude = static_cast<double>(x < 0 ? -x : x);
  return std::tanh(0.5 / scale) * std::exp(-magnitude / scale);
}

double DiscreteLaplaceTail(int64_t bound, double scale) {
  const double alpha = std::exp(-1.0 / scale);
  return 2.0 * std::exp(-static_cast<double>(bound + 1) / scale) /
         (1.0 + alpha);
}

int64_t DiscreteLaplaceBound(double scale, double max_tail) {
  const double alpha = std::exp(-1.0 / scale);
  // 2 alpha^(b+1) / (1 + alpha) < max_tail  <=>  b + 1 > ln(...) / ln(alpha)
  const double estimate =
      std::log(max_tail * (1.0 + alpha) / 2.0) / std::log(alpha) - 1.0;
  int64_t bound = std::max<int64_t>(0, static_cast<int64_t>(estimate) - 1);
  while (DiscreteLaplaceTail(bound, scale) >= max_tail) ++bound;
  while (bound > 0 && DiscreteLaplaceTail(bound - 1, scale) < max_tail) {
    --bound;
  }
  return bound;
}

NoiseSource::NoiseSource(uint64_t seed) : engine_(seed) {}

double NoiseSource::Uniform() {
  // 53 random bits, offset by half a step so 0 and 1 are excluded.
  const uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double NoiseSource::Laplace(double scale) {
  return *LaplaceInverseCdf(Uniform(), scale);
}

int64_t NoiseSource::DiscreteLaplace(double scale) {
  // Difference of two geometric variables with P[G = g] = (1-alpha) alpha^g.
  const double g1 = std::floor(-scale * std::log(Uniform()));
  const double g2 = std::floor(-scale * std::log(Uniform()));
  return static_cast<int64_t>(g1) - static_cast<int64_t>(g2);
}

double NoiseSource::Draw(NoiseKind kind, double scale) {
  return kind == NoiseKind::kContinuousLaplace
             ? Laplace(scale)
             : static_cast<double>(DiscreteLaplace(scale));
}

uint64_t DeriveSeed(uint64_t master_seed, uint64_t stream) {
  uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

absl::StatusOr<NoiseTape> SampleTape(const NoiseSpec& spec, size_t length,
                                     uint64_t seed) {
  if (length < 1) {
    return absl::InvalidArgumentError("tape length must be >= 1");
  }
  if (absl::Status s = ValidateNoiseSpec(spec); !s.ok()) return s;
  NoiseSource source(seed);
  const TapeLayout layout = spec.layout();
  std::vector<double> values;
  values.reserve(1 + length * (layout == TapeLayout::kSingle ? 1 : 2));
  values.push_back(source.Draw(spec.kind, spec.threshold_scale));
  for (size_t i = 0; i < length; ++i) {
    values.push_back(source.Draw(spec.kind, spec.query_scale));
    if (layout == TapeLayout::kPaired) {
      values.push_back(source.Draw(spec.kind, *spec.second_query_scale));
    }
  }
  return NoiseTape::FromFlat(layout, std::move(values));
}

}  // namespace gapsvt
