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

#ifndef GAPSVT_ENUMERATION_H_
#define GAPSVT_ENUMERATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "absl/status/statusor.h"
#include "gapsvt/answer.h"
#include "gapsvt/execution.h"
#include "gapsvt/mechanisms.h"
#include "gapsvt/noise.h"
#include "gapsvt/workload.h"

namespace gapsvt {

using OutputMassMap =
    std::unordered_map<CanonicalOutput, double, CanonicalOutputHash>;
using OutputCountMap =
    std::unordered_map<CanonicalOutput, int64_t, CanonicalOutputHash>;

// Exact output distribution of a mechanism over a truncated integer noise
// box. Mass of tapes outside the box is reported, not dropped.
struct OutputDistribution {
  MechanismId mechanism = MechanismId::kSvtGap;
  size_t num_queries = 0;
  OutputMassMap masses;
  double truncation_loss = 0.0;
  uint64_t grid_points = 0;

  double total_mass() const;
};

// Inclusive integer bounds [-b, b] per tape role.
struct EnumerationBox {
  int64_t threshold = 0;
  int64_t query = 0;
  std::optional<int64_t> second_query;

  static EnumerationBox Uniform(int64_t bound, TapeLayout layout);
  // Smallest per-role bounds whose per-draw tail mass is below `max_tail`.
  static EnumerationBox ForTail(const NoiseSpec& spec, double max_tail);
};

inline constexpr uint64_t kDefaultGridBudget = 100'000'000;
inline constexpr double kDefaultPerDrawTail = 1e-12;

// Number of tapes in the box for an n-query workload, saturating at
// UINT64_MAX.
uint64_t GridPoints(const EnumerationBox& box, TapeLayout layout,
                    size_t num_queries);

// Enumerates every integer tape in the box under discrete Laplace noise at
// the budget's scales and accumulates the probability of each output.
// Requires an integer workload. Fails with "GridBudgetExceeded" when the box
// holds more than `grid_budget` tapes.
//
// kParallel splits the outer (threshold) coordinate across threads and
// collapses tape suffixes the mechanism never read. kSerial visits every
// tape one by one.
absl::StatusOr<OutputDistribution> EnumerateOutputDist(
    MechanismId id, const Workload& w, Side side,
    const MechanismBudget& budget, const EnumerationBox& box,
    uint64_t grid_budget = kDefaultGridBudget,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct PrivacyLoss {
  // max over outputs of max(ln(p / (q + tau)), ln(q / (p + tau))), where tau
  // is the larger truncation loss. Bounded by epsilon whenever a cost-epsilon
  // alignment exists, truncation included.
  double padded = 0.0;
  // max |ln(p / q)| over outputs with both masses positive; +inf if some
  // output has positive mass on one side only.
  double raw = 0.0;
  double padding_tau = 0.0;
  std::optional<CanonicalOutput> worst_output;
};

// Fails with "DomainMismatch" when the distributions come from different
// mechanisms or query counts.
absl::StatusOr<PrivacyLoss> MaxPrivacyLoss(const OutputDistribution& p,
                                           const OutputDistribution& q);

// Monte Carlo histogram of outputs.
struct EmpiricalDistribution {
  OutputCountMap counts;
  int64_t samples = 0;
};

// `scale_factor` multiplies every noise scale; 1.0 is the real mechanism.
absl::StatusOr<EmpiricalDistribution> SampleOutputDist(
    MechanismId id, const Workload& w, Side side,
    const MechanismBudget& budget, NoiseKind kind, int64_t samples,
    uint64_t seed, double scale_factor = 1.0,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

// Total variation between an exact distribution and empirical frequencies;
// truncation mass counts as disagreement.
double TotalVariation(const OutputDistribution& exact,
                      const EmpiricalDistribution& empirical);

}  // namespace gapsvt

#endif  // GAPSVT_ENUMERATION_H_
