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

#ifndef GAPSVT_MECHANISMS_H_
#define GAPSVT_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "gapsvt/answer.h"
#include "gapsvt/budget.h"
#include "gapsvt/noise.h"
#include "gapsvt/workload.h"

namespace gapsvt {

enum class MechanismId { kSvt, kSvtGap, kAdaptiveGap };

// "svt", "svt-gap", "adaptive-gap".
std::string_view MechanismName(MechanismId id);
absl::StatusOr<MechanismId> ParseMechanism(std::string_view name);
TapeLayout LayoutFor(MechanismId id);

using MechanismBudget = std::variant<SvtBudget, AdaptiveBudget>;

// Default budget split for the mechanism at the workload's (epsilon, k).
absl::StatusOr<MechanismBudget> DefaultBudget(MechanismId id,
                                              const Workload& w);

// Noise scales 1/epsilon_role for the budget.
NoiseSpec NoiseSpecFor(const MechanismBudget& budget, NoiseKind kind);

struct LedgerEvent {
  size_t query_index = 0;
  // Empty for a Bot answer, which costs nothing.
  std::optional<Branch> branch;
  double increment = 0.0;
  double cost_before = 0.0;
};

// Privacy spend of one adaptive run. The running cost is derived from the
// branch counts, so it equals epsilon0 + 2 epsilon1 |I| + 2 epsilon2 |J| by
// construction.
struct CostLedger {
  AdaptiveBudget budget;
  int first_count = 0;
  int second_count = 0;
  std::vector<LedgerEvent> events;

  double running_cost() const {
    return CostFormula(budget, first_count, second_count);
  }

  static double CostFormula(const AdaptiveBudget& budget, int first_count,
                            int second_count) {
    return budget.epsilon0 + 2.0 * budget.epsilon1 * first_count +
           2.0 * budget.epsilon2 * second_count;
  }
};

struct RunResult {
  OutputSequence output;
  // Number of queries the mechanism looked at before stopping.
  size_t processed = 0;
  // Tape coordinates read, including the threshold draw.
  size_t consumed = 0;
  std::optional<CostLedger> ledger;
};

// Sparse Vector with Gap over an explicit single-layout tape.
absl::StatusOr<RunResult> SvtGapRun(const Workload& w, Side side,
                                    const NoiseTape& tape);

// Same test sequence without releasing gaps.
absl::StatusOr<RunResult> SvtClassicRun(const Workload& w, Side side,
                                        const NoiseTape& tape);

// Adaptive Sparse Vector with Gap. For every processed query, first tests
// q_i + xi_i - T~ >= sigma (answer tagged kFirst, costs 2 epsilon1), then
// q_i + eta_i - T~ >= 0 (kSecond, costs 2 epsilon2), otherwise answers Bot.
// Stops after any query that leaves running cost above eps - 2 epsilon2.
absl::StatusOr<RunResult> AdaptiveSvtGapRun(const Workload& w, Side side,
                                            const AdaptiveBudget& budget,
                                            const NoiseTape& tape);

// Dispatches on the mechanism. `budget` must match the mechanism family.
absl::StatusOr<RunResult> RunMechanism(MechanismId id, const Workload& w,
                                       Side side, const MechanismBudget& budget,
                                       const NoiseTape& tape);

// Samples a tape of the right layout with the default budget's scales and
// runs the mechanism on it.
absl::StatusOr<RunResult> RunSampled(MechanismId id, const Workload& w,
                                     Side side, uint64_t seed,
                                     NoiseKind kind =
                                         NoiseKind::kContinuousLaplace);

}  // namespace gapsvt

#endif  // GAPSVT_MECHANISMS_H_
