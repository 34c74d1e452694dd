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

#ifndef GAPSVT_ALIGNMENTS_H_
#define GAPSVT_ALIGNMENTS_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "gapsvt/answer.h"
#include "gapsvt/mechanisms.h"
#include "gapsvt/noise.h"
#include "gapsvt/workload.h"

namespace gapsvt {

// I_omega holds indices of positive answers from the plain or first branch,
// J_omega those from the second branch. Both are sorted.
struct IndexSets {
  std::vector<size_t> top_first;
  std::vector<size_t> top_second;

  bool operator==(const IndexSets&) const = default;
};

IndexSets ComputeIndexSets(const OutputSequence& omega);

// phi(H) - H, in the tape's flat layout.
struct AlignmentShift {
  TapeLayout layout = TapeLayout::kSingle;
  double threshold_shift = 0.0;
  // One entry per tape coordinate after the threshold draw.
  std::vector<double> per_query_shifts;

  bool operator==(const AlignmentShift&) const = default;
};

struct CostWeights {
  double threshold_weight = 0.0;
  double first_weight = 0.0;
  // Paired layout only.
  std::optional<double> second_weight;
};

CostWeights WeightsFor(const MechanismBudget& budget);

// eta' = eta + 1; eta_i' = eta_i + (1 + Delta_i) for i in I_omega, unchanged
// otherwise. `omega` must be the output of SvtGapRun on side D with `tape`.
absl::StatusOr<NoiseTape> AlignSvtGap(const NoiseTape& tape,
                                      const OutputSequence& omega,
                                      const Workload& w);

// eta' = eta + 1; xi_i' = xi_i + (1 + Delta_i) for i in I_omega;
// eta_i' = eta_i + (1 + Delta_i) for i in J_omega; all else unchanged.
absl::StatusOr<NoiseTape> AlignAdaptive(const NoiseTape& tape,
                                        const OutputSequence& omega,
                                        const Workload& w);

// AlignSvtGap or AlignAdaptive by mechanism. Classic SVT is aligned as
// SVT-with-Gap; its public output carries strictly less information.
absl::StatusOr<NoiseTape> Align(MechanismId id, const NoiseTape& tape,
                                const OutputSequence& omega,
                                const Workload& w);

// The shift the alignment applies, rebuilt from the index sets and Delta
// alone. Independent of any particular tape.
AlignmentShift ShiftFromIndexSets(const IndexSets& sets, const Workload& w,
                                  TapeLayout layout, size_t tape_queries);

// aligned - tape, coordinate by coordinate.
absl::StatusOr<AlignmentShift> ShiftBetween(const NoiseTape& tape,
                                            const NoiseTape& aligned);

// Weighted L1 distance between two tapes of identical layout and length.
absl::StatusOr<double> AlignmentCost(const NoiseTape& tape,
                                     const NoiseTape& aligned,
                                     const CostWeights& weights);

// Closed forms from the cost argument:
//   eps0 + sum_{I} eps1 |1 + Delta_i|                       (SVT)
//   eps0 + sum_{I} eps1 |1 + Delta_i| + sum_{J} eps2 |1 + Delta_i| (adaptive)
double ClosedFormCost(const IndexSets& sets, const Workload& w,
                      const CostWeights& weights);

}  // namespace gapsvt

#endif  // GAPSVT_ALIGNMENTS_H_
