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

#include "gapsvt/alignments.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <variant>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace gapsvt {
namespace {

absl::Status CheckAlignable(const NoiseTape& tape, TapeLayout layout,
                            const OutputSequence& omega, const Workload& w) {
  if (tape.layout() != layout) {
    return absl::FailedPreconditionError(
        "LayoutMismatch: tape layout does not match the mechanism");
  }
  if (omega.size() > tape.num_queries() || omega.size() > w.pairs.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "output of length ", omega.size(), " cannot come from this tape (",
        tape.num_queries(), " entries) and workload (", w.pairs.size(),
        " queries)"));
  }
  return absl::OkStatus();
}

}  // namespace

IndexSets ComputeIndexSets(const OutputSequence& omega) {
  IndexSets sets;
  for (size_t i = 0; i < omega.size(); ++i) {
    const Answer& a = omega.answers[i];
    if (!a.top) continue;
    if (a.branch == Branch::kSecond) {
      sets.top_second.push_back(i);
    } else {
      sets.top_first.push_back(i);
    }
  }
  return sets;
}

CostWeights WeightsFor(const MechanismBudget& budget) {
  if (const auto* svt = std::get_if<SvtBudget>(&budget)) {
    return CostWeights{svt->epsilon0, svt->epsilon1, std::nullopt};
  }
  const auto& adaptive = std::get<AdaptiveBudget>(budget);
  return CostWeights{adaptive.epsilon0, adaptive.epsilon1, adaptive.epsilon2};
}

absl::StatusOr<NoiseTape> AlignSvtGap(const NoiseTape& tape,
                                      const OutputSequence& omega,
                                      const Workload& w) {
  if (absl::Status s = CheckAlignable(tape, TapeLayout::kSingle, omega, w);
      !s.ok()) {
    return s;
  }
  NoiseTape aligned = tape;
  std::span<double> h = aligned.mutable_flat();
  h[0] += 1.0;
  for (size_t i = 0; i < omega.size(); ++i) {
    const Answer& a = omega.answers[i];
    if (!a.top) continue;
    if (a.branch != Branch::kPlain) {
      return absl::InvalidArgumentError(
          "SVT outputs carry only plain-branch answers");
    }
    // Keeps q_i + eta_i - (T + eta) identical on D'.
    h[1 + i] += 1.0 + w.pairs[i].delta();
  }
  return aligned;
}

absl::StatusOr<NoiseTape> AlignAdaptive(const NoiseTape& tape,
                                        const OutputSequence& omega,
                                        const Workload& w) {
  if (absl::Status s = CheckAlignable(tape, TapeLayout::kPaired, omega, w);
      !s.ok()) {
    return s;
  }
  NoiseTape aligned = tape;
  std::span<double> h = aligned.mutable_flat();
  h[0] += 1.0;
  for (size_t i = 0; i < omega.size(); ++i) {
    const Answer& a = omega.answers[i];
    if (!a.top) continue;
    const double shift = 1.0 + w.pairs[i].delta();
    switch (a.branch) {
      case Branch::kFirst:
        h[1 + 2 * i] += shift;
        break;
      case Branch::kSecond:
        h[2 + 2 * i] += shift;
        break;
      case Branch::kPlain:
        return absl::InvalidArgumentError(
            "adaptive outputs carry first/second branch tags");
    }
  }
  return aligned;
}

absl::StatusOr<NoiseTape> Align(MechanismId id, const NoiseTape& tape,
                                const OutputSequence& omega,
                                const Workload& w) {
  if (id == MechanismId::kAdaptiveGap) return AlignAdaptive(tape, omega, w);
  return AlignSvtGap(tape, omega, w);
}

AlignmentShift ShiftFromIndexSets(const IndexSets& sets, const Workload& w,
                                  TapeLayout layout, size_t tape_queries) {
  const size_t stride = layout == TapeLayout::kSingle ? 1 : 2;
  AlignmentShift shift;
  shift.layout = layout;
  shift.threshold_shift = 1.0;
  shift.per_query_shifts.assign(tape_queries * stride, 0.0);
  for (size_t i : sets.top_first) {
    shift.per_query_shifts[i * stride] = 1.0 + w.pairs[i].delta();
  }
  for (size_t i : sets.top_second) {
    shift.per_query_shifts[i * stride + 1] = 1.0 + w.pairs[i].delta();
  }
  return shift;
}

absl::StatusOr<AlignmentShift> ShiftBetween(const NoiseTape& tape,
                                            const NoiseTape& aligned) {
  if (tape.layout() != aligned.layout() ||
      tape.flat().size() != aligned.flat().size()) {
    return absl::FailedPreconditionError(
        "LayoutMismatch: tapes differ in layout or length");
  }
  AlignmentShift shift;
  shift.layout = tape.layout();
  shift.threshold_shift = aligned.threshold_noise() - tape.threshold_noise();
  const auto a = tape.flat();
  const auto b = aligned.flat();
  shift.per_query_shifts.reserve(a.size() - 1);
  for (size_t j = 1; j < a.size(); ++j) {
    shift.per_query_shifts.push_back(b[j] - a[j]);
  }
  return shift;
}

absl::StatusOr<double> AlignmentCost(const NoiseTape& tape,
                                     const NoiseTape& aligned,
                                     const CostWeights& weights) {
  if (tape.layout() != aligned.layout() ||
      tape.flat().size() != aligned.flat().size()) {
    return absl::FailedPreconditionError(
        "LayoutMismatch: tapes differ in layout or length");
  }
  const bool paired = tape.layout() == TapeLayout::kPaired;
  if (paired && !weights.second_weight.has_value()) {
    return absl::FailedPreconditionError(
        "LayoutMismatch: paired tape needs a second-branch weight");
  }
  const auto a = tape.flat();
  const auto b = aligned.flat();
  double cost = weights.threshold_weight * std::abs(b[0] - a[0]);
  for (size_t j = 1; j < a.size(); ++j) {
    const bool second = paired && (j - 1) % 2 == 1;
    const double weight = second ? *weights.second_weight : weights.first_weight;
    cost += weight * std::abs(b[j] - a[j]);
  }
  return cost;
}

double ClosedFormCost(const IndexSets& sets, const Workload& w,
                      const CostWeights& weights) {
  // Walk both index sets in ascending order so the summation order matches
  // the coordinate-by-coordinate weighted L1.
  double cost = weights.threshold_weight;
  size_t a = 0;
  size_t b = 0;
  while (a < sets.top_first.size() || b < sets.top_second.size()) {
    const bool take_first =
        b >= sets.top_second.size() ||
        (a < sets.top_first.size() && sets.top_first[a] < sets.top_second[b]);
    if (take_first) {
      const size_t i = sets.top_first[a++];
      cost += weights.first_weight * std::abs(1.0 + w.pairs[i].delta());
    } else {
      const size_t i = sets.top_second[b++];
      cost += weights.second_weight.value_or(weights.first_weight) *
              std::abs(1.0 + w.pairs[i].delta());
    }
  }
  return cost;
}

}  // namespace gapsvt
