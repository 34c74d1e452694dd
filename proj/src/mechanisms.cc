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

#include "gapsvt/mechanisms.h"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gapsvt/status_macros.h"

namespace gapsvt {
namespace {

absl::Status TapeExhausted(size_t query, const NoiseTape& tape) {
  return absl::OutOfRangeError(
      absl::StrCat("TapeExhausted: query ", query, " needs noise but the tape ",
                   "holds ", tape.num_queries(), " entries"));
}

absl::Status ExpectLayout(const NoiseTape& tape, TapeLayout layout) {
  if (tape.layout() != layout) {
    return absl::FailedPreconditionError(absl::StrCat(
        "LayoutMismatch: expected a ",
        layout == TapeLayout::kSingle ? "single" : "paired", " tape"));
  }
  return absl::OkStatus();
}

// Shared body of the classic and gap variants; they differ only in whether
// the gap is released.
absl::StatusOr<RunResult> RunSparseVector(const Workload& w, Side side,
                                          const NoiseTape& tape,
                                          bool release_gap) {
  GAPSVT_RETURN_IF_ERROR(CheckWorkload(w));
  GAPSVT_RETURN_IF_ERROR(ExpectLayout(tape, TapeLayout::kSingle));

  RunResult result;
  result.output.answers.reserve(w.pairs.size());
  const double noisy_threshold = w.threshold + tape.threshold_noise();
  int count = 0;
  for (size_t i = 0; i < w.pairs.size(); ++i) {
    if (i >= tape.num_queries()) return TapeExhausted(i, tape);
    const QueryPair& pair = w.pairs[i];
    const double value = side == Side::kD ? pair.value_d : pair.value_dprime;
    // The same draw feeds the test and the released gap.
    const double gap = value + tape.first(i) - noisy_threshold;
    ++result.processed;
    if (gap >= 0.0) {
      result.output.answers.push_back(release_gap ? Answer::TopGap(gap)
                                                  : Answer::Top());
      ++count;
    } else {
      result.output.answers.push_back(Answer::Bot());
    }
    if (count >= w.k) break;
  }
  result.consumed = 1 + result.processed;
  return result;
}

}  // namespace

std::string_view MechanismName(MechanismId id) {
  switch (id) {
    case MechanismId::kSvt:
      return "svt";
    case MechanismId::kSvtGap:
      return "svt-gap";
    case MechanismId::kAdaptiveGap:
      return "adaptive-gap";
  }
  return "svt-gap";
}

absl::StatusOr<MechanismId> ParseMechanism(std::string_view name) {
  for (MechanismId id : {MechanismId::kSvt, MechanismId::kSvtGap,
                         MechanismId::kAdaptiveGap}) {
    if (name == MechanismName(id)) return id;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", std::string(name),
                   "' (expected svt, svt-gap or adaptive-gap)"));
}

TapeLayout LayoutFor(MechanismId id) {
  return id == MechanismId::kAdaptiveGap ? TapeLayout::kPaired
                                         : TapeLayout::kSingle;
}

absl::StatusOr<MechanismBudget> DefaultBudget(MechanismId id,
                                              const Workload& w) {
  if (id == MechanismId::kAdaptiveGap) {
    GAPSVT_ASSIGN_OR_RETURN(AdaptiveBudget b,
                            SplitAdaptiveBudget(w.epsilon, w.k));
    return MechanismBudget(b);
  }
  GAPSVT_ASSIGN_OR_RETURN(SvtBudget b, SplitSvtBudget(w.epsilon, w.k));
  return MechanismBudget(b);
}

NoiseSpec NoiseSpecFor(const MechanismBudget& budget, NoiseKind kind) {
  NoiseSpec spec;
  spec.kind = kind;
  if (const auto* svt = std::get_if<SvtBudget>(&budget)) {
    spec.threshold_scale = 1.0 / svt->epsilon0;
    spec.query_scale = 1.0 / svt->epsilon1;
  } else {
    const auto& adaptive = std::get<AdaptiveBudget>(budget);
    spec.threshold_scale = 1.0 / adaptive.epsilon0;
    spec.query_scale = 1.0 / adaptive.epsilon1;
    spec.second_query_scale = 1.0 / adaptive.epsilon2;
  }
  return spec;
}

absl::StatusOr<RunResult> SvtGapRun(const Workload& w, Side side,
                                    const NoiseTape& tape) {
  return RunSparseVector(w, side, tape, /*release_gap=*/true);
}

absl::StatusOr<RunResult> SvtClassicRun(const Workload& w, Side side,
                                        const NoiseTape& tape) {
  return RunSparseVector(w, side, tape, /*release_gap=*/false);
}

absl::StatusOr<RunResult> AdaptiveSvtGapRun(const Workload& w, Side side,
                                            const AdaptiveBudget& budget,
                                            const NoiseTape& tape) {
  GAPSVT_RETURN_IF_ERROR(CheckWorkload(w));
  if (!w.sigma.has_value()) {
    return absl::InvalidArgumentError(
        "InvalidValue: the adaptive mechanism needs sigma");
  }
  GAPSVT_RETURN_IF_ERROR(ValidateAdaptiveBudget(budget));
  GAPSVT_RETURN_IF_ERROR(ExpectLayout(tape, TapeLayout::kPaired));

  const double sigma = *w.sigma;
  const double guard = budget.epsilon - 2.0 * budget.epsilon2;
  RunResult result;
  CostLedger& ledger = result.ledger.emplace();
  ledger.budget = budget;
  result.output.answers.reserve(w.pairs.size());

  const double noisy_threshold = w.threshold + tape.threshold_noise();
  for (size_t i = 0; i < w.pairs.size(); ++i) {
    if (i >= tape.num_queries()) return TapeExhausted(i, tape);
    const QueryPair& pair = w.pairs[i];
    const double value = side == Side::kD ? pair.value_d : pair.value_dprime;
    LedgerEvent event;
    event.query_index = i;
    event.cost_before = ledger.running_cost();

    const double first_gap = value + tape.first(i) - noisy_threshold;
    if (first_gap >= sigma) {
      result.output.answers.push_back(
          Answer::TopGap(first_gap, Branch::kFirst));
      ++ledger.first_count;
      event.branch = Branch::kFirst;
      event.increment = 2.0 * budget.epsilon1;
    } else {
      const double second_gap = value + tape.second(i) - noisy_threshold;
      if (second_gap >= 0.0) {
        result.output.answers.push_back(
            Answer::TopGap(second_gap, Branch::kSecond));
        ++ledger.second_count;
        event.branch = Branch::kSecond;
        event.increment = 2.0 * budget.epsilon2;
      } else {
        result.output.answers.push_back(Answer::Bot());
      }
    }
    ledger.events.push_back(event);
    ++result.processed;
    if (ledger.running_cost() > guard) break;
  }
  result.consumed = 1 + 2 * result.processed;

  if (ledger.running_cost() > budget.epsilon * (1.0 + 1e-12)) {
    return absl::InternalError(absl::StrCat(
        "BudgetInvariantViolation: final cost ", ledger.running_cost(),
        " exceeds epsilon ", budget.epsilon));
  }
  return result;
}

absl::StatusOr<RunResult> RunMechanism(MechanismId id, const Workload& w,
                                       Side side, const MechanismBudget& budget,
                                       const NoiseTape& tape) {
  switch (id) {
    case MechanismId::kSvt:
      return SvtClassicRun(w, side, tape);
    case MechanismId::kSvtGap:
      return SvtGapRun(w, side, tape);
    case MechanismId::kAdaptiveGap: {
      const auto* adaptive = std::get_if<AdaptiveBudget>(&budget);
      if (adaptive == nullptr) {
        return absl::InvalidArgumentError(
            "adaptive-gap needs an adaptive budget");
      }
      return AdaptiveSvtGapRun(w, side, *adaptive, tape);
    }
  }
  return absl::InvalidArgumentError("unknown mechanism");
}

absl::StatusOr<RunResult> RunSampled(MechanismId id, const Workload& w,
                                     Side side, uint64_t seed,
                                     NoiseKind kind) {
  GAPSVT_RETURN_IF_ERROR(CheckWorkload(w));
  GAPSVT_ASSIGN_OR_RETURN(MechanismBudget budget, DefaultBudget(id, w));
  GAPSVT_ASSIGN_OR_RETURN(
      NoiseTape tape,
      SampleTape(NoiseSpecFor(budget, kind), w.pairs.size(), seed));
  return RunMechanism(id, w, side, budget, tape);
}

}  // namespace gapsvt
