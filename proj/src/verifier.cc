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

#include "gapsvt/verifier.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gapsvt/alignments.h"
#include "gapsvt/status_macros.h"

namespace gapsvt {
namespace {

constexpr char kSoundness[] = "soundness";
constexpr char kCostBound[] = "cost-bound";
constexpr char kClosedForm[] = "closed-form-cost";
constexpr char kLedgerIdentity[] = "ledger-identity";
constexpr char kLedgerGuard[] = "ledger-guard";
constexpr char kTermination[] = "termination";
constexpr char kConsumedLength[] = "consumed-length";
constexpr char kShiftFromIndexSets[] = "shift-from-index-sets";
constexpr char kEqualOutputShift[] = "equal-output-shift";
constexpr char kPrefixDeterminism[] = "prefix-determinism";
constexpr char kClassicGapCoupling[] = "classic-gap-coupling";
constexpr char kHarnessError[] = "harness-error";

struct Violation {
  std::string check;
  std::string detail;
  std::optional<NoiseTape> aligned;
  std::optional<OutputSequence> observed;
};

// Inputs of one oriented check: the failing run is always on side D.
struct CheckInput {
  MechanismId id;
  const Workload* workload;
  MechanismBudget budget;
  const NoiseTape* tape;
  const NoiseTape* second_tape;  // may be null
  AlignmentMutation mutation;
  bool exact;
};

// Per-check measurements folded into the report.
struct Measurements {
  double max_cost = 0.0;
  int64_t equal_output_pairs = 0;
};

bool IsIntegral(const NoiseTape& tape) {
  for (double x : tape.flat()) {
    if (x != std::round(x)) return false;
  }
  return true;
}

bool SameShift(const AlignmentShift& a, const AlignmentShift& b, bool exact) {
  if (a.layout != b.layout ||
      a.per_query_shifts.size() != b.per_query_shifts.size()) {
    return false;
  }
  const double tol = exact ? 0.0 : kCostTolerance;
  if (std::abs(a.threshold_shift - b.threshold_shift) > tol) return false;
  for (size_t j = 0; j < a.per_query_shifts.size(); ++j) {
    if (std::abs(a.per_query_shifts[j] - b.per_query_shifts[j]) > tol) {
      return false;
    }
  }
  return true;
}

bool SameOutput(const OutputSequence& a, const OutputSequence& b, bool exact) {
  return exact ? a == b : ApproximatelyEqual(a, b, kGapTolerance);
}

void ApplyMutation(AlignmentMutation mutation, const OutputSequence& omega,
                   const Workload& w, NoiseTape& aligned) {
  if (mutation == AlignmentMutation::kNone) return;
  std::span<double> h = aligned.mutable_flat();
  const size_t stride = aligned.stride();
  if (mutation == AlignmentMutation::kThresholdShiftTwo) {
    h[0] += 1.0;
    return;
  }
  for (size_t i = 0; i < omega.size(); ++i) {
    const Answer& a = omega.answers[i];
    if (!a.top) continue;
    const size_t coord = 1 + i * stride + (a.branch == Branch::kSecond ? 1 : 0);
    if (mutation == AlignmentMutation::kDropUnitShift) {
      h[coord] -= 1.0;
    } else if (mutation == AlignmentMutation::kMissingSecondBranchShift &&
               a.branch == Branch::kSecond) {
      h[coord] -= 1.0 + w.pairs[i].delta();
    }
  }
}

absl::StatusOr<NoiseTape> AlignWithMutation(const CheckInput& in,
                                            const OutputSequence& omega) {
  GAPSVT_ASSIGN_OR_RETURN(NoiseTape aligned,
                          Align(in.id, *in.tape, omega, *in.workload));
  ApplyMutation(in.mutation, omega, *in.workload, aligned);
  return aligned;
}

Violation HarnessError(const absl::Status& status) {
  return Violation{kHarnessError, std::string(status.message()), std::nullopt,
                   std::nullopt};
}

// The alignment must reproduce omega on D' exactly (integer workloads) or
// within the gap tolerance.
std::optional<Violation> SoundnessCheck(const CheckInput& in,
                                        Measurements& /*m*/) {
  const Workload& w = *in.workload;
  absl::StatusOr<RunResult> on_d =
      RunMechanism(in.id, w, Side::kD, in.budget, *in.tape);
  if (!on_d.ok()) return HarnessError(on_d.status());
  absl::StatusOr<NoiseTape> aligned = AlignWithMutation(in, on_d->output);
  if (!aligned.ok()) return HarnessError(aligned.status());
  absl::StatusOr<RunResult> on_dprime =
      RunMechanism(in.id, w, Side::kDprime, in.budget, *aligned);
  if (!on_dprime.ok()) return HarnessError(on_dprime.status());
  if (!SameOutput(on_d->output, on_dprime->output, in.exact)) {
    return Violation{kSoundness,
                     absl::StrCat("M(D,H) = ", ToTrace(on_d->output),
                                  " but M(D',phi(H)) = ",
                                  ToTrace(on_dprime->output)),
                     *aligned, on_dprime->output};
  }
  return std::nullopt;
}

std::optional<Violation> CostCheck(const CheckInput& in, Measurements& m) {
  const Workload& w = *in.workload;
  absl::StatusOr<RunResult> run =
      RunMechanism(in.id, w, Side::kD, in.budget, *in.tape);
  if (!run.ok()) return HarnessError(run.status());
  absl::StatusOr<NoiseTape> aligned = AlignWithMutation(in, run->output);
  if (!aligned.ok()) return HarnessError(aligned.status());
  const CostWeights weights = WeightsFor(in.budget);
  absl::StatusOr<double> cost = AlignmentCost(*in.tape, *aligned, weights);
  if (!cost.ok()) return HarnessError(cost.status());
  m.max_cost = std::max(m.max_cost, *cost);

  const double epsilon = std::holds_alternative<SvtBudget>(in.budget)
                             ? std::get<SvtBudget>(in.budget).epsilon
                             : std::get<AdaptiveBudget>(in.budget).epsilon;
  if (*cost > epsilon + kCostTolerance) {
    return Violation{kCostBound,
                     absl::StrCat("alignment cost ", *cost, " exceeds epsilon ",
                                  epsilon),
                     *aligned, std::nullopt};
  }
  const IndexSets sets = ComputeIndexSets(run->output);
  const double closed = ClosedFormCost(sets, w, weights);
  const bool closed_ok = in.exact ? closed == *cost
                                  : std::abs(closed - *cost) <= kCostTolerance;
  if (!closed_ok) {
    return Violation{kClosedForm,
                     absl::StrCat("closed-form cost ", closed,
                                  " differs from weighted L1 ", *cost),
                     *aligned, std::nullopt};
  }
  if (run->ledger.has_value()) {
    const CostLedger& ledger = *run->ledger;
    const double formula = CostLedger::CostFormula(
        ledger.budget, static_cast<int>(sets.top_first.size()),
        static_cast<int>(sets.top_second.size()));
    if (ledger.running_cost() != formula) {
      return Violation{kLedgerIdentity,
                       absl::StrCat("ledger cost ", ledger.running_cost(),
                                    " != eps0 + 2eps1|I| + 2eps2|J| = ",
                                    formula),
                       std::nullopt, std::nullopt};
    }
    const double guard = ledger.budget.epsilon - 2.0 * ledger.budget.epsilon2;
    for (const LedgerEvent& e : ledger.events) {
      if (e.cost_before > guard) {
        return Violation{kLedgerGuard,
                         absl::StrCat("query ", e.query_index,
                                      " processed at cost ", e.cost_before,
                                      " above the guard ", guard),
                         std::nullopt, std::nullopt};
      }
    }
  }
  return std::nullopt;
}

std::optional<Violation> StructuralCheck(const CheckInput& in,
                                         Measurements& m) {
  const Workload& w = *in.workload;
  const NoiseTape& tape = *in.tape;
  absl::StatusOr<RunResult> run =
      RunMechanism(in.id, w, Side::kD, in.budget, tape);
  if (!run.ok()) return HarnessError(run.status());

  if (run->processed > w.pairs.size() ||
      run->output.size() != run->processed) {
    return Violation{kTermination,
                     absl::StrCat("processed ", run->processed, " of ",
                                  w.pairs.size(), " queries, output length ",
                                  run->output.size()),
                     std::nullopt, run->output};
  }
  const size_t expected_consumed =
      tape.layout() == TapeLayout::kSingle ? 1 + run->output.size()
                                           : 1 + 2 * run->processed;
  if (run->consumed != expected_consumed) {
    return Violation{kConsumedLength,
                     absl::StrCat("consumed ", run->consumed,
                                  " tape entries, expected ",
                                  expected_consumed),
                     std::nullopt, run->output};
  }

  absl::StatusOr<NoiseTape> aligned = AlignWithMutation(in, run->output);
  if (!aligned.ok()) return HarnessError(aligned.status());
  absl::StatusOr<AlignmentShift> shift = ShiftBetween(tape, *aligned);
  if (!shift.ok()) return HarnessError(shift.status());
  const AlignmentShift rebuilt =
      ShiftFromIndexSets(ComputeIndexSets(run->output), w, tape.layout(),
                         tape.num_queries());
  if (!SameShift(*shift, rebuilt, in.exact)) {
    return Violation{kShiftFromIndexSets,
                     "phi(H) - H is not determined by (I, J, Delta)", *aligned,
                     run->output};
  }

  if (in.second_tape != nullptr) {
    absl::StatusOr<RunResult> other =
        RunMechanism(in.id, w, Side::kD, in.budget, *in.second_tape);
    if (!other.ok()) return HarnessError(other.status());
    if (other->output == run->output) {
      ++m.equal_output_pairs;
      CheckInput second = in;
      second.tape = in.second_tape;
      absl::StatusOr<NoiseTape> other_aligned =
          AlignWithMutation(second, other->output);
      if (!other_aligned.ok()) return HarnessError(other_aligned.status());
      absl::StatusOr<AlignmentShift> other_shift =
          ShiftBetween(*in.second_tape, *other_aligned);
      if (!other_shift.ok()) return HarnessError(other_shift.status());
      if (!SameShift(*shift, *other_shift, in.exact)) {
        return Violation{kEqualOutputShift,
                         "two tapes with the same output got different shifts",
                         *other_aligned, other->output};
      }
    }
  }

  absl::StatusOr<RunResult> prefix = RunMechanism(
      in.id, w, Side::kD, in.budget, tape.Truncated(run->processed));
  if (!prefix.ok() || prefix->output != run->output) {
    return Violation{kPrefixDeterminism,
                     prefix.ok() ? "truncated tape changed the output"
                                 : std::string(prefix.status().message()),
                     std::nullopt, std::nullopt};
  }

  if (in.id != MechanismId::kAdaptiveGap) {
    absl::StatusOr<RunResult> gap = SvtGapRun(w, Side::kD, tape);
    absl::StatusOr<RunResult> classic = SvtClassicRun(w, Side::kD, tape);
    if (!gap.ok()) return HarnessError(gap.status());
    if (!classic.ok()) return HarnessError(classic.status());
    if (EraseGaps(gap->output) != classic->output) {
      return Violation{kClassicGapCoupling,
                       absl::StrCat("erase_gaps(", ToTrace(gap->output),
                                    ") != ", ToTrace(classic->output)),
                       std::nullopt, classic->output};
    }
  }
  return std::nullopt;
}

using CheckFn = std::function<std::optional<Violation>(const CheckInput&,
                                                       Measurements&)>;

NoiseKind TrialNoise(const TrialPlan& plan) {
  return plan.generator.integer_values ? NoiseKind::kDiscreteLaplace
                                       : NoiseKind::kContinuousLaplace;
}

// One trial: generate a workload, draw tapes, run `check` in both
// orientations. Returns a single-trial report.
PrivacyReport RunTrial(const TrialPlan& plan, int64_t trial,
                       const CheckFn& check, bool use_second_tape) {
  PrivacyReport report;
  report.trials = 1;
  const uint64_t seed = DeriveSeed(plan.seed, static_cast<uint64_t>(trial));
  std::mt19937_64 rng(seed);
  const Workload base = GenerateWorkload(plan.generator, plan.mechanism, rng);

  auto fail = [&](const Workload& w, const NoiseTape& tape,
                  const OutputSequence& expected, Violation v) {
    report.pass = false;
    ++report.violations;
    if (report.witness.has_value()) return;
    Witness witness;
    witness.trial = trial;
    witness.seed = seed;
    witness.check = std::move(v.check);
    witness.detail = std::move(v.detail);
    witness.workload = w;
    witness.tape = tape;
    witness.aligned = std::move(v.aligned);
    witness.expected = expected;
    witness.observed = std::move(v.observed);
    report.witness = std::move(witness);
  };

  absl::StatusOr<MechanismBudget> budget = DefaultBudget(plan.mechanism, base);
  if (!budget.ok()) {
    fail(base, NoiseTape(), OutputSequence(), HarnessError(budget.status()));
    return report;
  }
  const NoiseSpec spec = NoiseSpecFor(*budget, TrialNoise(plan));
  absl::StatusOr<NoiseTape> tape =
      SampleTape(spec, base.pairs.size(), DeriveSeed(seed, 1));
  absl::StatusOr<NoiseTape> second =
      SampleTape(spec, base.pairs.size(), DeriveSeed(seed, 2));
  if (!tape.ok() || !second.ok()) {
    fail(base, NoiseTape(), OutputSequence(),
         HarnessError(tape.ok() ? second.status() : tape.status()));
    return report;
  }

  Measurements m;
  for (const Workload& w : {base, base.Swapped()}) {
    CheckInput in{plan.mechanism,
                  &w,
                  *budget,
                  &*tape,
                  use_second_tape ? &*second : nullptr,
                  plan.mutation,
                  plan.generator.integer_values};
    if (std::optional<Violation> v = check(in, m)) {
      absl::StatusOr<RunResult> run =
          RunMechanism(plan.mechanism, w, Side::kD, *budget, *tape);
      fail(w, *tape, run.ok() ? run->output : OutputSequence(), *std::move(v));
    }
  }
  report.max_cost = m.max_cost;
  report.equal_output_pairs = m.equal_output_pairs;
  return report;
}

PrivacyReport RunTrials(const TrialPlan& plan, const std::string& suite,
                        std::vector<std::string> checks, const CheckFn& check,
                        bool use_second_tape) {
  PrivacyReport report;
  report.suite = suite;
  report.mechanism = plan.mechanism;
  report.checks = std::move(checks);
  if (absl::Status s = ValidatePlan(plan); !s.ok()) {
    report.pass = false;
    report.notes.push_back(std::string(s.message()));
    return report;
  }

#pragma omp parallel if (plan.policy == ExecutionPolicy::kParallel)
  {
    PrivacyReport local;
#pragma omp for schedule(dynamic, 256)
    for (int64_t t = 0; t < plan.trials; ++t) {
      MergeReports(local, RunTrial(plan, t, check, use_second_tape));
    }
#pragma omp critical(gapsvt_trial_merge)
    MergeReports(report, local);
  }
  if (plan.mutation != AlignmentMutation::kNone) {
    report.notes.push_back(
        absl::StrCat("self-test mutation: ", MutationName(plan.mutation)));
  }
  return report;
}

std::optional<Violation> ReplayCheck(const std::string& check,
                                     const CheckInput& in) {
  Measurements m;
  if (check == kSoundness) return SoundnessCheck(in, m);
  if (check == kCostBound || check == kClosedForm ||
      check == kLedgerIdentity || check == kLedgerGuard) {
    return CostCheck(in, m);
  }
  return StructuralCheck(in, m);
}

}  // namespace

const char* MutationName(AlignmentMutation m) {
  switch (m) {
    case AlignmentMutation::kNone:
      return "none";
    case AlignmentMutation::kThresholdShiftTwo:
      return "threshold-shift=2";
    case AlignmentMutation::kDropUnitShift:
      return "branch-shift=drop-unit";
    case AlignmentMutation::kMissingSecondBranchShift:
      return "missing-j-term";
  }
  return "none";
}

Workload GenerateWorkload(const WorkloadGenerator& gen, MechanismId id,
                          std::mt19937_64& rng) {
  auto uniform_int = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto uniform_real = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const bool boundary =
      std::uniform_real_distribution<double>(0.0, 1.0)(rng) <
      gen.boundary_fraction;

  Workload w;
  w.threshold = gen.threshold;
  w.k = uniform_int(gen.k_min, gen.k_max);
  w.epsilon = uniform_real(gen.epsilon_lo, gen.epsilon_hi);
  if (id == MechanismId::kAdaptiveGap) {
    w.sigma = static_cast<double>(uniform_int(gen.sigma_lo, gen.sigma_hi));
  }
  const int n = uniform_int(gen.min_queries, gen.max_queries);
  w.pairs.reserve(n);
  for (int i = 0; i < n; ++i) {
    double value;
    double delta;
    if (gen.integer_values) {
      value = boundary
                  ? std::round(gen.threshold) + uniform_int(-2, 2)
                  : static_cast<double>(uniform_int(gen.value_lo, gen.value_hi));
      delta = boundary ? (uniform_int(0, 1) == 0 ? -1.0 : 1.0)
                       : static_cast<double>(uniform_int(-1, 1));
    } else {
      value = boundary ? gen.threshold + uniform_real(-2.0, 2.0)
                       : uniform_real(gen.value_lo, gen.value_hi);
      delta = boundary ? (uniform_int(0, 1) == 0 ? -1.0 : 1.0)
                       : uniform_real(-1.0, 1.0);
    }
    if (gen.max_shift) delta = 1.0;
    w.pairs.push_back(QueryPair{value, value - delta});
  }
  return w;
}

absl::Status ValidatePlan(const TrialPlan& plan) {
  const WorkloadGenerator& g = plan.generator;
  if (plan.trials < 1) {
    return absl::InvalidArgumentError("trial count must be >= 1");
  }
  if (g.min_queries < 1 || g.max_queries < g.min_queries ||
      g.value_hi < g.value_lo || g.k_min < 1 || g.k_max < g.k_min ||
      !(g.epsilon_lo > 0.0) || g.epsilon_hi < g.epsilon_lo || g.sigma_lo < 0 ||
      g.sigma_hi < g.sigma_lo || g.boundary_fraction < 0.0 ||
      g.boundary_fraction > 1.0) {
    return absl::InvalidArgumentError("inconsistent workload generator ranges");
  }
  return absl::OkStatus();
}

void MergeReports(PrivacyReport& into, const PrivacyReport& other) {
  into.pass = into.pass && other.pass;
  into.trials += other.trials;
  into.violations += other.violations;
  into.max_cost = std::max(into.max_cost, other.max_cost);
  into.truncation_loss = std::max(into.truncation_loss, other.truncation_loss);
  into.equal_output_pairs += other.equal_output_pairs;
  auto merge_max = [](std::optional<double>& a, const std::optional<double>& b) {
    if (b.has_value()) a = a.has_value() ? std::max(*a, *b) : *b;
  };
  merge_max(into.max_log_ratio, other.max_log_ratio);
  merge_max(into.max_raw_log_ratio, other.max_raw_log_ratio);
  if (other.witness.has_value() &&
      (!into.witness.has_value() || other.witness->trial < into.witness->trial)) {
    into.witness = other.witness;
  }
}

PrivacyReport CheckAlignmentSoundness(const TrialPlan& plan) {
  return RunTrials(plan, "align", {kSoundness}, SoundnessCheck,
                   /*use_second_tape=*/false);
}

PrivacyReport CheckCostBound(const TrialPlan& plan) {
  std::vector<std::string> checks = {kCostBound, kClosedForm};
  if (plan.mechanism == MechanismId::kAdaptiveGap) {
    checks.push_back(kLedgerIdentity);
    checks.push_back(kLedgerGuard);
  }
  return RunTrials(plan, "cost", std::move(checks), CostCheck,
                   /*use_second_tape=*/false);
}

PrivacyReport CheckStructuralConditions(const TrialPlan& plan) {
  std::vector<std::string> checks = {kTermination, kConsumedLength,
                                     kShiftFromIndexSets, kEqualOutputShift,
                                     kPrefixDeterminism};
  if (plan.mechanism != MechanismId::kAdaptiveGap) {
    checks.push_back(kClassicGapCoupling);
  }
  PrivacyReport report = RunTrials(plan, "structural", std::move(checks),
                                   StructuralCheck, /*use_second_tape=*/true);
  report.notes.push_back(
      "acyclicity is witnessed by the constant-shift check; the remaining "
      "measurability condition is not machine-checked");
  return report;
}

bool ReplayWitness(MechanismId id, const Witness& witness,
                   AlignmentMutation mutation) {
  absl::StatusOr<MechanismBudget> budget = DefaultBudget(id, witness.workload);
  if (!budget.ok()) return witness.check == kHarnessError;
  // The equal-output check compares against a second tape, which is
  // re-drawn from the recorded trial seed.
  std::optional<NoiseTape> second;
  if (witness.check == kEqualOutputShift) {
    const NoiseSpec spec = NoiseSpecFor(
        *budget, IsIntegral(witness.tape) ? NoiseKind::kDiscreteLaplace
                                          : NoiseKind::kContinuousLaplace);
    absl::StatusOr<NoiseTape> t = SampleTape(
        spec, witness.workload.pairs.size(), DeriveSeed(witness.seed, 2));
    if (!t.ok()) return false;
    second = *std::move(t);
  }
  CheckInput in{id,
                &witness.workload,
                *budget,
                &witness.tape,
                second.has_value() ? &*second : nullptr,
                mutation,
                IsIntegerWorkload(witness.workload) && IsIntegral(witness.tape)};
  std::optional<Violation> v = ReplayCheck(witness.check, in);
  return v.has_value() && v->check == witness.check;
}

absl::StatusOr<PrivacyReport> CheckExactPrivacy(MechanismId id,
                                                const Workload& w,
                                                std::optional<EnumerationBox> box,
                                                uint64_t grid_budget,
                                                ExecutionPolicy policy) {
  GAPSVT_RETURN_IF_ERROR(CheckWorkload(w));
  GAPSVT_ASSIGN_OR_RETURN(MechanismBudget budget, DefaultBudget(id, w));
  const NoiseSpec spec = NoiseSpecFor(budget, NoiseKind::kDiscreteLaplace);
  const EnumerationBox used =
      box.value_or(EnumerationBox::ForTail(spec, kDefaultPerDrawTail));
  GAPSVT_ASSIGN_OR_RETURN(
      OutputDistribution p,
      EnumerateOutputDist(id, w, Side::kD, budget, used, grid_budget, policy));
  GAPSVT_ASSIGN_OR_RETURN(OutputDistribution q,
                          EnumerateOutputDist(id, w, Side::kDprime, budget,
                                              used, grid_budget, policy));
  GAPSVT_ASSIGN_OR_RETURN(PrivacyLoss loss, MaxPrivacyLoss(p, q));

  PrivacyReport report;
  report.suite = "dp-exact";
  report.mechanism = id;
  report.trials = 1;
  report.checks = {"max-padded-log-ratio", "truncation-loss"};
  report.max_log_ratio = loss.padded;
  report.max_raw_log_ratio = loss.raw;
  report.truncation_loss = loss.padding_tau;
  report.notes.push_back(absl::StrCat("grid points per side: ", p.grid_points,
                                      "; outputs: ", p.masses.size(), " / ",
                                      q.masses.size()));
  const bool ratio_ok = loss.padded <= w.epsilon + kCostTolerance;
  const bool truncation_ok = loss.padding_tau < kMaxTruncationLoss;
  if (!ratio_ok || !truncation_ok) {
    report.pass = false;
    report.violations = 1;
    Witness witness;
    witness.trial = 0;
    witness.check = ratio_ok ? "truncation-loss" : "max-padded-log-ratio";
    witness.workload = w;
    if (loss.worst_output.has_value()) {
      witness.expected = Decanonicalize(*loss.worst_output);
    }
    witness.detail =
        absl::StrCat("padded log-ratio ", loss.padded, " vs epsilon ",
                     w.epsilon, "; truncation loss ", loss.padding_tau);
    report.witness = std::move(witness);
  }
  return report;
}

std::vector<ExactInstance> StandardExactInstances() {
  auto make = [](MechanismId id, std::vector<QueryPair> pairs, double t, int k,
                 double eps, std::optional<double> sigma = std::nullopt) {
    return ExactInstance{id, Workload{std::move(pairs), t, k, eps, sigma}};
  };
  const MechanismId gap = MechanismId::kSvtGap;
  const MechanismId svt = MechanismId::kSvt;
  const MechanismId ada = MechanismId::kAdaptiveGap;
  return {
      make(gap, {{1, 0}, {0, 1}}, 0, 1, 1.0),
      make(gap, {{1, 0}}, 0, 1, 1.0),
      make(gap, {{0, 1}}, 0, 1, 1.0),
      make(gap, {{2, 1}, {1, 2}}, 1, 1, 1.0),
      make(gap, {{0, 1}, {0, 1}}, 0, 1, 2.0),
      make(gap, {{1, 0}, {1, 0}}, 0, 2, 2.0),
      make(gap, {{3, 2}, {0, 0}}, 2, 1, 1.0),
      make(gap, {{0, 0}, {5, 4}}, 3, 1, 1.5),
      make(gap, {{1, 1}, {1, 1}}, 0, 1, 1.0),
      make(gap, {{2, 3}}, 0, 1, 0.5),
      make(gap, {{4, 3}, {3, 4}}, 3, 2, 2.0),
      make(svt, {{1, 0}, {0, 1}}, 0, 1, 1.0),
      make(svt, {{1, 0}, {1, 0}}, 0, 2, 2.0),
      make(ada, {{10, 9}}, 4, 1, 1.0, 2.0),
      make(ada, {{5, 4}}, 4, 1, 1.0, 2.0),
      make(ada, {{0, 1}}, 0, 1, 1.0, 1.0),
      make(ada, {{1, 0}}, 0, 1, 2.0, 0.0),
      make(ada, {{3, 2}}, 2, 1, 2.0, 3.0),
      make(ada, {{0, 0}}, 0, 1, 1.0, 2.0),
      make(ada, {{2, 3}}, 1, 1, 4.0, 1.0),
      make(ada, {{1, 2}}, 0, 2, 2.0, 2.0),
      make(ada, {{1, 0}, {0, 1}}, 0, 1, 8.0, 1.0),
  };
}

ExactInstance MonteCarloSelfTestInstance() {
  return ExactInstance{MechanismId::kSvtGap,
                       Workload{{{0, 1}, {0, 1}, {1, 0}}, 1, 1, 8.0,
                                std::nullopt}};
}

std::pair<double, double> WilsonInterval(int64_t successes, int64_t n,
                                         double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      z / denom * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

absl::StatusOr<MonteCarloReport> McPrivacyEstimate(
    MechanismId id, const Workload& w, int64_t samples, uint64_t seed,
    NoiseKind kind, double scale_factor, double z, ExecutionPolicy policy) {
  GAPSVT_RETURN_IF_ERROR(CheckWorkload(w));
  if (samples < 10'000) {
    return absl::InvalidArgumentError("Monte Carlo needs at least 1e4 samples");
  }
  GAPSVT_ASSIGN_OR_RETURN(MechanismBudget budget, DefaultBudget(id, w));
  GAPSVT_ASSIGN_OR_RETURN(
      EmpiricalDistribution d,
      SampleOutputDist(id, w, Side::kD, budget, kind, samples,
                       DeriveSeed(seed, 0), scale_factor, policy));
  GAPSVT_ASSIGN_OR_RETURN(
      EmpiricalDistribution dp,
      SampleOutputDist(id, w, Side::kDprime, budget, kind, samples,
                       DeriveSeed(seed, 1), scale_factor, policy));

  MonteCarloReport report;
  report.samples = samples;
  std::set<CanonicalOutput> outputs;
  for (const auto& [o, c] : d.counts) outputs.insert(o);
  for (const auto& [o, c] : dp.counts) outputs.insert(o);
  for (const CanonicalOutput& o : outputs) {
    const auto it_d = d.counts.find(o);
    const auto it_dp = dp.counts.find(o);
    const int64_t cd = it_d == d.counts.end() ? 0 : it_d->second;
    const int64_t cdp = it_dp == dp.counts.end() ? 0 : it_dp->second;
    const auto [d_lo, d_hi] = WilsonInterval(cd, samples, z);
    const auto [dp_lo, dp_hi] = WilsonInterval(cdp, samples, z);
    double lower = 0.0;
    if (d_lo > 0.0) lower = std::max(lower, std::log(d_lo / dp_hi));
    if (dp_lo > 0.0) lower = std::max(lower, std::log(dp_lo / d_hi));
    report.max_lower_log_ratio = std::max(report.max_lower_log_ratio, lower);
    if (cd > 0 && cdp > 0) {
      report.max_point_log_ratio =
          std::max(report.max_point_log_ratio,
                   std::abs(std::log(static_cast<double>(cd) /
                                     static_cast<double>(cdp))));
    }
    if (lower > w.epsilon) {
      report.flagged.push_back(FlaggedOutput{o, cd, cdp, lower});
    }
  }
  return report;
}

}  // namespace gapsvt
