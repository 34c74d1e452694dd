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

#ifndef GAPSVT_VERIFIER_H_
#define GAPSVT_VERIFIER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "gapsvt/answer.h"
#include "gapsvt/enumeration.h"
#include "gapsvt/execution.h"
#include "gapsvt/mechanisms.h"
#include "gapsvt/noise.h"
#include "gapsvt/workload.h"

namespace gapsvt {

// Deliberate alignment bugs for checking that the harness can fail.
enum class AlignmentMutation {
  kNone,
  // eta' = eta + 2 instead of eta + 1.
  kThresholdShiftTwo,
  // Positive-answer coordinates shifted by Delta_i instead of 1 + Delta_i.
  kDropUnitShift,
  // Second-branch coordinates left unshifted (adaptive only).
  kMissingSecondBranchShift,
};

const char* MutationName(AlignmentMutation m);

// Random workload family. Integer workloads are paired with discrete
// Laplace tapes so alignments can be compared exactly; real workloads use
// continuous Laplace and a 1e-9 gap tolerance.
struct WorkloadGenerator {
  int min_queries = 1;
  int max_queries = 8;
  int value_lo = 0;
  int value_hi = 20;
  double threshold = 10.0;
  int k_min = 1;
  int k_max = 3;
  double epsilon_lo = 0.5;
  double epsilon_hi = 2.0;
  int sigma_lo = 0;
  int sigma_hi = 4;
  bool integer_values = true;
  // Fraction of workloads with Delta_i in {-1, +1} and values near T.
  double boundary_fraction = 0.25;
  // Force Delta_i = +1 everywhere.
  bool max_shift = false;
};

Workload GenerateWorkload(const WorkloadGenerator& gen, MechanismId id,
                          std::mt19937_64& rng);

struct TrialPlan {
  MechanismId mechanism = MechanismId::kSvtGap;
  WorkloadGenerator generator;
  int64_t trials = 1000;
  uint64_t seed = 0;
  AlignmentMutation mutation = AlignmentMutation::kNone;
  ExecutionPolicy policy = ExecutionPolicy::kParallel;
};

absl::Status ValidatePlan(const TrialPlan& plan);

// Everything needed to re-run one failed check.
struct Witness {
  int64_t trial = -1;
  uint64_t seed = 0;
  std::string check;
  std::string detail;
  // Oriented so that the failing run is on side D.
  Workload workload;
  NoiseTape tape;
  std::optional<NoiseTape> aligned;
  OutputSequence expected;
  std::optional<OutputSequence> observed;
};

struct PrivacyReport {
  std::string suite;
  MechanismId mechanism = MechanismId::kSvtGap;
  bool pass = true;
  int64_t trials = 0;
  int64_t violations = 0;
  std::vector<std::string> checks;
  double max_cost = 0.0;
  std::optional<double> max_log_ratio;
  std::optional<double> max_raw_log_ratio;
  double truncation_loss = 0.0;
  // Trials where a second tape produced the same output (countability).
  int64_t equal_output_pairs = 0;
  std::optional<Witness> witness;
  std::vector<std::string> notes;
};

// Folds `other` into `into`: sums, maxima, and the witness with the lowest
// trial index. Associative and order independent.
void MergeReports(PrivacyReport& into, const PrivacyReport& other);

// M(D', phi(H)) == M(D, H) in both orientations.
PrivacyReport CheckAlignmentSoundness(const TrialPlan& plan);

// alignment_cost(H, phi(H)) <= eps, closed form == weighted L1, and for the
// adaptive mechanism the ledger identity and the pre-query guard.
PrivacyReport CheckCostBound(const TrialPlan& plan);

// Termination, consumed-tape length, shift determined by (I, J, Delta),
// equal outputs giving equal shifts, prefix determinism and classic/gap
// coupling.
PrivacyReport CheckStructuralConditions(const TrialPlan& plan);

// Re-runs the witness's check from its recorded workload and tape. True when
// the failure reproduces.
bool ReplayWitness(MechanismId id, const Witness& witness,
                   AlignmentMutation mutation);

inline constexpr double kCostTolerance = 1e-12;
inline constexpr double kGapTolerance = 1e-9;
inline constexpr double kMaxTruncationLoss = 1e-9;

// Enumerates both sides under discrete Laplace noise and compares the
// padded privacy loss with epsilon. Box defaults to per-draw tail 1e-12.
absl::StatusOr<PrivacyReport> CheckExactPrivacy(
    MechanismId id, const Workload& w,
    std::optional<EnumerationBox> box = std::nullopt,
    uint64_t grid_budget = kDefaultGridBudget,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct ExactInstance {
  MechanismId mechanism;
  Workload workload;
};

// Small integer workloads that fit the default grid budget.
std::vector<ExactInstance> StandardExactInstances();

// An svt-gap workload (k=1, eps=8, T=1, D=(0,0,1), D'=(1,1,0)) whose true
// loss is about 5.9 but which exceeds eps by a wide margin once the noise
// scales are halved; used to check that the Monte Carlo estimator can fail.
ExactInstance MonteCarloSelfTestInstance();

struct FlaggedOutput {
  CanonicalOutput output;
  int64_t count_d = 0;
  int64_t count_dprime = 0;
  // Lower confidence bound on |log-ratio| from Wilson intervals.
  double lower_log_ratio = 0.0;
};

// A falsification heuristic, not a proof: flags outputs whose empirical
// log-ratio exceeds epsilon beyond the Wilson-interval margin at `z`.
struct MonteCarloReport {
  int64_t samples = 0;
  double max_lower_log_ratio = 0.0;
  double max_point_log_ratio = 0.0;
  std::vector<FlaggedOutput> flagged;
};

absl::StatusOr<MonteCarloReport> McPrivacyEstimate(
    MechanismId id, const Workload& w, int64_t samples, uint64_t seed,
    NoiseKind kind = NoiseKind::kDiscreteLaplace, double scale_factor = 1.0,
    double z = 4.0, ExecutionPolicy policy = ExecutionPolicy::kParallel);

// Wilson score interval for `successes` out of `n`.
std::pair<double, double> WilsonInterval(int64_t successes, int64_t n,
                                         double z);

}  // namespace gapsvt

#endif  // GAPSVT_VERIFIER_H_
