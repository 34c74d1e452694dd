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

// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "gapsvt/budget.h"
#include "gapsvt/cli.h"
#include "gapsvt/enumeration.h"
#include "gapsvt/mechanisms.h"
#include "gapsvt/verifier.h"

namespace gapsvt {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

constexpr MechanismId kAllMechanisms[] = {
    MechanismId::kSvt, MechanismId::kSvtGap, MechanismId::kAdaptiveGap};

void Fail(Outcome& o, const std::string& why) {
  o.pass = false;
  absl::StrAppend(&o.detail, o.detail.empty() ? "" : "; ", why);
}

TrialPlan Plan(MechanismId id, int64_t trials, uint64_t seed,
               AlignmentMutation mutation = AlignmentMutation::kNone) {
  TrialPlan plan;
  plan.mechanism = id;
  plan.trials = trials;
  plan.seed = seed;
  plan.mutation = mutation;
  return plan;
}

Outcome Budgets() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> eps(1e-3, 100.0);
  std::uniform_int_distribution<int> k(1, 1000);
  for (int i = 0; i < 1000; ++i) {
    const double e = eps(rng);
    const int kk = k(rng);
    absl::StatusOr<SvtBudget> s = SplitSvtBudget(e, kk);
    absl::StatusOr<AdaptiveBudget> a = SplitAdaptiveBudget(e, kk);
    if (!s.ok() || !a.ok()) {
      Fail(o, absl::StrCat("split failed at eps=", e, " k=", kk));
      continue;
    }
    if (s->epsilon0 + 2.0 * kk * s->epsilon1 != e) {
      Fail(o, absl::StrCat("svt identity off at eps=", e, " k=", kk));
    }
    if (a->epsilon0 + 2.0 * kk * a->epsilon2 != e ||
        !(a->epsilon1 <= a->epsilon2)) {
      Fail(o, absl::StrCat("adaptive identity off at eps=", e, " k=", kk));
    }
  }
  if (o.pass) o.detail = "1000 random (eps, k): both identities exact";
  return o;
}

Outcome Soundness() {
  Outcome o;
  std::vector<std::string> parts;
  for (MechanismId id : kAllMechanisms) {
    const PrivacyReport r = CheckAlignmentSoundness(Plan(id, 100'000, 2));
    if (!r.pass) {
      Fail(o, absl::StrCat(std::string(MechanismName(id)), ": ", r.violations,
                           " violations; ",
                           r.witness ? r.witness->detail : ""));
    }
    parts.push_back(absl::StrCat(std::string(MechanismName(id)), " 1e5 trials ok"));
  }
  const std::pair<MechanismId, AlignmentMutation> mutations[] = {
      {MechanismId::kSvtGap, AlignmentMutation::kThresholdShiftTwo},
      {MechanismId::kSvtGap, AlignmentMutation::kDropUnitShift},
      {MechanismId::kAdaptiveGap, AlignmentMutation::kThresholdShiftTwo},
      {MechanismId::kAdaptiveGap, AlignmentMutation::kDropUnitShift},
      {MechanismId::kAdaptiveGap, AlignmentMutation::kMissingSecondBranchShift},
  };
  for (const auto& [id, m] : mutations) {
    const PrivacyReport r = CheckAlignmentSoundness(Plan(id, 10'000, 3, m));
    if (r.pass || !r.witness.has_value()) {
      Fail(o, absl::StrCat(MutationName(m), " undetected on ",
                           std::string(MechanismName(id))));
    } else if (!ReplayWitness(id, *r.witness, m)) {
      Fail(o, absl::StrCat(MutationName(m), " witness does not replay"));
    }
  }
  if (o.pass) {
    o.detail = absl::StrCat(parts[0], ", ", parts[1], ", ", parts[2],
                            "; 3 mutations detected within 1e4 trials");
  }
  return o;
}

Outcome CostAndLedger() {
  Outcome o;
  double worst_excess = -1.0;
  for (MechanismId id : kAllMechanisms) {
    const PrivacyReport r = CheckCostBound(Plan(id, 100'000, 2));
    if (!r.pass) {
      Fail(o, absl::StrCat(std::string(MechanismName(id)), ": ",
                           r.witness ? r.witness->check + " " +
                                           r.witness->detail
                                     : ""));
    }
    worst_excess = std::max(worst_excess, r.max_cost - 2.0);
  }
  if (o.pass) {
    o.detail = absl::StrCat(
        "1e5 trials per mechanism: cost <= eps (+1e-12), closed form, ledger "
        "identity and guard hold; max cost ",
        2.0 + worst_excess, " at eps <= 2");
  }
  return o;
}

Outcome ExactPrivacy() {
  Outcome o;
  const std::vector<ExactInstance> instances = StandardExactInstances();
  double truncation = 0.0;
  double worst_slack = 1e300;
  for (const ExactInstance& inst : instances) {
    absl::StatusOr<PrivacyReport> r =
        CheckExactPrivacy(inst.mechanism, inst.workload);
    if (!r.ok()) {
      Fail(o, std::string(r.status().message()));
      continue;
    }
    truncation += r->truncation_loss;
    if (!r->pass) {
      Fail(o, r->witness ? r->witness->detail : "failed");
      continue;
    }
    worst_slack =
        std::min(worst_slack, inst.workload.epsilon - *r->max_log_ratio);
  }
  if (instances.size() < 20) Fail(o, "fewer than 20 instances");
  if (truncation >= 1e-9) {
    Fail(o, absl::StrCat("total truncation loss ", truncation));
  }
  if (o.pass) {
    o.detail = absl::StrCat(instances.size(),
                            " instances within eps; min slack ", worst_slack,
                            "; total truncation loss ", truncation);
  }
  return o;
}

Outcome OracleCrossCheck() {
  Outcome o;
  const ExactInstance instances[] = {
      {MechanismId::kSvtGap, Workload{{{1, 0}, {0, 1}}, 0, 1, 1.0, {}}},
      {MechanismId::kSvt, Workload{{{1, 0}, {1, 0}}, 0, 2, 2.0, {}}},
      {MechanismId::kAdaptiveGap, Workload{{{3, 2}}, 2, 1, 2.0, 3.0}},
  };
  std::string tvs;
  uint64_t seed = 10;
  for (const ExactInstance& inst : instances) {
    absl::StatusOr<MechanismBudget> budget =
        DefaultBudget(inst.mechanism, inst.workload);
    const EnumerationBox box = EnumerationBox::ForTail(
        NoiseSpecFor(*budget, NoiseKind::kDiscreteLaplace),
        kDefaultPerDrawTail);
    absl::StatusOr<OutputDistribution> exact = EnumerateOutputDist(
        inst.mechanism, inst.workload, Side::kD, *budget, box);
    absl::StatusOr<EmpiricalDistribution> mc = SampleOutputDist(
        inst.mechanism, inst.workload, Side::kD, *budget,
        NoiseKind::kDiscreteLaplace, 10'000'000, seed++);
    if (!exact.ok() || !mc.ok()) {
      Fail(o, "enumeration or sampling failed");
      continue;
    }
    const double tv = TotalVariation(*exact, *mc);
    absl::StrAppend(&tvs, tvs.empty() ? "" : ", ",
                    std::string(MechanismName(inst.mechanism)), " TV=", tv);
    if (!(tv < 3e-3)) Fail(o, absl::StrCat("TV ", tv, " >= 3e-3"));
  }
  if (o.pass) o.detail = absl::StrCat("1e7 samples each: ", tvs);
  return o;
}

Outcome Structural() {
  Outcome o;
  int64_t equal_pairs = 0;
  for (MechanismId id : kAllMechanisms) {
    const PrivacyReport r = CheckStructuralConditions(Plan(id, 100'000, 4));
    if (!r.pass) {
      Fail(o, absl::StrCat(std::string(MechanismName(id)), ": ",
                           r.witness ? r.witness->check + " " +
                                           r.witness->detail
                                     : ""));
    }
    equal_pairs += r.equal_output_pairs;
  }
  if (o.pass) {
    o.detail = absl::StrCat(
        "1e5 trials per mechanism: consumed length, shift from (I, J, Delta), "
        "classic/gap coupling; ",
        equal_pairs, " equal-output tape pairs shared a shift");
  }
  return o;
}

Outcome GoldenTraces() {
  Outcome o;
  const std::string dir = "/tmp";
  struct Golden {
    const char* mechanism;
    const char* workload;
    const char* tape;
    const char* answers;
  };
  const Golden goldens[] = {
      {"svt-gap",
       R"({"pairs": [[5,5],[3,3],[7,7]], "threshold": 4, "k": 2, "epsilon": 1})",
       R"({"threshold": 0, "queries": [0, 0, 0]})",
       R"("answers":[{"gap":1.0,"branch":"plain"},{"bot":true},{"gap":3.0,"branch":"plain"}])"},
      {"svt-gap",
       R"({"pairs": [[5,5],[3,3],[7,7]], "threshold": 4, "k": 1, "epsilon": 1})",
       R"({"threshold": 0, "queries": [0, 0, 0]})",
       R"("answers":[{"gap":1.0,"branch":"plain"}])"},
      {"svt-gap",
       R"({"pairs": [[5,5]], "threshold": 4, "k": 1, "epsilon": 1})",
       R"({"threshold": -2, "queries": [0]})",
       R"("answers":[{"gap":3.0,"branch":"plain"}])"},
      {"adaptive-gap",
       R"({"pairs": [[10,10]], "threshold": 4, "k": 1, "epsilon": 1, "sigma": 2})",
       R"({"threshold": 0, "queries": [[0, 0]]})",
       R"("answers":[{"gap":6.0,"branch":"first"}])"},
      {"adaptive-gap",
       R"({"pairs": [[5,5]], "threshold": 4, "k": 1, "epsilon": 1, "sigma": 2})",
       R"({"threshold": 0, "queries": [[0, 0]]})",
       R"("answers":[{"gap":1.0,"branch":"second"}])"},
      {"adaptive-gap",
       R"({"pairs": [[0,0],[0,0]], "threshold": 4, "k": 1, "epsilon": 1, "sigma": 2})",
       R"({"threshold": 0, "queries": [[0, 0], [0, 0]]})",
       R"("answers":[{"bot":true,"gap":0},{"bot":true,"gap":0}])"},
  };
  int n = 0;
  for (const Golden& g : goldens) {
    const std::string w = absl::StrCat(dir, "/gapsvt_acceptance_w", n, ".json");
    const std::string t = absl::StrCat(dir, "/gapsvt_acceptance_t", n, ".json");
    ++n;
    std::FILE* f = std::fopen(w.c_str(), "w");
    std::fputs(g.workload, f);
    std::fclose(f);
    f = std::fopen(t.c_str(), "w");
    std::fputs(g.tape, f);
    std::fclose(f);
    std::ostringstream out;
    std::ostringstream err;
    const int code = RunCli(
        {"run", "--mechanism", g.mechanism, "--workload", w, "--tape", t}, out,
        err);
    if (code != kExitPass || out.str().find(g.answers) == std::string::npos) {
      Fail(o, absl::StrCat(g.mechanism, " golden ", n, ": ", out.str(),
                           err.str()));
    }
  }
  if (o.pass) o.detail = "6 zero-noise traces reproduced bit-exactly";
  return o;
}

}  // namespace
}  // namespace gapsvt

int main() {
  using Clock = std::chrono::steady_clock;
  const std::pair<const char*, std::function<gapsvt::Outcome()>> criteria[] = {
      {"AC1 budget identities", gapsvt::Budgets},
      {"AC2 alignment soundness", gapsvt::Soundness},
      {"AC3 cost bound and ledger", gapsvt::CostAndLedger},
      {"AC4 exact privacy on enumerable instances", gapsvt::ExactPrivacy},
      {"AC5 enumeration vs Monte Carlo", gapsvt::OracleCrossCheck},
      {"AC6 structural conditions", gapsvt::Structural},
      {"AC7 zero-noise golden traces", gapsvt::GoldenTraces},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    const auto start = Clock::now();
    const gapsvt::Outcome o = run();
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
