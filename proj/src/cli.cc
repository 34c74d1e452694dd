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

#include "gapsvt/cli.h"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "gapsvt/answer.h"
#include "gapsvt/budget.h"
#include "gapsvt/enumeration.h"
#include "gapsvt/execution.h"
#include "gapsvt/status_macros.h"
#include "json.hpp"

namespace gapsvt {
namespace {

using Json = nlohmann::ordered_json;

constexpr char kSeedEnv[] = "GAPSVT_SEED";
constexpr char kNoiseHalf[] = "noise-scale=half";
constexpr int64_t kDefaultTrials = 1000;
constexpr int64_t kDefaultMcSamples = 1'000'000;

absl::Status FieldError(const std::string& field, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", what));
}

absl::StatusOr<Json> ParseJson(std::string_view text) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("malformed JSON");
  }
  return doc;
}

absl::StatusOr<double> NumberField(const Json& doc, const std::string& field) {
  const auto it = doc.find(field);
  if (it == doc.end()) return FieldError(field, "missing");
  if (!it->is_number()) return FieldError(field, "expected a number");
  return it->get<double>();
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json AnswerJson(MechanismId id, const Answer& a) {
  Json j = Json::object();
  if (!a.top) {
    j["bot"] = true;
    // The adaptive mechanism releases (Bot, 0).
    if (id == MechanismId::kAdaptiveGap) j["gap"] = 0;
    return j;
  }
  if (a.gap.has_value()) {
    j["gap"] = *a.gap;
  } else {
    j["top"] = true;
  }
  j["branch"] = BranchName(a.branch);
  return j;
}

Json AnswersJson(MechanismId id, const OutputSequence& omega) {
  Json arr = Json::array();
  for (const Answer& a : omega.answers) arr.push_back(AnswerJson(id, a));
  return arr;
}

Json LedgerJson(const CostLedger& ledger) {
  Json events = Json::array();
  for (const LedgerEvent& e : ledger.events) {
    Json ev = {{"query", e.query_index}};
    ev["branch"] = e.branch.has_value() ? Json(BranchName(*e.branch)) : Json();
    ev["increment"] = e.increment;
    ev["cost_before"] = e.cost_before;
    events.push_back(std::move(ev));
  }
  return Json{{"epsilon0", ledger.budget.epsilon0},
              {"epsilon1", ledger.budget.epsilon1},
              {"epsilon2", ledger.budget.epsilon2},
              {"epsilon", ledger.budget.epsilon},
              {"first", ledger.first_count},
              {"second", ledger.second_count},
              {"cost", ledger.running_cost()},
              {"events", std::move(events)}};
}

Json WorkloadJson(const WorkloadFile& file) {
  Json pairs = Json::array();
  for (const QueryPair& p : file.workload.pairs) {
    pairs.push_back(Json::array({p.value_d, p.value_dprime}));
  }
  Json j = {{"pairs", std::move(pairs)},
            {"threshold", file.workload.threshold},
            {"k", file.workload.k},
            {"epsilon", file.workload.epsilon}};
  if (file.workload.sigma.has_value()) j["sigma"] = *file.workload.sigma;
  j["noise"] = file.noise == NoiseKind::kDiscreteLaplace ? "dlap" : "laplace";
  return j;
}

Json TapeJson(const NoiseTape& tape) {
  Json queries = Json::array();
  for (size_t i = 0; i < tape.num_queries(); ++i) {
    if (tape.layout() == TapeLayout::kSingle) {
      queries.push_back(tape.first(i));
    } else {
      queries.push_back(Json::array({tape.first(i), tape.second(i)}));
    }
  }
  return Json{{"threshold", tape.threshold_noise()},
              {"queries", std::move(queries)}};
}

Json WitnessJson(MechanismId id, const Witness& w, bool with_tape) {
  Json j = {{"trial", w.trial},
            {"seed", w.seed},
            {"check", w.check},
            {"detail", w.detail},
            {"workload",
             WorkloadJson(WorkloadFile{w.workload,
                                       IsIntegerWorkload(w.workload)
                                           ? NoiseKind::kDiscreteLaplace
                                           : NoiseKind::kContinuousLaplace})}};
  if (with_tape) {
    j["tape"] = TapeJson(w.tape);
    if (w.aligned.has_value()) j["aligned"] = TapeJson(*w.aligned);
  }
  j["expected"] = AnswersJson(id, w.expected);
  if (w.observed.has_value()) j["observed"] = AnswersJson(id, *w.observed);
  return j;
}

uint64_t ResolveSeed(const std::optional<uint64_t>& flag, bool* bad_env,
                     std::ostream& err) {
  *bad_env = false;
  if (flag.has_value()) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr) {
    uint64_t seed = 0;
    if (absl::SimpleAtoi(env, &seed)) return seed;
    err << "error: " << kSeedEnv << " is not an unsigned integer: " << env
        << "\n";
    *bad_env = true;
  }
  return 0;
}

int ReportError(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  if (status.code() == absl::StatusCode::kResourceExhausted) {
    err << "hint: the exact suite enumerates every tape in the noise box; "
           "the grid grows as (box width)^(tape length), so drop queries, "
           "raise epsilon, or pass a larger --grid-budget\n";
  }
  return kExitUsage;
}

// ---- run -----------------------------------------------------------------

struct RunOptions {
  std::string mechanism;
  std::string workload_path;
  std::string side = "d";
  std::optional<uint64_t> seed;
  int64_t runs = 1;
  std::string format = "json";
  std::string tape_path;
};

int CmdRun(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  absl::StatusOr<MechanismId> id = ParseMechanism(opt.mechanism);
  if (!id.ok()) return ReportError(id.status(), err);
  absl::StatusOr<std::string> text = ReadFile(opt.workload_path);
  if (!text.ok()) return ReportError(text.status(), err);
  absl::StatusOr<WorkloadFile> file = ParseWorkloadFile(*text);
  if (!file.ok()) return ReportError(file.status(), err);
  const Side side = opt.side == "d" ? Side::kD : Side::kDprime;
  const bool json = opt.format == "json";

  auto emit = [&](std::optional<uint64_t> seed, const RunResult& r) {
    if (json) {
      out << RunRecordJson(*id, seed, side, r) << "\n";
    } else {
      out << ToTrace(r.output) << "\n";
    }
  };

  if (!opt.tape_path.empty()) {
    if (opt.runs != 1) {
      err << "error: --tape replays a single run; drop --runs\n";
      return kExitUsage;
    }
    absl::StatusOr<std::string> tape_text = ReadFile(opt.tape_path);
    if (!tape_text.ok()) return ReportError(tape_text.status(), err);
    absl::StatusOr<NoiseTape> tape = ParseTapeFile(*tape_text, LayoutFor(*id));
    if (!tape.ok()) return ReportError(tape.status(), err);
    absl::StatusOr<MechanismBudget> budget = DefaultBudget(*id, file->workload);
    if (!budget.ok()) return ReportError(budget.status(), err);
    absl::StatusOr<RunResult> r =
        RunMechanism(*id, file->workload, side, *budget, *tape);
    if (!r.ok()) return ReportError(r.status(), err);
    emit(std::nullopt, *r);
    return kExitPass;
  }

  bool bad_env = false;
  const uint64_t base = ResolveSeed(opt.seed, &bad_env, err);
  if (bad_env) return kExitUsage;
  std::vector<std::optional<absl::StatusOr<RunResult>>> results(
      static_cast<size_t>(opt.runs));
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < opt.runs; ++i) {
    results[static_cast<size_t>(i)] =
        RunSampled(*id, file->workload, side, base + static_cast<uint64_t>(i),
                   file->noise);
  }
  for (int64_t i = 0; i < opt.runs; ++i) {
    const absl::StatusOr<RunResult>& r = *results[static_cast<size_t>(i)];
    if (!r.ok()) return ReportError(r.status(), err);
  }
  for (int64_t i = 0; i < opt.runs; ++i) {
    emit(base + static_cast<uint64_t>(i), **results[static_cast<size_t>(i)]);
  }
  return kExitPass;
}

// ---- verify --------------------------------------------------------------

struct VerifyOptions {
  std::string suite;
  std::string mechanism;
  std::optional<int64_t> trials;
  std::optional<uint64_t> seed;
  uint64_t grid_budget = kDefaultGridBudget;
  std::string workload_path;
  std::string mutation = "none";
};

absl::StatusOr<PrivacyReport> ExactSuite(MechanismId id,
                                         const std::optional<WorkloadFile>& file,
                                         uint64_t grid_budget) {
  std::vector<Workload> workloads;
  if (file.has_value()) {
    workloads.push_back(file->workload);
  } else {
    for (const ExactInstance& inst : StandardExactInstances()) {
      if (inst.mechanism == id) workloads.push_back(inst.workload);
    }
  }
  PrivacyReport merged;
  merged.suite = "dp-exact";
  merged.mechanism = id;
  merged.checks = {"max-padded-log-ratio", "truncation-loss"};
  for (size_t i = 0; i < workloads.size(); ++i) {
    GAPSVT_ASSIGN_OR_RETURN(
        PrivacyReport r,
        CheckExactPrivacy(id, workloads[i], std::nullopt, grid_budget));
    if (r.witness.has_value()) r.witness->trial = static_cast<int64_t>(i);
    MergeReports(merged, r);
  }
  merged.notes.push_back(
      absl::StrCat(workloads.size(), " enumerated instance(s)"));
  return merged;
}

// A workload where halving the noise scales is visible to the estimator.
Workload DefaultMonteCarloWorkload(MechanismId id) {
  Workload w = MonteCarloSelfTestInstance().workload;
  if (id == MechanismId::kAdaptiveGap) w.sigma = 0.0;
  return w;
}

absl::StatusOr<PrivacyReport> MonteCarloSuite(
    MechanismId id, const std::optional<WorkloadFile>& file, int64_t samples,
    uint64_t seed, bool halve_noise) {
  const Workload w =
      file.has_value() ? file->workload : DefaultMonteCarloWorkload(id);
  const NoiseKind kind =
      file.has_value() ? file->noise : NoiseKind::kDiscreteLaplace;
  GAPSVT_ASSIGN_OR_RETURN(
      MonteCarloReport mc,
      McPrivacyEstimate(id, w, samples, seed, kind, halve_noise ? 0.5 : 1.0));
  PrivacyReport r;
  r.suite = "dp-mc";
  r.mechanism = id;
  r.trials = samples;
  r.checks = {"wilson-lower-log-ratio"};
  r.max_log_ratio = mc.max_lower_log_ratio;
  r.max_raw_log_ratio = mc.max_point_log_ratio;
  r.violations = static_cast<int64_t>(mc.flagged.size());
  r.pass = mc.flagged.empty();
  r.notes.push_back(
      "falsification heuristic, not a proof: a pass means no output's "
      "log-ratio exceeded epsilon beyond the z=4 Wilson margin");
  if (!mc.flagged.empty()) {
    const FlaggedOutput& f = mc.flagged.front();
    Witness witness;
    witness.trial = 0;
    witness.seed = seed;
    witness.check = "mc-flagged-output";
    witness.workload = w;
    witness.expected = Decanonicalize(f.output);
    witness.detail = absl::StrCat("count on D ", f.count_d, ", on D' ",
                                  f.count_dprime, " of ", samples,
                                  "; lower log-ratio ", f.lower_log_ratio,
                                  " > epsilon ", w.epsilon);
    r.witness = std::move(witness);
  }
  return r;
}

int CmdVerify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  absl::StatusOr<MechanismId> id = ParseMechanism(opt.mechanism);
  if (!id.ok()) return ReportError(id.status(), err);

  static const std::map<std::string, AlignmentMutation> kMutations = {
      {"none", AlignmentMutation::kNone},
      {"threshold-shift=2", AlignmentMutation::kThresholdShiftTwo},
      {"branch-shift=drop-unit", AlignmentMutation::kDropUnitShift},
      {"missing-j-term", AlignmentMutation::kMissingSecondBranchShift},
  };
  const bool halve_noise = opt.mutation == kNoiseHalf;
  const AlignmentMutation mutation =
      halve_noise ? AlignmentMutation::kNone : kMutations.at(opt.mutation);

  std::optional<WorkloadFile> file;
  if (!opt.workload_path.empty()) {
    absl::StatusOr<std::string> text = ReadFile(opt.workload_path);
    if (!text.ok()) return ReportError(text.status(), err);
    absl::StatusOr<WorkloadFile> parsed = ParseWorkloadFile(*text);
    if (!parsed.ok()) return ReportError(parsed.status(), err);
    file = *std::move(parsed);
  }
  bool bad_env = false;
  const uint64_t seed = ResolveSeed(opt.seed, &bad_env, err);
  if (bad_env) return kExitUsage;

  std::vector<std::string> suites = {opt.suite};
  if (opt.suite == "all") {
    suites = {"align", "cost", "structural", "dp-exact", "dp-mc"};
  }
  TrialPlan plan;
  plan.mechanism = *id;
  plan.trials = opt.trials.value_or(kDefaultTrials);
  plan.seed = seed;
  plan.mutation = mutation;
  if (absl::Status s = ValidatePlan(plan); !s.ok()) {
    return ReportError(s, err);
  }

  bool all_pass = true;
  for (const std::string& suite : suites) {
    absl::StatusOr<PrivacyReport> report;
    if (suite == "align") {
      report = CheckAlignmentSoundness(plan);
    } else if (suite == "cost") {
      report = CheckCostBound(plan);
    } else if (suite == "structural") {
      report = CheckStructuralConditions(plan);
    } else if (suite == "dp-exact") {
      report = ExactSuite(*id, file, opt.grid_budget);
    } else {
      report = MonteCarloSuite(*id, file,
                               opt.trials.value_or(kDefaultMcSamples), seed,
                               halve_noise);
    }
    if (!report.ok()) return ReportError(report.status(), err);
    const bool trial_suite = suite == "align" || suite == "cost" ||
                             suite == "structural";
    out << ReportJson(*report, trial_suite) << "\n";
    all_pass = all_pass && report->pass;
  }
  return all_pass ? kExitPass : kExitViolation;
}

// ---- budget --------------------------------------------------------------

struct BudgetOptions {
  double epsilon = 0.0;
  int k = 0;
  std::string mechanism = "svt-gap";
};

int CmdBudget(const BudgetOptions& opt, std::ostream& out, std::ostream& err) {
  absl::StatusOr<MechanismId> id = ParseMechanism(opt.mechanism);
  if (!id.ok()) return ReportError(id.status(), err);
  if (*id == MechanismId::kAdaptiveGap) {
    absl::StatusOr<AdaptiveBudget> b = SplitAdaptiveBudget(opt.epsilon, opt.k);
    if (!b.ok()) return ReportError(b.status(), err);
    out << "ε0=" << FormatNumber(b->epsilon0)
        << " ε1=" << FormatNumber(b->epsilon1)
        << " ε2=" << FormatNumber(b->epsilon2) << "\n";
    out << "ε0+2kε2=" << FormatNumber(b->epsilon0 + 2.0 * opt.k * b->epsilon2)
        << " ε1≤ε2=" << (b->epsilon1 <= b->epsilon2 ? "true" : "false")
        << "\n";
    return kExitPass;
  }
  absl::StatusOr<SvtBudget> b = SplitSvtBudget(opt.epsilon, opt.k);
  if (!b.ok()) return ReportError(b.status(), err);
  out << "ε0=" << FormatNumber(b->epsilon0)
      << " ε1=" << FormatNumber(b->epsilon1)
      << "; ε0+2kε1=" << FormatNumber(b->epsilon0 + 2.0 * opt.k * b->epsilon1)
      << "\n";
  return kExitPass;
}

}  // namespace

absl::StatusOr<WorkloadFile> ParseWorkloadFile(std::string_view text) {
  GAPSVT_ASSIGN_OR_RETURN(Json doc, ParseJson(text));
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("workload: expected a JSON object");
  }
  static const std::set<std::string> kKnown = {"pairs", "k", "threshold",
                                               "epsilon", "sigma", "noise"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.contains(key)) return FieldError(key, "unknown field");
  }
  WorkloadFile file;
  const auto pairs = doc.find("pairs");
  if (pairs == doc.end()) return FieldError("pairs", "missing");
  if (!pairs->is_array()) return FieldError("pairs", "expected an array");
  for (size_t i = 0; i < pairs->size(); ++i) {
    const Json& p = (*pairs)[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
        !p[1].is_number()) {
      return FieldError(absl::StrCat("pairs[", i, "]"),
                        "expected [qD, qD'] numbers");
    }
    file.workload.pairs.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  GAPSVT_ASSIGN_OR_RETURN(file.workload.threshold,
                          NumberField(doc, "threshold"));
  GAPSVT_ASSIGN_OR_RETURN(file.workload.epsilon, NumberField(doc, "epsilon"));
  const auto k = doc.find("k");
  if (k == doc.end()) return FieldError("k", "missing");
  if (!k->is_number_integer()) return FieldError("k", "expected an integer");
  const int64_t k_value = k->get<int64_t>();
  if (k_value < 1 || k_value > 1'000'000) {
    return FieldError("k", "must be between 1 and 1000000");
  }
  file.workload.k = static_cast<int>(k_value);
  if (doc.contains("sigma")) {
    GAPSVT_ASSIGN_OR_RETURN(file.workload.sigma, NumberField(doc, "sigma"));
  }
  if (const auto noise = doc.find("noise"); noise != doc.end()) {
    if (*noise == "laplace") {
      file.noise = NoiseKind::kContinuousLaplace;
    } else if (*noise == "dlap") {
      file.noise = NoiseKind::kDiscreteLaplace;
    } else {
      return FieldError("noise", "expected \"laplace\" or \"dlap\"");
    }
  }
  GAPSVT_RETURN_IF_ERROR(CheckWorkload(file.workload));
  return file;
}

std::string EmitWorkloadFile(const WorkloadFile& file) {
  return WorkloadJson(file).dump(2) + "\n";
}

absl::StatusOr<NoiseTape> ParseTapeFile(std::string_view text,
                                        TapeLayout layout) {
  GAPSVT_ASSIGN_OR_RETURN(Json doc, ParseJson(text));
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("tape: expected a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "threshold" && key != "queries") {
      return FieldError(key, "unknown field");
    }
  }
  GAPSVT_ASSIGN_OR_RETURN(const double threshold,
                          NumberField(doc, "threshold"));
  const auto queries = doc.find("queries");
  if (queries == doc.end()) return FieldError("queries", "missing");
  if (!queries->is_array()) return FieldError("queries", "expected an array");
  std::vector<double> flat = {threshold};
  for (size_t i = 0; i < queries->size(); ++i) {
    const Json& q = (*queries)[i];
    if (layout == TapeLayout::kSingle) {
      if (!q.is_number()) {
        return FieldError(absl::StrCat("queries[", i, "]"),
                          "expected a number");
      }
      flat.push_back(q.get<double>());
    } else {
      if (!q.is_array() || q.size() != 2 || !q[0].is_number() ||
          !q[1].is_number()) {
        return FieldError(absl::StrCat("queries[", i, "]"),
                          "expected [xi, eta] numbers");
      }
      flat.push_back(q[0].get<double>());
      flat.push_back(q[1].get<double>());
    }
  }
  return NoiseTape::FromFlat(layout, std::move(flat));
}

std::string EmitTapeFile(const NoiseTape& tape) {
  return TapeJson(tape).dump(2) + "\n";
}

std::string RunRecordJson(MechanismId id, std::optional<uint64_t> seed,
                          Side side, const RunResult& result) {
  Json j = {{"mechanism", MechanismName(id)}};
  j["seed"] = seed.has_value() ? Json(*seed) : Json();
  j["side"] = side == Side::kD ? "d" : "dprime";
  j["answers"] = AnswersJson(id, result.output);
  if (result.ledger.has_value()) j["ledger"] = LedgerJson(*result.ledger);
  j["processed"] = result.processed;
  j["consumed"] = result.consumed;
  return j.dump();
}

std::string ReportJson(const PrivacyReport& report, bool with_tape) {
  Json j = {{"verdict", report.pass ? "pass" : "fail"},
            {"suite", report.suite},
            {"mechanism", MechanismName(report.mechanism)},
            {"trials", report.trials},
            {"violations", report.violations},
            {"checks", report.checks},
            {"max_cost", report.max_cost}};
  j["max_log_ratio"] =
      report.max_log_ratio.has_value() ? Json(*report.max_log_ratio) : Json();
  if (report.max_raw_log_ratio.has_value()) {
    j["max_raw_log_ratio"] = *report.max_raw_log_ratio;
  }
  j["truncation_loss"] = report.truncation_loss;
  if (report.suite == "structural") {
    j["equal_output_pairs"] = report.equal_output_pairs;
  }
  if (!report.notes.empty()) j["notes"] = report.notes;
  if (report.witness.has_value()) {
    j["witness"] = WitnessJson(report.mechanism, *report.witness, with_tape);
  }
  return j.dump();
}

std::string FormatNumber(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc() ? std::string(buf, end) : absl::StrCat(x);
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Sparse vector mechanisms over explicit noise tapes, with "
               "executable privacy checks.",
               "gapsvt"};
  app.require_subcommand(1);
  const std::vector<std::string> kMechanisms = {"svt", "svt-gap",
                                                "adaptive-gap"};

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Run a mechanism with seeded noise");
  run->add_option("--mechanism", run_opt.mechanism, "Mechanism")
      ->required()
      ->check(CLI::IsMember(kMechanisms));
  run->add_option("--workload", run_opt.workload_path, "Workload JSON file")
      ->required();
  run->add_option("--side", run_opt.side, "Database side")
      ->check(CLI::IsMember({"d", "dprime"}))
      ->capture_default_str();
  run->add_option("--seed", run_opt.seed,
                  "Noise seed (default: $GAPSVT_SEED, else 0)");
  run->add_option("--runs", run_opt.runs, "Number of runs (seeds seed+i)")
      ->check(CLI::Range(int64_t{1}, int64_t{100'000'000}))
      ->capture_default_str();
  run->add_option("--format", run_opt.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  run->add_option("--tape", run_opt.tape_path)->group("");

  VerifyOptions verify_opt;
  CLI::App* verify =
      app.add_subcommand("verify", "Run a privacy verification suite");
  verify->add_option("--suite", verify_opt.suite, "Suite")
      ->required()
      ->check(CLI::IsMember(
          {"align", "cost", "structural", "dp-exact", "dp-mc", "all"}));
  verify->add_option("--mechanism", verify_opt.mechanism, "Mechanism")
      ->required()
      ->check(CLI::IsMember(kMechanisms));
  verify->add_option("--trials", verify_opt.trials,
                     "Trials (samples per side for dp-mc)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_opt.seed,
                     "Master seed (default: $GAPSVT_SEED, else 0)");
  verify->add_option("--grid-budget", verify_opt.grid_budget,
                     "Maximum tapes enumerated per side for dp-exact")
      ->capture_default_str();
  verify->add_option("--workload", verify_opt.workload_path,
                     "Workload JSON file for dp-exact and dp-mc");
  verify->add_option("--inject-mutation", verify_opt.mutation)
      ->check(CLI::IsMember({"none", "threshold-shift=2",
                             "branch-shift=drop-unit", "missing-j-term",
                             kNoiseHalf}))
      ->group("");

  BudgetOptions budget_opt;
  CLI::App* budget = app.add_subcommand("budget", "Print the budget split");
  budget->add_option("--epsilon", budget_opt.epsilon, "Total budget")
      ->required();
  budget->add_option("--k", budget_opt.k, "Maximum positive answers")
      ->required();
  budget->add_option("--mechanism", budget_opt.mechanism, "Mechanism")
      ->check(CLI::IsMember(kMechanisms))
      ->capture_default_str();

  std::vector<const char*> argv = {"gapsvt"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (run->parsed()) return CmdRun(run_opt, out, err);
  if (verify->parsed()) return CmdVerify(verify_opt, out, err);
  return CmdBudget(budget_opt, out, err);
}

}  // namespace gapsvt
