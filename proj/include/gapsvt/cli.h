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

#ifndef GAPSVT_CLI_H_
#define GAPSVT_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "gapsvt/mechanisms.h"
#include "gapsvt/noise.h"
#include "gapsvt/verifier.h"
#include "gapsvt/workload.h"

namespace gapsvt {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

// On-disk workload: {"pairs": [[qD, qD'], ...], "threshold", "k", "epsilon",
// "sigma"?, "noise"?: "laplace" | "dlap"}. Noise defaults to "laplace".
struct WorkloadFile {
  Workload workload;
  NoiseKind noise = NoiseKind::kContinuousLaplace;

  bool operator==(const WorkloadFile&) const = default;
};

// Parses and validates a workload document. Errors name the offending
// field (and index, for pairs).
absl::StatusOr<WorkloadFile> ParseWorkloadFile(std::string_view text);
std::string EmitWorkloadFile(const WorkloadFile& file);

// Noise tape document: {"threshold": eta, "queries": [...]} where queries
// holds eta_i numbers (single layout) or [xi_i, eta_i] pairs (paired).
absl::StatusOr<NoiseTape> ParseTapeFile(std::string_view text,
                                        TapeLayout layout);
std::string EmitTapeFile(const NoiseTape& tape);

// One JSON line (without trailing newline) describing a run. `seed` is empty
// for runs on an injected tape.
std::string RunRecordJson(MechanismId id, std::optional<uint64_t> seed,
                          Side side, const RunResult& result);

// The JSON object printed by `verify`. `with_tape` controls whether the
// witness's noise tapes are included.
std::string ReportJson(const PrivacyReport& report, bool with_tape);

// Shortest decimal that round-trips to `x`.
std::string FormatNumber(double x);

// Entry point of the gapsvt tool. `args` excludes the program name. Returns
// the process exit code: 0 pass, 1 verification failure, 2 usage or data
// error.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace gapsvt

#endif  // GAPSVT_CLI_H_
