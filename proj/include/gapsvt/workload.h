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

#ifndef GAPSVT_WORKLOAD_H_
#define GAPSVT_WORKLOAD_H_

#include <optional>
#include <vector>

#include "absl/status/status.h"

namespace gapsvt {

// Answers of one sensitivity-1 query on a pair of adjacent databases.
struct QueryPair {
  double value_d = 0.0;
  double value_dprime = 0.0;

  // Delta_i = q_i(D) - q_i(D'). Every alignment uses this sign convention.
  double delta() const { return value_d - value_dprime; }

  bool operator==(const QueryPair&) const = default;
};

// Which database of the adjacent pair a mechanism runs on.
enum class Side { kD, kDprime };

struct Workload {
  std::vector<QueryPair> pairs;
  double threshold = 0.0;
  int k = 1;
  double epsilon = 1.0;
  // Only the adaptive mechanism reads sigma.
  std::optional<double> sigma;

  // The query values seen by a mechanism running on `side`.
  std::vector<double> Values(Side side) const;

  // Same workload with D and D' exchanged.
  Workload Swapped() const;

  bool operator==(const Workload&) const = default;
};

inline constexpr double kSensitivity = 1.0;

// Validates the structural invariants and the sensitivity-1 contract.
// Error messages start with the error kind: "EmptyWorkload",
// "NonPositiveBudget", "SensitivityViolation(<index>)" or "InvalidValue".
absl::Status CheckWorkload(const Workload& w);

// True when every query value and the threshold are integers, which is the
// precondition for exact enumeration with discrete noise.
bool IsIntegerWorkload(const Workload& w);

}  // namespace gapsvt

#endif  // GAPSVT_WORKLOAD_H_
