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

#include "gapsvt/workload.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace gapsvt {

std::vector<double> Workload::Values(Side side) const {
  std::vector<double> values;
  values.reserve(pairs.size());
  for (const QueryPair& p : pairs) {
    values.push_back(side == Side::kD ? p.value_d : p.value_dprime);
  }
  return values;
}

Workload Workload::Swapped() const {
  Workload swapped = *this;
  for (QueryPair& p : swapped.pairs) std::swap(p.value_d, p.value_dprime);
  return swapped;
}

absl::Status CheckWorkload(const Workload& w) {
  if (w.pairs.empty()) {
    return absl::InvalidArgumentError("EmptyWorkload: no query pairs");
  }
  if (!(w.epsilon > 0.0) || !std::isfinite(w.epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonPositiveBudget: epsilon=", w.epsilon));
  }
  if (w.k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonPositiveBudget: k=", w.k));
  }
  if (!std::isfinite(w.threshold)) {
    return absl::InvalidArgumentError("InvalidValue: threshold is not finite");
  }
  if (w.sigma.has_value() && (!std::isfinite(*w.sigma) || *w.sigma < 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidValue: sigma=", *w.sigma, " must be >= 0"));
  }
  for (size_t i = 0; i < w.pairs.size(); ++i) {
    const QueryPair& p = w.pairs[i];
    if (!std::isfinite(p.value_d) || !std::isfinite(p.value_dprime)) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidValue: pair ", i, " is not finite"));
    }
    if (std::abs(p.delta()) > kSensitivity) {
      return absl::InvalidArgumentError(absl::StrCat(
          "SensitivityViolation(", i, "): |", p.value_d, " - ",
          p.value_dprime, "| > 1"));
    }
  }
  return absl::OkStatus();
}

bool IsIntegerWorkload(const Workload& w) {
  auto is_int = [](double x) { return std::isfinite(x) && x == std::round(x); };
  if (!is_int(w.threshold)) return false;
  for (const QueryPair& p : w.pairs) {
    if (!is_int(p.value_d) || !is_int(p.value_dprime)) return false;
  }
  return true;
}

}  // namespace gapsvt
