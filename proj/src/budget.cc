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

#include "gapsvt/budget.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace gapsvt {
namespace {

absl::Status CheckInputs(double epsilon, int k) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonPositiveBudget: epsilon=", epsilon));
  }
  if (k < 1) {
    return absl::InvalidArgumentError(absl::StrCat("NonPositiveBudget: k=", k));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<SvtBudget> SplitSvtBudget(double epsilon, int k) {
  if (absl::Status s = CheckInputs(epsilon, k); !s.ok()) return s;
  SvtBudget budget;
  budget.epsilon = epsilon;
  budget.k = k;
  budget.epsilon1 = epsilon / (4.0 * k);
  // 2k * epsilon1 lies in [eps/2, 2 eps], so this subtraction is exact
  // (Sterbenz) and epsilon0 + 2k * epsilon1 reproduces epsilon exactly.
  budget.epsilon0 = epsilon - 2.0 * k * budget.epsilon1;
  return budget;
}

absl::StatusOr<AdaptiveBudget> SplitAdaptiveBudget(double epsilon, int k) {
  if (absl::Status s = CheckInputs(epsilon, k); !s.ok()) return s;
  AdaptiveBudget budget;
  budget.epsilon = epsilon;
  budget.epsilon2 = epsilon / (4.0 * k);
  budget.epsilon1 = budget.epsilon2 / 2.0;
  budget.epsilon0 = epsilon - 2.0 * k * budget.epsilon2;
  return budget;
}

absl::Status ValidateAdaptiveBudget(const AdaptiveBudget& b) {
  if (!(b.epsilon0 > 0.0) || !(b.epsilon1 > 0.0) || !(b.epsilon2 > 0.0) ||
      !(b.epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        "NonPositiveBudget: every adaptive budget component must be > 0");
  }
  if (b.epsilon1 > b.epsilon2) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidBudget: epsilon1=", b.epsilon1,
                     " exceeds epsilon2=", b.epsilon2));
  }
  if (b.epsilon0 + 2.0 * b.epsilon2 > b.epsilon) {
    return absl::InvalidArgumentError(
        "InvalidBudget: epsilon0 + 2 epsilon2 exceeds epsilon");
  }
  return absl::OkStatus();
}

}  // namespace gapsvt
