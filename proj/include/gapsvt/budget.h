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

#ifndef GAPSVT_BUDGET_H_
#define GAPSVT_BUDGET_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace gapsvt {

// Classic split: epsilon0 = eps/2 for the threshold, epsilon1 = eps/(4k) per
// query. epsilon0 is stored as eps - 2k*epsilon1, which is exact in binary
// floating point, so the identity epsilon0 + 2k*epsilon1 == eps holds
// bit for bit.
struct SvtBudget {
  double epsilon0 = 0.0;
  double epsilon1 = 0.0;
  double epsilon = 0.0;
  int k = 1;
};

struct AdaptiveBudget {
  double epsilon0 = 0.0;  // threshold
  double epsilon1 = 0.0;  // first attempt (xi), the larger noise
  double epsilon2 = 0.0;  // second attempt (eta)
  double epsilon = 0.0;
};

absl::StatusOr<SvtBudget> SplitSvtBudget(double epsilon, int k);

// Default split epsilon2 = eps/(4k), epsilon1 = epsilon2/2,
// epsilon0 = eps - 2k*epsilon2 (= eps/2 up to rounding).
absl::StatusOr<AdaptiveBudget> SplitAdaptiveBudget(double epsilon, int k);

// 0 < epsilon1 <= epsilon2 and epsilon0 + 2*epsilon2 <= epsilon.
absl::Status ValidateAdaptiveBudget(const AdaptiveBudget& budget);

}  // namespace gapsvt

#endif  // GAPSVT_BUDGET_H_
