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

#ifndef GAPSVT_ANSWER_H_
#define GAPSVT_ANSWER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gapsvt {

// Which test produced a positive answer. Plain SVT variants use kPlain; the
// adaptive mechanism tags answers from the xi-test with kFirst and answers
// from the eta-test with kSecond.
enum class Branch { kPlain, kFirst, kSecond };

const char* BranchName(Branch branch);

struct Answer {
  bool top = false;
  // Released gap. Absent for Bot and for classic SVT tops.
  std::optional<double> gap;
  Branch branch = Branch::kPlain;

  static Answer Bot() { return Answer{}; }
  static Answer Top(Branch branch = Branch::kPlain) {
    return Answer{true, std::nullopt, branch};
  }
  static Answer TopGap(double gap, Branch branch = Branch::kPlain) {
    return Answer{true, gap, branch};
  }

  bool operator==(const Answer&) const = default;
};

struct OutputSequence {
  std::vector<Answer> answers;

  size_t size() const { return answers.size(); }
  size_t num_tops() const;

  bool operator==(const OutputSequence&) const = default;
};

// Replaces every TopGap with a gap-less Top of the same branch.
OutputSequence EraseGaps(const OutputSequence& omega);

// Equal tags and lengths, gaps within `tolerance`.
bool ApproximatelyEqual(const OutputSequence& a, const OutputSequence& b,
                        double tolerance);

// "⊥ ⊤(1) ⊤" style trace.
std::string ToTrace(const OutputSequence& omega);

// Map key for an output: one (tag, gap in units of 1e-9) pair per answer.
// Integer gaps are represented exactly; real gaps are rounded to 1e-9.
struct CanonicalOutput {
  std::vector<int64_t> codes;

  bool operator==(const CanonicalOutput&) const = default;
  auto operator<=>(const CanonicalOutput&) const = default;
};

struct CanonicalOutputHash {
  size_t operator()(const CanonicalOutput& c) const;
};

CanonicalOutput Canonicalize(const OutputSequence& omega);
// Appends into `out` without reallocating when capacity allows.
void CanonicalizeInto(const OutputSequence& omega, CanonicalOutput& out);
OutputSequence Decanonicalize(const CanonicalOutput& c);

}  // namespace gapsvt

#endif  // GAPSVT_ANSWER_H_
