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

#include "gapsvt/answer.h"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

#include "absl/strings/str_cat.h"

namespace gapsvt {
namespace {

constexpr double kGapUnitsPerValue = 1e9;

constexpr int64_t kTopBit = 1;
constexpr int64_t kGapBit = 2;

}  // namespace

const char* BranchName(Branch branch) {
  switch (branch) {
    case Branch::kPlain:
      return "plain";
    case Branch::kFirst:
      return "first";
    case Branch::kSecond:
      return "second";
  }
  return "plain";
}

size_t OutputSequence::num_tops() const {
  size_t tops = 0;
  for (const Answer& a : answers) tops += a.top ? 1 : 0;
  return tops;
}

OutputSequence EraseGaps(const OutputSequence& omega) {
  OutputSequence erased = omega;
  for (Answer& a : erased.answers) a.gap.reset();
  return erased;
}

bool ApproximatelyEqual(const OutputSequence& a, const OutputSequence& b,
                        double tolerance) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    const Answer& x = a.answers[i];
    const Answer& y = b.answers[i];
    if (x.top != y.top || x.branch != y.branch ||
        x.gap.has_value() != y.gap.has_value()) {
      return false;
    }
    if (x.gap.has_value() && !(std::abs(*x.gap - *y.gap) <= tolerance)) {
      return false;
    }
  }
  return true;
}

std::string ToTrace(const OutputSequence& omega) {
  std::string trace;
  for (const Answer& a : omega.answers) {
    if (!trace.empty()) trace += ' ';
    if (!a.top) {
      trace += "⊥";
      continue;
    }
    trace += "⊤";
    if (a.gap.has_value()) {
      absl::StrAppend(&trace, "(", *a.gap);
      if (a.branch != Branch::kPlain) {
        absl::StrAppend(&trace, ",", BranchName(a.branch));
      }
      trace += ")";
    }
  }
  return trace;
}

size_t CanonicalOutputHash::operator()(const CanonicalOutput& c) const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (int64_t code : c.codes) {
    h ^= static_cast<uint64_t>(code) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
  }
  return static_cast<size_t>(h);
}

void CanonicalizeInto(const OutputSequence& omega, CanonicalOutput& out) {
  out.codes.clear();
  for (const Answer& a : omega.answers) {
    int64_t tag = 0;
    int64_t gap = 0;
    if (a.top) {
      tag = kTopBit | (static_cast<int64_t>(a.branch) << 2);
      if (a.gap.has_value()) {
        tag |= kGapBit;
        gap = std::llround(*a.gap * kGapUnitsPerValue);
      }
    }
    out.codes.push_back(tag);
    out.codes.push_back(gap);
  }
}

CanonicalOutput Canonicalize(const OutputSequence& omega) {
  CanonicalOutput c;
  c.codes.reserve(2 * omega.size());
  CanonicalizeInto(omega, c);
  return c;
}

OutputSequence Decanonicalize(const CanonicalOutput& c) {
  OutputSequence omega;
  for (size_t i = 0; i + 1 < c.codes.size(); i += 2) {
    const int64_t tag = c.codes[i];
    if ((tag & kTopBit) == 0) {
      omega.answers.push_back(Answer::Bot());
      continue;
    }
    const auto branch = static_cast<Branch>(tag >> 2);
    if ((tag & kGapBit) != 0) {
      omega.answers.push_back(Answer::TopGap(
          static_cast<double>(c.codes[i + 1]) / kGapUnitsPerValue, branch));
    } else {
      omega.answers.push_back(Answer::Top(branch));
    }
  }
  return omega;
}

}  // namespace gapsvt
