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

#include "gapsvt/enumeration.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gapsvt/status_macros.h"

namespace gapsvt {
namespace {

// Per-coordinate discrete Laplace weights over [-bound, bound].
struct CoordinateTable {
  int64_t bound = 0;
  std::vector<double> pmf;  // pmf[x + bound]
  double box_mass = 0.0;
  double tail = 0.0;
};

struct EnumerationSetup {
  TapeLayout layout = TapeLayout::kSingle;
  std::vector<CoordinateTable> coords;
  uint64_t points = 0;
  double truncation_loss = 0.0;
};

CoordinateTable MakeTable(int64_t bound, double scale) {
  CoordinateTable table;
  table.bound = bound;
  table.pmf.resize(2 * bound + 1);
  for (int64_t x = -bound; x <= bound; ++x) {
    table.pmf[x + bound] = DiscreteLaplacePmf(x, scale);
  }
  // Sum from the tails inward so the small terms are not swamped.
  for (int64_t x = bound; x >= 1; --x) {
    table.box_mass += table.pmf[bound + x] + table.pmf[bound - x];
  }
  table.box_mass += table.pmf[bound];
  table.tail = DiscreteLaplaceTail(bound, scale);
  return table;
}

uint64_t SaturatingProduct(uint64_t a, uint64_t b) {
  if (a != 0 && b > std::numeric_limits<uint64_t>::max() / a) {
    return std::numeric_limits<uint64_t>::max();
  }
  return a * b;
}

bool BudgetMatches(MechanismId id, const MechanismBudget& budget) {
  return (id == MechanismId::kAdaptiveGap) ==
         std::holds_alternative<AdaptiveBudget>(budget);
}

absl::StatusOr<EnumerationSetup> Prepare(MechanismId id, const Workload& w,
                                         const MechanismBudget& budget,
                                         const EnumerationBox& box,
                                         uint64_t grid_budget) {
  GAPSVT_RETURN_IF_ERROR(CheckWorkload(w));
  if (!IsIntegerWorkload(w)) {
    return absl::InvalidArgumentError(
        "exact enumeration needs integer query values and threshold");
  }
  if (!BudgetMatches(id, budget)) {
    return absl::InvalidArgumentError("budget does not match the mechanism");
  }
  EnumerationSetup setup;
  setup.layout = LayoutFor(id);
  if (setup.layout == TapeLayout::kPaired && !box.second_query.has_value()) {
    return absl::InvalidArgumentError(
        "paired tapes need a bound for the second query draw");
  }
  if (box.threshold < 0 || box.query < 0 || box.second_query.value_or(0) < 0) {
    return absl::InvalidArgumentError("box bounds must be nonnegative");
  }
  setup.points = GridPoints(box, setup.layout, w.pairs.size());
  if (setup.points > grid_budget) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "GridBudgetExceeded: the box holds ", setup.points,
        " tapes but the grid budget is ", grid_budget,
        "; use fewer queries, a larger epsilon, or raise --grid-budget"));
  }
  const NoiseSpec spec = NoiseSpecFor(budget, NoiseKind::kDiscreteLaplace);
  setup.coords.push_back(MakeTable(box.threshold, spec.threshold_scale));
  for (size_t i = 0; i < w.pairs.size(); ++i) {
    setup.coords.push_back(MakeTable(box.query, spec.query_scale));
    if (setup.layout == TapeLayout::kPaired) {
      setup.coords.push_back(
          MakeTable(*box.second_query, *spec.second_query_scale));
    }
  }
  double log_inside = 0.0;
  for (const CoordinateTable& c : setup.coords) log_inside += std::log1p(-c.tail);
  setup.truncation_loss = -std::expm1(log_inside);
  return setup;
}

NoiseTape ZeroTape(TapeLayout layout, size_t num_queries) {
  const size_t stride = layout == TapeLayout::kSingle ? 1 : 2;
  return *NoiseTape::FromFlat(
      layout, std::vector<double>(1 + stride * num_queries, 0.0));
}

// Reference: visit every tape in the box, no shortcuts.
absl::StatusOr<OutputMassMap> EnumerateSerial(MechanismId id, const Workload& w,
                                              Side side,
                                              const MechanismBudget& budget,
                                              const EnumerationSetup& setup) {
  const size_t m = setup.coords.size();
  std::vector<int64_t> digit(m);
  for (size_t j = 0; j < m; ++j) digit[j] = -setup.coords[j].bound;
  NoiseTape tape = ZeroTape(setup.layout, w.pairs.size());
  std::map<CanonicalOutput, double> ordered;
  while (true) {
    std::span<double> h = tape.mutable_flat();
    double mass = 1.0;
    for (size_t j = 0; j < m; ++j) {
      h[j] = static_cast<double>(digit[j]);
      mass *= setup.coords[j].pmf[digit[j] + setup.coords[j].bound];
    }
    GAPSVT_ASSIGN_OR_RETURN(RunResult run,
                            RunMechanism(id, w, side, budget, tape));
    ordered[Canonicalize(run.output)] += mass;

    size_t j = m;
    while (j > 0 && digit[j - 1] == setup.coords[j - 1].bound) {
      digit[j - 1] = -setup.coords[j - 1].bound;
      --j;
    }
    if (j == 0) break;
    ++digit[j - 1];
  }
  return OutputMassMap(ordered.begin(), ordered.end());
}

// Parallel kernel. The threshold draw is split across threads; within a
// slice, once the mechanism stops reading at coordinate c, every suffix
// beyond c yields the same output, so the whole suffix block is credited at
// once with its box mass.
absl::StatusOr<OutputMassMap> EnumerateParallel(MechanismId id,
                                                const Workload& w, Side side,
                                                const MechanismBudget& budget,
                                                const EnumerationSetup& setup) {
  const size_t m = setup.coords.size();
  // suffix_mass[j] = product of box masses of coordinates j..m-1.
  std::vector<double> suffix_mass(m + 1, 1.0);
  for (size_t j = m; j > 0; --j) {
    suffix_mass[j - 1] = suffix_mass[j] * setup.coords[j - 1].box_mass;
  }
  const int64_t outer_bound = setup.coords[0].bound;

  OutputMassMap merged;
  absl::Status error = absl::OkStatus();

#pragma omp parallel
  {
    OutputMassMap local;
    absl::Status local_error = absl::OkStatus();
    NoiseTape tape = ZeroTape(setup.layout, w.pairs.size());
    std::vector<int64_t> digit(m);
    std::vector<double> prefix(m + 1, 1.0);
    CanonicalOutput key;

#pragma omp for schedule(dynamic, 1)
    for (int64_t t = -outer_bound; t <= outer_bound; ++t) {
      if (!local_error.ok()) continue;
      std::span<double> h = tape.mutable_flat();
      digit[0] = t;
      h[0] = static_cast<double>(t);
      prefix[1] = setup.coords[0].pmf[t + outer_bound];
      for (size_t j = 1; j < m; ++j) {
        digit[j] = -setup.coords[j].bound;
        h[j] = static_cast<double>(digit[j]);
        prefix[j + 1] = prefix[j] * setup.coords[j].pmf[0];
      }
      while (true) {
        absl::StatusOr<RunResult> run = RunMechanism(id, w, side, budget, tape);
        if (!run.ok()) {
          local_error = run.status();
          break;
        }
        const size_t read = std::max<size_t>(1, std::min(run->consumed, m));
        CanonicalizeInto(run->output, key);
        local[key] += prefix[read] * suffix_mass[read];

        // Advance the odometer at the last coordinate that was read.
        size_t j = read;
        while (j > 1 && digit[j - 1] == setup.coords[j - 1].bound) --j;
        if (j == 1) break;
        ++digit[j - 1];
        h[j - 1] = static_cast<double>(digit[j - 1]);
        prefix[j] = prefix[j - 1] *
                    setup.coords[j - 1].pmf[digit[j - 1] +
                                            setup.coords[j - 1].bound];
        for (size_t r = j; r < m; ++r) {
          digit[r] = -setup.coords[r].bound;
          h[r] = static_cast<double>(digit[r]);
          prefix[r + 1] = prefix[r] * setup.coords[r].pmf[0];
        }
      }
    }

#pragma omp critical(gapsvt_enumeration_merge)
    {
      if (!local_error.ok() && error.ok()) error = local_error;
      for (const auto& [output, mass] : local) merged[output] += mass;
    }
  }
  if (!error.ok()) return error;
  return merged;
}

// Overwrites `tape` with fresh draws at the scales in `spec`.
void RedrawTape(NoiseSource& source, const NoiseSpec& spec, NoiseTape& tape) {
  std::span<double> h = tape.mutable_flat();
  h[0] = source.Draw(spec.kind, spec.threshold_scale);
  const bool paired = spec.layout() == TapeLayout::kPaired;
  for (size_t j = 1; j < h.size(); ++j) {
    const bool second = paired && (j - 1) % 2 == 1;
    h[j] = source.Draw(spec.kind,
                       second ? *spec.second_query_scale : spec.query_scale);
  }
}

constexpr int64_t kSamplesPerBlock = 1 << 14;

}  // namespace

double OutputDistribution::total_mass() const {
  double total = 0.0;
  for (const auto& [output, mass] : masses) total += mass;
  return total;
}

EnumerationBox EnumerationBox::Uniform(int64_t bound, TapeLayout layout) {
  EnumerationBox box{bound, bound, std::nullopt};
  if (layout == TapeLayout::kPaired) box.second_query = bound;
  return box;
}

EnumerationBox EnumerationBox::ForTail(const NoiseSpec& spec,
                                       double max_tail) {
  EnumerationBox box;
  box.threshold = DiscreteLaplaceBound(spec.threshold_scale, max_tail);
  box.query = DiscreteLaplaceBound(spec.query_scale, max_tail);
  if (spec.second_query_scale.has_value()) {
    box.second_query = DiscreteLaplaceBound(*spec.second_query_scale, max_tail);
  }
  return box;
}

uint64_t GridPoints(const EnumerationBox& box, TapeLayout layout,
                    size_t num_queries) {
  uint64_t points = static_cast<uint64_t>(2 * box.threshold + 1);
  for (size_t i = 0; i < num_queries; ++i) {
    points = SaturatingProduct(points, static_cast<uint64_t>(2 * box.query + 1));
    if (layout == TapeLayout::kPaired) {
      points = SaturatingProduct(
          points, static_cast<uint64_t>(2 * box.second_query.value_or(0) + 1));
    }
  }
  return points;
}

absl::StatusOr<OutputDistribution> EnumerateOutputDist(
    MechanismId id, const Workload& w, Side side,
    const MechanismBudget& budget, const EnumerationBox& box,
    uint64_t grid_budget, ExecutionPolicy policy) {
  GAPSVT_ASSIGN_OR_RETURN(EnumerationSetup setup,
                          Prepare(id, w, budget, box, grid_budget));
  OutputDistribution dist;
  dist.mechanism = id;
  dist.num_queries = w.pairs.size();
  dist.truncation_loss = setup.truncation_loss;
  dist.grid_points = setup.points;
  if (policy == ExecutionPolicy::kSerial) {
    GAPSVT_ASSIGN_OR_RETURN(dist.masses,
                            EnumerateSerial(id, w, side, budget, setup));
  } else {
    GAPSVT_ASSIGN_OR_RETURN(dist.masses,
                            EnumerateParallel(id, w, side, budget, setup));
  }
  return dist;
}

absl::StatusOr<PrivacyLoss> MaxPrivacyLoss(const OutputDistribution& p,
                                           const OutputDistribution& q) {
  if (p.mechanism != q.mechanism || p.num_queries != q.num_queries) {
    return absl::InvalidArgumentError(
        "DomainMismatch: distributions come from different mechanisms or "
        "query counts");
  }
  PrivacyLoss loss;
  loss.padding_tau = std::max(p.truncation_loss, q.truncation_loss);
  const double tau = loss.padding_tau;
  auto visit = [&](const CanonicalOutput& output, double pm, double qm) {
    double padded = 0.0;
    if (pm > 0.0) padded = std::max(padded, std::log(pm / (qm + tau)));
    if (qm > 0.0) padded = std::max(padded, std::log(qm / (pm + tau)));
    if (!loss.worst_output.has_value() || padded > loss.padded) {
      loss.padded = padded;
      loss.worst_output = output;
    }
    if (pm > 0.0 && qm > 0.0) {
      loss.raw = std::max(loss.raw, std::abs(std::log(pm / qm)));
    } else if (pm > 0.0 || qm > 0.0) {
      loss.raw = std::numeric_limits<double>::infinity();
    }
  };
  for (const auto& [output, pm] : p.masses) {
    auto it = q.masses.find(output);
    visit(output, pm, it == q.masses.end() ? 0.0 : it->second);
  }
  for (const auto& [output, qm] : q.masses) {
    if (!p.masses.contains(output)) visit(output, 0.0, qm);
  }
  return loss;
}

absl::StatusOr<EmpiricalDistribution> SampleOutputDist(
    MechanismId id, const Workload& w, Side side,
    const MechanismBudget& budget, NoiseKind kind, int64_t samples,
    uint64_t seed, double scale_factor, ExecutionPolicy policy) {
  GAPSVT_RETURN_IF_ERROR(CheckWorkload(w));
  if (!BudgetMatches(id, budget)) {
    return absl::InvalidArgumentError("budget does not match the mechanism");
  }
  if (samples < 1 || !(scale_factor > 0.0)) {
    return absl::InvalidArgumentError(
        "samples and scale factor must be positive");
  }
  NoiseSpec spec = NoiseSpecFor(budget, kind);
  spec.threshold_scale *= scale_factor;
  spec.query_scale *= scale_factor;
  if (spec.second_query_scale.has_value()) {
    *spec.second_query_scale *= scale_factor;
  }
  const int64_t blocks = (samples + kSamplesPerBlock - 1) / kSamplesPerBlock;

  EmpiricalDistribution result;
  result.samples = samples;
  absl::Status error = absl::OkStatus();

#pragma omp parallel if (policy == ExecutionPolicy::kParallel)
  {
    OutputCountMap local;
    absl::Status local_error = absl::OkStatus();
    NoiseTape tape = ZeroTape(spec.layout(), w.pairs.size());
    CanonicalOutput key;
#pragma omp for schedule(static)
    for (int64_t b = 0; b < blocks; ++b) {
      if (!local_error.ok()) continue;
      // Each block owns a substream, so counts do not depend on threading.
      NoiseSource source(DeriveSeed(seed, static_cast<uint64_t>(b)));
      const int64_t end = std::min(samples, (b + 1) * kSamplesPerBlock);
      for (int64_t s = b * kSamplesPerBlock; s < end; ++s) {
        RedrawTape(source, spec, tape);
        absl::StatusOr<RunResult> run = RunMechanism(id, w, side, budget, tape);
        if (!run.ok()) {
          local_error = run.status();
          break;
        }
        CanonicalizeInto(run->output, key);
        ++local[key];
      }
    }
#pragma omp critical(gapsvt_sample_merge)
    {
      if (!local_error.ok() && error.ok()) error = local_error;
      for (const auto& [output, count] : local) result.counts[output] += count;
    }
  }
  if (!error.ok()) return error;
  return result;
}

double TotalVariation(const OutputDistribution& exact,
                      const EmpiricalDistribution& empirical) {
  const double n = static_cast<double>(empirical.samples);
  double distance = exact.truncation_loss;
  for (const auto& [output, mass] : exact.masses) {
    auto it = empirical.counts.find(output);
    const double freq =
        it == empirical.counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    distance += std::abs(mass - freq);
  }
  for (const auto& [output, count] : empirical.counts) {
    if (!exact.masses.contains(output)) distance += static_cast<double>(count) / n;
  }
  return 0.5 * distance;
}

int ParallelThreads() { return omp_get_max_threads(); }

}  // namespace gapsvt
