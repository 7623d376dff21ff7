/*
 * Copyright 2026 The pixood Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pixood/metrics.hpp"

#include <algorithm>
#include <vector>

#include "pixood/error.hpp"

namespace pixood {

namespace {

void RequireNonEmpty(std::span<const OodScore> id_scores, std::span<const OodScore> ood_scores) {
  if (id_scores.empty() || ood_scores.empty()) {
    throw Error(ErrorKind::kConfig, "metrics need non-empty ID and OOD score lists");
  }
}

bool Less(const OodScore& a, const OodScore& b) { return (a <=> b) < 0; }

struct ThresholdCounts {
  int64_t tp = 0;  // ID scores >= threshold
  int64_t fp = 0;  // OOD scores >= threshold
};

// Cumulative counts at each distinct score, thresholds from high to low.
std::vector<ThresholdCounts> SweepThresholds(std::span<const OodScore> id_scores,
                                             std::span<const OodScore> ood_scores) {
  std::vector<std::pair<OodScore, bool>> all;
  all.reserve(id_scores.size() + ood_scores.size());
  for (const auto& s : id_scores) all.emplace_back(s, true);
  for (const auto& s : ood_scores) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return Less(b.first, a.first); });
  std::vector<ThresholdCounts> sweep;
  ThresholdCounts counts;
  for (size_t i = 0; i < all.size();) {
    size_t j = i;
    while (j < all.size() && (all[j].first <=> all[i].first) == 0) {
      (all[j].second ? counts.tp : counts.fp) += 1;
      ++j;
    }
    sweep.push_back(counts);
    i = j;
  }
  return sweep;
}

}  // namespace

double Auroc(std::span<const OodScore> id_scores, std::span<const OodScore> ood_scores) {
  RequireNonEmpty(id_scores, ood_scores);
  std::vector<OodScore> ood(ood_scores.begin(), ood_scores.end());
  std::sort(ood.begin(), ood.end(), Less);
  // Twice the Mann-Whitney U statistic, kept integral for exactness.
  int64_t twice_u = 0;
  for (const auto& s : id_scores) {
    const auto lo = std::lower_bound(ood.begin(), ood.end(), s, Less);
    const auto hi = std::upper_bound(lo, ood.end(), s, Less);
    twice_u += 2 * (lo - ood.begin()) + (hi - lo);
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(id_scores.size()) * static_cast<double>(ood_scores.size()));
}

double Auprc(std::span<const OodScore> id_scores, std::span<const OodScore> ood_scores) {
  RequireNonEmpty(id_scores, ood_scores);
  const auto n_pos = static_cast<double>(id_scores.size());
  // Weight precision by whole true-positive counts and divide once, so every
  // partial sum stays at or below n_pos and the area cannot exceed 1.
  double area = 0.0;
  int64_t prev_tp = 0;
  for (const auto& c : SweepThresholds(id_scores, ood_scores)) {
    area += static_cast<double>(c.tp - prev_tp) * (static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp));
    prev_tp = c.tp;
  }
  return area / n_pos;
}

double FprAtTpr(std::span<const OodScore> id_scores, std::span<const OodScore> ood_scores,
                double tpr_target) {
  RequireNonEmpty(id_scores, ood_scores);
  if (!(tpr_target > 0.0 && tpr_target <= 1.0)) {
    throw Error(ErrorKind::kDomain, "tpr_target must be in (0, 1]");
  }
  const auto n_pos = static_cast<double>(id_scores.size());
  const auto n_neg = static_cast<double>(ood_scores.size());
  // FPR only grows as the threshold drops, so the first qualifying threshold wins.
  for (const auto& c : SweepThresholds(id_scores, ood_scores)) {
    if (static_cast<double>(c.tp) / n_pos >= tpr_target - 1e-12) {
      return static_cast<double>(c.fp) / n_neg;
    }
  }
  return 1.0;
}

}  // namespace pixood
