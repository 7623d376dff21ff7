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

#ifndef PIXOOD_METRICS_HPP_
#define PIXOOD_METRICS_HPP_

#include <span>

#include "pixood/scoring.hpp"

namespace pixood {

// Detection metrics with ID as the positive class: a sample is predicted ID
// when its score is >= the threshold. Scores compare under the two-tier
// OodScore order. Empty inputs throw kConfig.

// P(id > ood) + 0.5 * P(id == ood) over all (id, ood) pairs.
double Auroc(std::span<const OodScore> id_scores, std::span<const OodScore> ood_scores);

// Step-wise area under the precision-recall curve: thresholds at each
// distinct score, sum over thresholds of (recall increase) * precision.
double Auprc(std::span<const OodScore> id_scores, std::span<const OodScore> ood_scores);

inline constexpr double kDefaultTprTarget = 0.8;

// Smallest false-positive rate among thresholds whose true-positive rate is
// at least tpr_target.
double FprAtTpr(std::span<const OodScore> id_scores, std::span<const OodScore> ood_scores,
                double tpr_target = kDefaultTprTarget);

}  // namespace pixood

#endif  // PIXOOD_METRICS_HPP_
