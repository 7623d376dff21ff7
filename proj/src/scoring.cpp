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

#include "pixood/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pixood/error.hpp"

namespace pixood {

double LrScore(const LlMap& lls, const TransformFamily& family, const std::string& sample_id) {
  MissingEntries missing;
  const auto identity = lls.find("identity");
  if (identity == lls.end()) missing.emplace_back(sample_id, "identity");
  for (const auto& id : family.ids()) {
    if (!lls.contains(id)) missing.emplace_back(sample_id, id);
  }
  if (!missing.empty()) throw CompletenessError(std::move(missing));
  double score = 0.0;
  for (const auto& id : family.ids()) score += identity->second - lls.at(id);
  return score;
}

const char* CutoffMethodName(CutoffMethod method) {
  return method == CutoffMethod::kMad3 ? "mad3" : "percentile";
}

CutoffMethod ParseCutoffMethod(const std::string& name) {
  if (name == "mad3") return CutoffMethod::kMad3;
  if (name == "percentile") return CutoffMethod::kPercentile;
  throw Error(ErrorKind::kConfig, "unknown cutoff method '" + name + "'");
}

double Median(std::span<const double> values) { return Quantile(values, 0.5); }

double Quantile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::kConfig, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::kDomain, "quantile level must be in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<size_t>(std::floor(position));
  const size_t upper = std::min(lower + 1, sorted.size() - 1);
  const double frac = position - static_cast<double>(lower);
  if (frac == 0.0) return sorted[lower];
  return sorted[lower] + frac * (sorted[upper] - sorted[lower]);
}

Cutoff FitCutoff(std::span<const double> train_lls, CutoffMethod method, double tail_mass) {
  if (train_lls.size() < 2) {
    throw Error(ErrorKind::kConfig, "cutoff needs at least 2 training log-likelihoods");
  }
  for (double v : train_lls) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kValue, "non-finite training log-likelihood");
  }
  Cutoff cutoff;
  cutoff.method = method;
  cutoff.tail_mass = tail_mass;
  if (method == CutoffMethod::kMad3) {
    const double median = Median(train_lls);
    std::vector<double> deviations;
    deviations.reserve(train_lls.size());
    for (double v : train_lls) deviations.push_back(std::abs(v - median));
    cutoff.tau = median - cutoff.multiplier * Median(deviations);
  } else {
    if (!(tail_mass > 0.0 && tail_mass < 1.0)) {
      throw Error(ErrorKind::kDomain, "tail_mass must be in (0, 1)");
    }
    cutoff.tau = Quantile(train_lls, tail_mass);
  }
  return cutoff;
}

OodScore ConditionalScore(double identity_ll, double aggregated, const Cutoff& cutoff) {
  if (identity_ll < cutoff.tau) return {Tier::kFiltered, identity_ll};
  return {Tier::kPassed, aggregated};
}

double IcScore(double identity_ll_nats, double complexity_bits) {
  return -identity_ll_nats / std::numbers::ln2 - complexity_bits;
}

double LratScore(double ll_foreground, double ll_background) { return ll_foreground - ll_background; }

}  // namespace pixood
