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

#ifndef PIXOOD_SCORING_HPP_
#define PIXOOD_SCORING_HPP_

#include <compare>
#include <span>
#include <string>

#include "pixood/llcache.hpp"
#include "pixood/transforms.hpp"

namespace pixood {

// All scores here are oriented so that higher means "more in-distribution".

// Long-range score: sum over the family of ll(identity) - ll(t).
double LrScore(const LlMap& lls, const TransformFamily& family, const std::string& sample_id = "?");

enum class CutoffMethod { kMad3, kPercentile };

const char* CutoffMethodName(CutoffMethod method);
CutoffMethod ParseCutoffMethod(const std::string& name);

inline constexpr double kMadMultiplier = 3.0;
inline constexpr double kDefaultTailMass = 0.005;

struct Cutoff {
  CutoffMethod method = CutoffMethod::kMad3;
  double tau = 0.0;  // nats
  double multiplier = kMadMultiplier;
  double tail_mass = kDefaultTailMass;
};

double Median(std::span<const double> values);

// Linear-interpolated quantile (q in [0, 1]) of `values`.
double Quantile(std::span<const double> values, double q);

// mad3: tau = median - 3 * median(|ll - median|) with no consistency
// constant. percentile: tau = the tail_mass quantile (left tail).
Cutoff FitCutoff(std::span<const double> train_lls, CutoffMethod method,
                 double tail_mass = kDefaultTailMass);

enum class Tier { kFiltered = 0, kPassed = 1 };

// Two-tier score. Every Filtered score ranks below every Passed score;
// within a tier scores order by value.
struct OodScore {
  Tier tier = Tier::kPassed;
  double value = 0.0;

  friend std::partial_ordering operator<=>(const OodScore& a, const OodScore& b) {
    if (a.tier != b.tier) return a.tier < b.tier ? std::partial_ordering::less : std::partial_ordering::greater;
    return a.value <=> b.value;
  }
  friend bool operator==(const OodScore& a, const OodScore& b) {
    return a.tier == b.tier && a.value == b.value;
  }
};

inline OodScore Passed(double value) { return {Tier::kPassed, value}; }

// identity_ll < tau: (Filtered, identity_ll); otherwise (Passed, aggregated).
OodScore ConditionalScore(double identity_ll, double aggregated, const Cutoff& cutoff);

// Input Complexity S = -ll / ln 2 - L, in bits; LOWER means more
// in-distribution. Callers rank by -S.
double IcScore(double identity_ll_nats, double complexity_bits);

double LratScore(double ll_foreground, double ll_background);

}  // namespace pixood

#endif  // PIXOOD_SCORING_HPP_
