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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pixood/error.hpp"
#include "pixood/metrics.hpp"

namespace pixood {
namespace {

TEST(LrScoreTest, StirArithmetic) {
  const TransformFamily stir = EnumerateFamily(Family::kStir);
  LlMap lls{{"identity", -100.0}};
  for (const auto& id : stir.ids()) lls[id] = -110.0;
  EXPECT_EQ(LrScore(lls, stir), 70.0);
}

TEST(LrScoreTest, SymmetricImageScoresZero) {
  const TransformFamily stir = EnumerateFamily(Family::kStir);
  LlMap lls{{"identity", -42.5}};
  for (const auto& id : stir.ids()) lls[id] = -42.5;
  EXPECT_EQ(LrScore(lls, stir), 0.0);
}

TEST(LrScoreTest, MissingTransformIsCompletenessError) {
  const TransformFamily shake = EnumerateFamily(Family::kShake);
  LlMap lls{{"identity", -1.0}};
  for (const auto& id : shake.ids()) lls[id] = -2.0;
  lls.erase("shake/q04");
  try {
    LrScore(lls, shake, "s7");
    FAIL();
  } catch (const CompletenessError& e) {
    ASSERT_EQ(e.missing().size(), 1u);
    EXPECT_EQ(e.missing()[0].first, "s7");
    EXPECT_EQ(e.missing()[0].second, "shake/q04");
  }
}

TEST(CutoffTest, ZeroSpread) {
  const std::vector<double> lls = {0, 0, 0, 0};
  EXPECT_EQ(FitCutoff(lls, CutoffMethod::kMad3).tau, 0.0);
}

TEST(CutoffTest, HandComputedMad) {
  const std::vector<double> lls = {1, 2, 3, 4, 5};
  EXPECT_EQ(Median(lls), 3.0);
  const Cutoff c = FitCutoff(lls, CutoffMethod::kMad3);
  EXPECT_EQ(c.tau, 0.0);
  EXPECT_EQ(c.method, CutoffMethod::kMad3);
}

TEST(CutoffTest, PercentileInterpolates) {
  const std::vector<double> lls = {4, 1, 3, 2};
  EXPECT_EQ(FitCutoff(lls, CutoffMethod::kPercentile, 0.5).tau, 2.5);
  EXPECT_EQ(Quantile(lls, 0.0), 1.0);
  EXPECT_EQ(Quantile(lls, 1.0), 4.0);
}

TEST(CutoffTest, RejectsDegenerateInput) {
  const std::vector<double> one = {1.0};
  EXPECT_THROW(FitCutoff(one, CutoffMethod::kMad3), Error);
  const std::vector<double> two = {1.0, 2.0};
  EXPECT_THROW(FitCutoff(two, CutoffMethod::kPercentile, 0.0), Error);
  EXPECT_THROW(ParseCutoffMethod("mad2"), Error);
  EXPECT_EQ(ParseCutoffMethod(CutoffMethodName(CutoffMethod::kPercentile)), CutoffMethod::kPercentile);
}

TEST(ConditionalTest, BoundaryIsInclusive) {
  const Cutoff cutoff{CutoffMethod::kMad3, -50.0};
  EXPECT_EQ(ConditionalScore(-51.0, 9.0, cutoff).tier, Tier::kFiltered);
  EXPECT_EQ(ConditionalScore(-50.0, 9.0, cutoff), Passed(9.0));
}

TEST(ConditionalTest, FilteredRanksBelowEveryPassed) {
  const OodScore filtered{Tier::kFiltered, 1e300};
  EXPECT_LT(filtered, Passed(-1e300));
  const OodScore low{Tier::kFiltered, -5.0};
  const OodScore high{Tier::kFiltered, -4.0};
  EXPECT_LT(low, high);
}

TEST(IcScoreTest, Arithmetic) {
  EXPECT_EQ(IcScore(0.0, 10.0), -10.0);
  EXPECT_NEAR(IcScore(-std::log(2.0) * 8.0, 3.0), 5.0, 1e-12);
}

TEST(IcScoreTest, ConstantShiftKeepsAuroc) {
  const std::vector<double> id_ll = {-10, -20, -30}, ood_ll = {-15, -25};
  const std::vector<double> id_bits = {5, 40, 9}, ood_bits = {30, 2};
  auto scores = [](const std::vector<double>& ll, const std::vector<double>& bits, double c) {
    std::vector<OodScore> out;
    for (size_t i = 0; i < ll.size(); ++i) out.push_back(Passed(-IcScore(ll[i], bits[i] + c)));
    return out;
  };
  EXPECT_EQ(Auroc(scores(id_ll, id_bits, 0.0), scores(ood_ll, ood_bits, 0.0)),
            Auroc(scores(id_ll, id_bits, 1000.0), scores(ood_ll, ood_bits, 1000.0)));
  const double shift = IcScore(-3.0, 7.0 + 4.0) - IcScore(-3.0, 7.0);
  EXPECT_EQ(shift, -4.0);
}

TEST(LratScoreTest, Arithmetic) {
  EXPECT_EQ(LratScore(-100.0, -120.0), 20.0);
  EXPECT_EQ(LratScore(-7.0, -7.0), 0.0);
}

}  // namespace
}  // namespace pixood
