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

#include "pixood/mixture.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pixood/error.hpp"
#include "pixood/rng.hpp"

namespace pixood {
namespace {

MixtureParams RandomParams(Rng& rng, int k) {
  MixtureParams p;
  for (int j = 0; j < k; ++j) {
    p.logits.push_back(rng.Uniform(-3.0, 3.0));
    p.locations.push_back(rng.Uniform(-20.0, 275.0));
    p.log_scales.push_back(rng.Uniform(-8.0, 4.0));
  }
  return p;
}

std::vector<double> Softmax(const std::vector<double>& logits) {
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  std::vector<double> w;
  double total = 0.0;
  for (double v : logits) total += std::exp(v - m);
  for (double v : logits) w.push_back(std::exp(v - m) / total);
  return w;
}

TEST(MixtureTest, SumsToOne) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const MixtureParams p = RandomParams(rng, 1 + trial % 6);
    double total = 0.0;
    for (int x = 0; x <= 255; ++x) total += std::exp(DiscretizedLogisticMixtureLogPmf(p, x));
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(MixtureTest, MassConcentratesAtZeroBin) {
  const MixtureParams p{{0.0}, {0.0}, {-7.0}};
  EXPECT_NEAR(DiscretizedLogisticMixtureLogPmf(p, 0), 0.0, 1e-12);
  const MixtureParams below_floor{{0.0}, {0.0}, {-50.0}};
  EXPECT_EQ(DiscretizedLogisticMixtureLogPmf(below_floor, 0), DiscretizedLogisticMixtureLogPmf(p, 0));
}

TEST(MixtureTest, SymmetricInteriorBins) {
  const MixtureParams p{{0.0, 0.0}, {50.0, 200.0}, {std::log(10.0), std::log(10.0)}};
  const long double expected = oracle::DirectMixturePmf({0.5, 0.5}, {50.0, 200.0}, {10.0, 10.0}, 50);
  EXPECT_NEAR(std::exp(DiscretizedLogisticMixtureLogPmf(p, 50)), static_cast<double>(expected), 1e-15);
  EXPECT_NEAR(DiscretizedLogisticMixtureLogPmf(p, 50), DiscretizedLogisticMixtureLogPmf(p, 200), 1e-12);
}

TEST(MixtureTest, MatchesDirectOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    MixtureParams p = RandomParams(rng, 3);
    for (auto& s : p.log_scales) s = std::max(s, 0.0);
    const auto w = Softmax(p.logits);
    std::vector<double> scales;
    for (double s : p.log_scales) scales.push_back(std::exp(s));
    for (int x : {0, 1, 17, 128, 254, 255}) {
      const long double direct = oracle::DirectMixturePmf(w, p.locations, scales, x);
      if (direct < 1e-12L) continue;
      EXPECT_NEAR(DiscretizedLogisticMixtureLogPmf(p, x), std::log(static_cast<double>(direct)), 1e-9);
    }
  }
}

TEST(MixtureTest, FarTailStaysFinite) {
  const MixtureParams p{{0.0}, {0.0}, {-7.0}};
  const double lp = DiscretizedLogisticMixtureLogPmf(p, 200);
  EXPECT_TRUE(std::isfinite(lp));
  EXPECT_LT(lp, -1e5);
}

TEST(MixtureTest, OutOfRangeSubpixelIsDomainError) {
  const MixtureParams p{{0.0}, {0.0}, {0.0}};
  EXPECT_THROW(DiscretizedLogisticMixtureLogPmf(p, 256), Error);
  EXPECT_THROW(DiscretizedLogisticMixtureLogPmf(p, -1), Error);
}

TEST(MixtureTest, GradientsMatchFiniteDifferences) {
  Rng rng(5);
  constexpr double kStep = 1e-4;
  for (int trial = 0; trial < 30; ++trial) {
    MixtureParams p = RandomParams(rng, 4);
    for (auto& s : p.log_scales) s = rng.Uniform(-1.0, 3.0);
    const int x = static_cast<int>(rng.UniformInt(0, 255));
    std::vector<double> dl(4), dm(4), ds(4);
    MixtureLogPmf(p.logits, p.locations, p.log_scales, x, dl, dm, ds);
    auto eval = [&](std::vector<double>& field, size_t j, double delta) {
      const double saved = field[j];
      field[j] = saved + delta;
      const double v = MixtureLogPmf(p.logits, p.locations, p.log_scales, x);
      field[j] = saved;
      return v;
    };
    for (size_t j = 0; j < 4; ++j) {
      for (auto [field, grad] : {std::pair{&p.logits, &dl}, std::pair{&p.locations, &dm},
                                 std::pair{&p.log_scales, &ds}}) {
        const double numeric = (eval(*field, j, kStep) - eval(*field, j, -kStep)) / (2 * kStep);
        EXPECT_NEAR((*grad)[j], numeric, 1e-5 * std::max(1.0, std::abs(numeric)));
      }
    }
  }
}

}  // namespace
}  // namespace pixood
