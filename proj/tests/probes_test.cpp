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

#include "pixood/probes.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "pixood/error.hpp"
#include "pixood/rng.hpp"

namespace pixood {
namespace {

ModelConfig TinyConfig() {
  ModelConfig config;
  config.context_radius = 1;
  config.hidden_width = 6;
  config.num_mix = 2;
  config.long_range_taps = std::vector<Offset>{};
  config.positional_features = false;
  return config;
}

ModelState RandomModel(Shape shape, uint64_t seed, ModelConfig config = TinyConfig()) {
  ModelState model(config, shape);
  Rng rng(seed);
  for (auto& p : model.mutable_params()) p = rng.Uniform(-0.5, 0.5);
  return model;
}

Dataset Noise(int count, Shape shape, uint64_t seed) {
  SyntheticSpec spec;
  spec.count = count;
  spec.shape = shape;
  spec.seed = seed;
  return GenerateSynthetic(spec);
}

TEST(ProbeTest, ReproducedPatchGivesZeroDegradation) {
  const Shape shape{1, 1, 1};
  const ModelState model = RandomModel(shape, 1);
  const uint64_t seed = 77;
  Rng replay(seed);
  const auto value = static_cast<uint8_t>(replay.UniformInt(0, 255));
  const ImageTensor img(shape, {value});
  EXPECT_EQ(LocalPerturbationDegradation(model, img, 1, std::nullopt, seed), 0.0);
}

TEST(ProbeTest, SameSeedSameResult) {
  const ModelState model = RandomModel({8, 8, 1}, 2);
  const Dataset ds = Noise(4, {8, 8, 1}, 3);
  const ProbeResult a = DegradationProbe(model, ds, 3, 10, 5);
  const ProbeResult b = DegradationProbe(model, ds, 3, 10, 5);
  EXPECT_EQ(a.degradation_percent, b.degradation_percent);
  EXPECT_LE(a.q25, a.median);
  EXPECT_LE(a.median, a.q75);
  EXPECT_NE(DegradationProbe(model, ds, 3, 10, 6).degradation_percent, a.degradation_percent);
}

TEST(ProbeTest, ZeroLikelihoodIsUndefined) {
  const Shape shape{1, 1, 1};
  ModelState model(TinyConfig(), shape);
  auto& params = model.mutable_params();
  std::fill(params.begin(), params.end(), 0.0);
  params[model.b2_offset() + 2] = -5.0;
  params[model.b2_offset() + 3] = -5.0;
  params[model.b2_offset() + 4] = -7.0;
  params[model.b2_offset() + 5] = -7.0;
  const ImageTensor img(shape, {0});
  ASSERT_EQ(LogLikelihood(model, img), 0.0);
  try {
    LocalPerturbationDegradation(model, img, 1, std::nullopt, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUndefinedRatio);
  }
}

TEST(ProbeTest, RejectsBadPatch) {
  const ModelState model = RandomModel({4, 4, 1}, 4);
  const ImageTensor img = Noise(1, {4, 4, 1}, 1)[0];
  EXPECT_THROW(LocalPerturbationDegradation(model, img, 2, std::nullopt, 0), Error);
  EXPECT_THROW(LocalPerturbationDegradation(model, img, 5, std::nullopt, 0), Error);
}

TEST(ComplexityTableTest, OneRowPerSample) {
  const ModelState model = RandomModel({8, 8, 1}, 5);
  const Dataset a = Noise(3, {8, 8, 1}, 1).WithId("a");
  const Dataset b = Noise(5, {8, 8, 1}, 2).WithId("b\"q");
  const auto rows = ComplexityVsLlTable(model, {a, b}, Codec::kPng);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[4].dataset, "b\"q");
  EXPECT_EQ(rows[4].loglik, LogLikelihood(model, b[1]));
  EXPECT_EQ(rows[4].bits, CompressedLengthBits(b[1], Codec::kPng).bits);
  const std::string csv = ComplexityCsv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_NE(csv.find("\"b\"\"q\",1,"), std::string::npos);
}

TEST(AblationDeltaTest, ZeroLongRangeWeightsGiveZeroMedians) {
  ModelConfig config = TinyConfig();
  config.long_range_taps.reset();
  config.positional_features = true;
  const ModelState model = RandomModel({8, 8, 1}, 6, config);
  const ModelState stripped = AblateLongRange(model);
  const AblationDelta d = ComputeAblationDelta(stripped, Noise(5, {8, 8, 1}, 1), Noise(5, {8, 8, 1}, 2));
  EXPECT_EQ(d.id_median_abs, 0.0);
  EXPECT_EQ(d.ood_median_abs, 0.0);
  const AblationDelta e = ComputeAblationDelta(model, Noise(5, {8, 8, 1}, 1), Noise(5, {8, 8, 1}, 2));
  const AblationDelta f = ComputeAblationDelta(model, Noise(5, {8, 8, 1}, 1), Noise(5, {8, 8, 1}, 2));
  EXPECT_EQ(e.id_deltas, f.id_deltas);
  EXPECT_GT(e.id_median_abs, 0.0);
}

}  // namespace
}  // namespace pixood
