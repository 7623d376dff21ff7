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

#ifndef PIXOOD_MODEL_HPP_
#define PIXOOD_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pixood/image.hpp"
#include "pixood/mixture.hpp"

namespace pixood {

struct Offset {
  int row = 0;
  int col = 0;

  bool operator==(const Offset&) const = default;
};

// Causal autoregressive density model configuration.
//
// Each subpixel is predicted from (a) the causal neighbourhood of radius
// context_radius ("local taps"), (b) a few far-away causal pixels ("long-range
// taps"), (c) already-seen channels of the current pixel and (d) optionally
// its normalized row/column. A one-hidden-layer tanh network maps these to
// the parameters of a discretized logistic mixture.
struct ModelConfig {
  int context_radius = 4;
  // nullopt: the shape-dependent default {(-H/2,0), (0,-W/2), (-H/2,-W/2), (-H/4,-W/4)}.
  std::optional<std::vector<Offset>> long_range_taps;
  bool positional_features = true;
  int hidden_width = 32;
  int num_mix = 5;
  // Fraction of hidden units wired only to long-range and positional inputs;
  // the rest see only local and channel inputs. 0 means fully connected.
  double long_range_hidden_fraction = 0.0;
  double learning_rate = 1e-3;
  int epochs = 10;
  int batch_size = 16;
  uint64_t seed = 0;
};

std::vector<Offset> DefaultLongRangeTaps(const Shape& shape);
std::vector<Offset> ResolveLongRangeTaps(const ModelConfig& config, const Shape& shape);
// Raster-causal (dr < 0, or dr == 0 and dc < 0) neighbourhood, row-major.
std::vector<Offset> LocalOffsets(int radius);

// Throws kConfig when the configuration violates its invariants.
void ValidateConfig(const ModelConfig& config, const Shape& shape);

// Column ranges of the first-layer input vector.
struct FeatureLayout {
  int local_begin = 0, local_end = 0;
  int long_range_begin = 0, long_range_end = 0;
  int channel_begin = 0, channel_end = 0;
  int positional_begin = 0, positional_end = 0;

  int size() const { return positional_end; }
};

struct TrainingEpoch {
  int epoch = 0;
  double train_nll = 0.0;  // nats per subpixel, averaged over the epoch's batches
  double val_nll = 0.0;    // nats per subpixel after the epoch
};

// Trained (or initialized) parameters for one image shape. Immutable once
// training returns; all evaluation entry points are const and thread-safe.
class ModelState {
 public:
  // Deterministic initialization from config.seed.
  ModelState(ModelConfig config, Shape shape);
  ModelState(ModelConfig config, Shape shape, std::vector<double> params,
             std::vector<TrainingEpoch> history = {});

  const ModelConfig& config() const { return config_; }
  const Shape& shape() const { return shape_; }
  const FeatureLayout& layout() const { return layout_; }
  const std::vector<Offset>& local_offsets() const { return local_offsets_; }
  const std::vector<Offset>& long_range_offsets() const { return long_range_offsets_; }
  const std::vector<TrainingEpoch>& history() const { return history_; }

  int num_features() const { return layout_.size(); }
  int hidden_width() const { return config_.hidden_width; }
  int num_outputs() const { return 3 * config_.num_mix; }

  // Flat parameter vector: W1 (hidden x features, row-major), b1, W2
  // (outputs x hidden, row-major), b2. Output rows are K logits, then K
  // locations (normalized, location = 127.5 * (1 + o)), then K log-scales.
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& mutable_params() { return params_; }
  size_t num_params() const { return params_.size(); }

  size_t w1_offset() const { return 0; }
  size_t b1_offset() const { return static_cast<size_t>(hidden_width()) * num_features(); }
  size_t w2_offset() const { return b1_offset() + hidden_width(); }
  size_t b2_offset() const { return w2_offset() + static_cast<size_t>(num_outputs()) * hidden_width(); }

  // 1 where a first-layer weight may be non-zero.
  const std::vector<double>& first_layer_mask() const { return mask_; }

  void set_history(std::vector<TrainingEpoch> history) { history_ = std::move(history); }

 private:
  void BuildLayout();

  ModelConfig config_;
  Shape shape_;
  FeatureLayout layout_;
  std::vector<Offset> local_offsets_;
  std::vector<Offset> long_range_offsets_;
  std::vector<double> params_;
  std::vector<double> mask_;
  std::vector<TrainingEpoch> history_;
};

// Context features for every subpixel of `image` in raster/channel order:
// a (H*W*C) x num_features row-major matrix. Out-of-bounds taps read 0
// (mid-gray after v / 127.5 - 1 normalization).
std::vector<double> BuildFeatures(const ModelState& model, const ImageTensor& image);

// Mixture parameters for every subpixel (subpixel units, floor applied).
std::vector<MixtureParams> PredictMixtures(const ModelState& model, const ImageTensor& image);

// Total log-likelihood in nats. When `per_subpixel` is given it receives the
// H*W*C individual terms; the total is their in-order sum.
double LogLikelihood(const ModelState& model, const ImageTensor& image,
                     std::vector<double>* per_subpixel = nullptr);

// Mean negative log-likelihood (nats per subpixel) over `images` and, when
// `grad` is non-null, its gradient with respect to params().
double MeanNll(const ModelState& model, std::span<const ImageTensor* const> images,
               std::vector<double>* grad);

struct PredictiveStats {
  double recon_error = 0.0;  // mean |dominant location - subpixel|
  double avg_scale = 0.0;    // mean of the weight-averaged component scale
};

PredictiveStats ComputePredictiveStats(const ModelState& model, const ImageTensor& image);

// Copy with every first-layer weight fed by long-range taps or positional
// features set to zero.
ModelState AblateLongRange(const ModelState& model);

// Each subpixel independently replaced, with probability mu, by a uniform
// value in 0..255.
ImageTensor MutateForBackground(const ImageTensor& image, double mu, uint64_t seed);
Dataset MutateDataset(const Dataset& dataset, double mu, uint64_t seed);

// Adam on mean NLL; keeps the parameters of the epoch with the lowest
// validation NLL. Throws kDivergence on a non-finite loss.
ModelState Train(const ModelConfig& config, const Dataset& train, const Dataset& val);

// Minimal interface for anything that assigns log-likelihoods to images.
class LikelihoodModel {
 public:
  virtual ~LikelihoodModel() = default;
  virtual std::string model_id() const = 0;
  virtual double LogLikelihood(const ImageTensor& image) const = 0;
};

class BuiltinModel : public LikelihoodModel {
 public:
  BuiltinModel(const ModelState& state, std::string id) : state_(state), id_(std::move(id)) {}

  std::string model_id() const override { return id_; }
  double LogLikelihood(const ImageTensor& image) const override {
    return pixood::LogLikelihood(state_, image);
  }

 private:
  const ModelState& state_;
  std::string id_;
};

}  // namespace pixood

#endif  // PIXOOD_MODEL_HPP_
