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

#include "pixood/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "pixood/error.hpp"
#include "pixood/rng.hpp"

namespace pixood {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using MatrixMap = Eigen::Map<RowMatrix>;

constexpr double kHalfRange = 127.5;
constexpr double kInitialLogScale = 3.0;

double Normalize(uint8_t v) { return static_cast<double>(v) / kHalfRange - 1.0; }

bool IsCausal(const Offset& o) { return o.row < 0 || (o.row == 0 && o.col < 0); }

// Forward pass for one image; optionally accumulates scale * d(-LL)/d params
// into grad and records per-subpixel terms and mixture parameters.
double ForwardBackward(const ModelState& model, const ImageTensor& image, double grad_scale,
                       double* grad, std::vector<double>* per_subpixel,
                       std::vector<MixtureParams>* mixtures) {
  if (image.shape() != model.shape()) {
    throw Error(ErrorKind::kShape, "model expects " + ToString(model.shape()) + ", got " +
                                       ToString(image.shape()));
  }
  const int n_features = model.num_features();
  const int hidden = model.hidden_width();
  const int outputs = model.num_outputs();
  const int k = model.config().num_mix;
  const auto& params = model.params();

  const std::vector<double> feature_data = BuildFeatures(model, image);
  const auto n_rows = static_cast<Eigen::Index>(image.shape().size());
  ConstMatrixMap x(feature_data.data(), n_rows, n_features);
  ConstMatrixMap w1(params.data() + model.w1_offset(), hidden, n_features);
  Eigen::Map<const Eigen::RowVectorXd> b1(params.data() + model.b1_offset(), hidden);
  ConstMatrixMap w2(params.data() + model.w2_offset(), outputs, hidden);
  Eigen::Map<const Eigen::RowVectorXd> b2(params.data() + model.b2_offset(), outputs);

  RowMatrix activations = (x * w1.transpose()).rowwise() + b1;
  activations = activations.array().tanh();
  RowMatrix out = (activations * w2.transpose()).rowwise() + b2;

  RowMatrix d_out;
  if (grad != nullptr) d_out.resize(n_rows, outputs);
  if (per_subpixel != nullptr) per_subpixel->assign(static_cast<size_t>(n_rows), 0.0);
  if (mixtures != nullptr) mixtures->assign(static_cast<size_t>(n_rows), MixtureParams{});

  std::vector<double> locations(k), log_scales(k), d_logits(k), d_loc(k), d_ls(k);
  const auto subpixels = image.data();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const double* row = out.data() + i * outputs;
    for (int j = 0; j < k; ++j) {
      locations[j] = kHalfRange * (1.0 + row[k + j]);
      log_scales[j] = std::max(row[2 * k + j], kLogScaleFloor);
    }
    const std::span<const double> logits(row, static_cast<size_t>(k));
    double log_p;
    if (grad != nullptr) {
      log_p = MixtureLogPmf(logits, locations, log_scales, subpixels[i], d_logits, d_loc, d_ls);
      double* d_row = d_out.data() + i * outputs;
      for (int j = 0; j < k; ++j) {
        d_row[j] = -grad_scale * d_logits[j];
        d_row[k + j] = -grad_scale * d_loc[j] * kHalfRange;
        d_row[2 * k + j] = row[2 * k + j] > kLogScaleFloor ? -grad_scale * d_ls[j] : 0.0;
      }
    } else {
      log_p = MixtureLogPmf(logits, locations, log_scales, subpixels[i]);
    }
    total += log_p;
    if (per_subpixel != nullptr) (*per_subpixel)[static_cast<size_t>(i)] = log_p;
    if (mixtures != nullptr) {
      auto& m = (*mixtures)[static_cast<size_t>(i)];
      m.logits.assign(logits.begin(), logits.end());
      m.locations = locations;
      m.log_scales = log_scales;
    }
  }

  if (grad != nullptr) {
    MatrixMap g_w1(grad + model.w1_offset(), hidden, n_features);
    Eigen::Map<Eigen::RowVectorXd> g_b1(grad + model.b1_offset(), hidden);
    MatrixMap g_w2(grad + model.w2_offset(), outputs, hidden);
    Eigen::Map<Eigen::RowVectorXd> g_b2(grad + model.b2_offset(), outputs);
    g_w2.noalias() += d_out.transpose() * activations;
    g_b2 += d_out.colwise().sum();
    RowMatrix d_pre = (d_out * w2).array() * (1.0 - activations.array().square());
    g_w1.noalias() += d_pre.transpose() * x;
    g_b1 += d_pre.colwise().sum();
    // Pruned first-layer connections never receive gradient.
    const auto& mask = model.first_layer_mask();
    for (size_t p = 0; p < mask.size(); ++p) grad[model.w1_offset() + p] *= mask[p];
  }
  return total;
}

}  // namespace

std::vector<Offset> DefaultLongRangeTaps(const Shape& shape) {
  const int h = shape.height, w = shape.width;
  return {{-h / 2, 0}, {0, -w / 2}, {-h / 2, -w / 2}, {-h / 4, -w / 4}};
}

std::vector<Offset> ResolveLongRangeTaps(const ModelConfig& config, const Shape& shape) {
  return config.long_range_taps ? *config.long_range_taps : DefaultLongRangeTaps(shape);
}

std::vector<Offset> LocalOffsets(int radius) {
  std::vector<Offset> offsets;
  for (int dr = -radius; dr <= 0; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) {
      if (IsCausal({dr, dc})) offsets.push_back({dr, dc});
    }
  }
  return offsets;
}

void ValidateConfig(const ModelConfig& config, const Shape& shape) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kConfig, "model config: " + what); };
  if (config.context_radius < 1) fail("context_radius must be >= 1");
  if (config.num_mix < 1 || config.num_mix > 64) fail("num_mix must be in 1..64");
  if (config.hidden_width < 1) fail("hidden_width must be >= 1");
  if (config.long_range_hidden_fraction < 0.0 || config.long_range_hidden_fraction >= 1.0) {
    fail("long_range_hidden_fraction must be in [0, 1)");
  }
  if (!(config.learning_rate > 0.0)) fail("learning_rate must be positive");
  if (config.epochs < 0 || config.batch_size < 1) fail("epochs >= 0 and batch_size >= 1 required");
  for (const auto& tap : ResolveLongRangeTaps(config, shape)) {
    if (!IsCausal(tap)) {
      fail("long-range tap (" + std::to_string(tap.row) + "," + std::to_string(tap.col) +
           ") is not causal");
    }
  }
}

ModelState::ModelState(ModelConfig config, Shape shape)
    : config_(std::move(config)), shape_(shape) {
  BuildLayout();
  const int f = num_features(), h = hidden_width(), o = num_outputs(), k = config_.num_mix;
  params_.assign(b2_offset() + static_cast<size_t>(o), 0.0);
  Rng rng = Rng(config_.seed).Derive(0x1217);
  const double w1_bound = 1.0 / std::sqrt(static_cast<double>(f));
  for (size_t p = 0; p < static_cast<size_t>(h) * f; ++p) {
    params_[w1_offset() + p] = mask_[p] * rng.Uniform(-w1_bound, w1_bound);
  }
  const double w2_bound = 1.0 / std::sqrt(static_cast<double>(h));
  for (size_t p = 0; p < static_cast<size_t>(o) * h; ++p) {
    params_[w2_offset() + p] = 0.1 * rng.Uniform(-w2_bound, w2_bound);
  }
  for (int j = 0; j < k; ++j) {
    params_[b2_offset() + k + j] = k == 1 ? 0.0 : -0.5 + static_cast<double>(j) / (k - 1);
    params_[b2_offset() + 2 * k + j] = kInitialLogScale;
  }
}

ModelState::ModelState(ModelConfig config, Shape shape, std::vector<double> params,
                       std::vector<TrainingEpoch> history)
    : config_(std::move(config)), shape_(shape), history_(std::move(history)) {
  BuildLayout();
  const size_t expected = b2_offset() + static_cast<size_t>(num_outputs());
  if (params.size() != expected) {
    throw Error(ErrorKind::kValidation, "parameter vector has " + std::to_string(params.size()) +
                                            " entries, model needs " + std::to_string(expected));
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw Error(ErrorKind::kValue, "non-finite model parameter");
  }
  params_ = std::move(params);
}

void ModelState::BuildLayout() {
  ValidateConfig(config_, shape_);
  local_offsets_ = LocalOffsets(config_.context_radius);
  long_range_offsets_ = ResolveLongRangeTaps(config_, shape_);
  const int c = shape_.channels;
  layout_.local_begin = 0;
  layout_.local_end = static_cast<int>(local_offsets_.size()) * c;
  layout_.long_range_begin = layout_.local_end;
  layout_.long_range_end = layout_.long_range_begin + static_cast<int>(long_range_offsets_.size()) * c;
  layout_.channel_begin = layout_.long_range_end;
  layout_.channel_end = layout_.channel_begin + (c > 1 ? 2 * c - 1 : 0);
  layout_.positional_begin = layout_.channel_end;
  layout_.positional_end = layout_.positional_begin + (config_.positional_features ? 2 : 0);

  const int f = layout_.size(), h = config_.hidden_width;
  const int long_range_units =
      static_cast<int>(std::lround(config_.long_range_hidden_fraction * h));
  mask_.assign(static_cast<size_t>(h) * f, 1.0);
  if (long_range_units > 0) {
    for (int unit = 0; unit < h; ++unit) {
      const bool long_range_unit = unit >= h - long_range_units;
      for (int col = 0; col < f; ++col) {
        const bool long_range_input =
            (col >= layout_.long_range_begin && col < layout_.long_range_end) ||
            (col >= layout_.positional_begin && col < layout_.positional_end);
        mask_[static_cast<size_t>(unit) * f + col] = long_range_unit == long_range_input ? 1.0 : 0.0;
      }
    }
  }
}

std::vector<double> BuildFeatures(const ModelState& model, const ImageTensor& image) {
  const Shape& shape = image.shape();
  const int h = shape.height, w = shape.width, c = shape.channels;
  const FeatureLayout& layout = model.layout();
  const int f = layout.size();
  std::vector<double> features(shape.size() * static_cast<size_t>(f), 0.0);

  auto fill_taps = [&](double* row, int begin, const std::vector<Offset>& taps, int r, int col) {
    for (size_t t = 0; t < taps.size(); ++t) {
      const int rr = r + taps[t].row, cc = col + taps[t].col;
      if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
      for (int ch = 0; ch < c; ++ch) row[begin + static_cast<int>(t) * c + ch] = Normalize(image.at(rr, cc, ch));
    }
  };

  for (int r = 0; r < h; ++r) {
    for (int col = 0; col < w; ++col) {
      double* first = features.data() + image.index(r, col, 0) * f;
      fill_taps(first, layout.local_begin, model.local_offsets(), r, col);
      fill_taps(first, layout.long_range_begin, model.long_range_offsets(), r, col);
      if (layout.positional_end > layout.positional_begin) {
        first[layout.positional_begin] = h > 1 ? 2.0 * r / (h - 1) - 1.0 : 0.0;
        first[layout.positional_begin + 1] = w > 1 ? 2.0 * col / (w - 1) - 1.0 : 0.0;
      }
      for (int ch = 1; ch < c; ++ch) {
        std::copy(first, first + f, first + static_cast<size_t>(ch) * f);
      }
      if (c > 1) {
        for (int ch = 0; ch < c; ++ch) {
          double* row = first + static_cast<size_t>(ch) * f;
          for (int prev = 0; prev < ch; ++prev) {
            row[layout.channel_begin + prev] = Normalize(image.at(r, col, prev));
          }
          row[layout.channel_begin + (c - 1) + ch] = 1.0;
        }
      }
    }
  }
  return features;
}

std::vector<MixtureParams> PredictMixtures(const ModelState& model, const ImageTensor& image) {
  std::vector<MixtureParams> mixtures;
  ForwardBackward(model, image, 0.0, nullptr, nullptr, &mixtures);
  return mixtures;
}

double LogLikelihood(const ModelState& model, const ImageTensor& image,
                     std::vector<double>* per_subpixel) {
  return ForwardBackward(model, image, 0.0, nullptr, per_subpixel, nullptr);
}

double MeanNll(const ModelState& model, std::span<const ImageTensor* const> images,
               std::vector<double>* grad) {
  if (images.empty()) throw Error(ErrorKind::kConfig, "MeanNll over no images");
  const double denom = static_cast<double>(images.size()) * static_cast<double>(model.shape().size());
  if (grad != nullptr) grad->assign(model.num_params(), 0.0);
  double total = 0.0;
  for (const ImageTensor* image : images) {
    total += ForwardBackward(model, *image, 1.0 / denom, grad != nullptr ? grad->data() : nullptr,
                             nullptr, nullptr);
  }
  return -total / denom;
}

PredictiveStats ComputePredictiveStats(const ModelState& model, const ImageTensor& image) {
  const auto mixtures = PredictMixtures(model, image);
  const auto data = image.data();
  double recon = 0.0, scale = 0.0;
  for (size_t i = 0; i < mixtures.size(); ++i) {
    const auto& m = mixtures[i];
    const auto dominant = static_cast<size_t>(
        std::max_element(m.logits.begin(), m.logits.end()) - m.logits.begin());
    recon += std::abs(m.locations[dominant] - static_cast<double>(data[i]));
    const double max_logit = m.logits[dominant];
    double norm = 0.0, weighted = 0.0;
    for (int j = 0; j < m.size(); ++j) {
      const double wj = std::exp(m.logits[j] - max_logit);
      norm += wj;
      weighted += wj * std::exp(m.log_scales[j]);
    }
    scale += weighted / norm;
  }
  const auto n = static_cast<double>(mixtures.size());
  return {recon / n, scale / n};
}

ModelState AblateLongRange(const ModelState& model) {
  ModelState copy = model;
  const FeatureLayout& layout = model.layout();
  const int f = layout.size();
  auto& params = copy.mutable_params();
  for (int unit = 0; unit < model.hidden_width(); ++unit) {
    double* row = params.data() + model.w1_offset() + static_cast<size_t>(unit) * f;
    std::fill(row + layout.long_range_begin, row + layout.long_range_end, 0.0);
    std::fill(row + layout.positional_begin, row + layout.positional_end, 0.0);
  }
  return copy;
}

ImageTensor MutateForBackground(const ImageTensor& image, double mu, uint64_t seed) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw Error(ErrorKind::kDomain, "mutation rate must be in [0, 1]");
  Rng rng(seed);
  ImageTensor out = image;
  for (auto& v : out.mutable_data()) {
    if (rng.Bernoulli(mu)) v = static_cast<uint8_t>(rng.UniformInt(0, 255));
  }
  return out;
}

Dataset MutateDataset(const Dataset& dataset, double mu, uint64_t seed) {
  const Rng root(seed);
  std::vector<ImageTensor> images;
  images.reserve(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    images.push_back(MutateForBackground(dataset[i], mu, root.Derive(i).seed()));
  }
  return Dataset(dataset.id() + "+mutated", std::move(images), dataset.split());
}

}  // namespace pixood
