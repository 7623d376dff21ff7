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

#include <cmath>
#include <numeric>
#include <vector>

#include "pixood/error.hpp"
#include "pixood/model.hpp"
#include "pixood/rng.hpp"

namespace pixood {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;

class Adam {
 public:
  Adam(size_t n, double learning_rate) : m_(n, 0.0), v_(n, 0.0), lr_(learning_rate) {}

  void Step(std::vector<double>& params, const std::vector<double>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (size_t i = 0; i < params.size(); ++i) {
      m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * grad[i];
      v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * grad[i] * grad[i];
      params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + kEpsilon);
    }
  }

 private:
  std::vector<double> m_, v_;
  double lr_;
  int64_t t_ = 0;
};

std::vector<const ImageTensor*> Pointers(const Dataset& dataset) {
  std::vector<const ImageTensor*> out;
  out.reserve(dataset.size());
  for (const auto& image : dataset.images()) out.push_back(&image);
  return out;
}

}  // namespace

ModelState Train(const ModelConfig& config, const Dataset& train, const Dataset& val) {
  if (train.shape() != val.shape()) {
    throw Error(ErrorKind::kShape, "train and validation shapes differ");
  }
  ModelState model(config, train.shape());
  ModelState best = model;
  double best_val = MeanNll(model, Pointers(val), nullptr);
  Adam adam(model.num_params(), config.learning_rate);
  const Rng root(config.seed);
  const auto val_images = Pointers(val);
  std::vector<TrainingEpoch> history;
  std::vector<size_t> order(train.size());
  std::vector<double> grad;
  std::vector<const ImageTensor*> batch;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    Rng shuffle = root.Derive(static_cast<uint64_t>(epoch) + 1);
    shuffle.Shuffle(order);
    double epoch_loss = 0.0;
    int batches = 0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(config.batch_size)) {
      batch.clear();
      const size_t stop = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      for (size_t i = start; i < stop; ++i) batch.push_back(&train[order[i]]);
      const double loss = MeanNll(model, batch, &grad);
      if (!std::isfinite(loss)) {
        throw Error(ErrorKind::kDivergence, "non-finite training loss in epoch " + std::to_string(epoch));
      }
      adam.Step(model.mutable_params(), grad);
      epoch_loss += loss;
      ++batches;
    }
    const double val_nll = MeanNll(model, val_images, nullptr);
    if (!std::isfinite(val_nll)) {
      throw Error(ErrorKind::kDivergence, "non-finite validation loss in epoch " + std::to_string(epoch));
    }
    history.push_back({epoch, epoch_loss / batches, val_nll});
    if (val_nll < best_val) {
      best_val = val_nll;
      best = model;
    }
  }
  best.set_history(std::move(history));
  return best;
}

}  // namespace pixood
