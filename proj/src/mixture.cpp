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

#include <algorithm>
#include <cmath>
#include <string>

#include "pixood/error.hpp"

namespace pixood {

double Softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

namespace {

// log(sigmoid(x))
double LogSigmoid(double x) { return -Softplus(-x); }

// log(sigmoid'(x)) = log(sigmoid(x)) + log(sigmoid(-x))
double LogSigmoidDerivative(double x) { return -Softplus(x) - Softplus(-x); }

// log(exp(d) - 1) for d > 0.
double LogExpm1(double d) {
  if (d > 30.0) return d + std::log1p(-std::exp(-d));
  return std::log(std::expm1(d));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double LogisticBinLogMass(int x, double location, double log_scale, double* d_location,
                          double* d_log_scale) {
  const double inv_scale = std::exp(-log_scale);
  const double centered = static_cast<double>(x) - location;
  const double upper = (centered + 0.5) * inv_scale;
  const double lower = (centered - 0.5) * inv_scale;
  // d/d location and d/d log_scale of the bin edges.
  const double d_edge_loc = -inv_scale;

  double log_mass;
  double d_upper = 0.0;  // d log_mass / d upper
  double d_lower = 0.0;  // d log_mass / d lower
  if (x == 0) {
    log_mass = LogSigmoid(upper);
    d_upper = Sigmoid(-upper);
  } else if (x == kMaxSubpixel) {
    log_mass = LogSigmoid(-lower);
    d_lower = -Sigmoid(lower);
  } else {
    // sigma(a) - sigma(b) = sigma(-b) - sigma(-a); evaluate on the side where
    // the edges are mostly negative to avoid cancellation.
    double a = upper, b = lower;
    const bool reflect = (a + b) > 0.0;
    if (reflect) {
      a = -lower;
      b = -upper;
    }
    // log(sigma(a) - sigma(b)) = b + log(expm1(a - b)) - softplus(a) - softplus(b)
    log_mass = b + LogExpm1(a - b) - Softplus(a) - Softplus(b);
    const double da = std::exp(LogSigmoidDerivative(a) - log_mass);
    const double db = -std::exp(LogSigmoidDerivative(b) - log_mass);
    if (reflect) {
      d_upper = -db;
      d_lower = -da;
    } else {
      d_upper = da;
      d_lower = db;
    }
  }
  if (d_location != nullptr) *d_location = (d_upper + d_lower) * d_edge_loc;
  if (d_log_scale != nullptr) *d_log_scale = -(d_upper * upper + d_lower * lower);
  return log_mass;
}

double MixtureLogPmf(std::span<const double> logits, std::span<const double> locations,
                     std::span<const double> log_scales, int x, std::span<double> d_logits,
                     std::span<double> d_locations, std::span<double> d_log_scales) {
  const size_t k = logits.size();
  const bool want_grad = !d_logits.empty();
  double max_logit = logits[0];
  for (size_t j = 1; j < k; ++j) max_logit = std::max(max_logit, logits[j]);
  double sum_exp = 0.0;
  for (size_t j = 0; j < k; ++j) sum_exp += std::exp(logits[j] - max_logit);
  const double log_norm = max_logit + std::log(sum_exp);

  // joint_j = log w_j + log mass_j
  double joint[64];
  double d_loc[64];
  double d_ls[64];
  double max_joint = -INFINITY;
  for (size_t j = 0; j < k; ++j) {
    const double log_mass = LogisticBinLogMass(x, locations[j], log_scales[j],
                                               want_grad ? &d_loc[j] : nullptr,
                                               want_grad ? &d_ls[j] : nullptr);
    joint[j] = logits[j] - log_norm + log_mass;
    max_joint = std::max(max_joint, joint[j]);
  }
  double total = 0.0;
  for (size_t j = 0; j < k; ++j) total += std::exp(joint[j] - max_joint);
  const double log_p = max_joint + std::log(total);
  if (want_grad) {
    for (size_t j = 0; j < k; ++j) {
      const double responsibility = std::exp(joint[j] - log_p);
      const double weight = std::exp(logits[j] - log_norm);
      d_logits[j] = responsibility - weight;
      d_locations[j] = responsibility * d_loc[j];
      d_log_scales[j] = responsibility * d_ls[j];
    }
  }
  return log_p;
}

double DiscretizedLogisticMixtureLogPmf(const MixtureParams& params, int x) {
  if (x < 0 || x > kMaxSubpixel) {
    throw Error(ErrorKind::kDomain, "subpixel value " + std::to_string(x) + " outside [0, 255]");
  }
  const int k = params.size();
  if (k < 1 || k > 64 || static_cast<int>(params.locations.size()) != k ||
      static_cast<int>(params.log_scales.size()) != k) {
    throw Error(ErrorKind::kDomain, "mixture needs 1..64 components with matching parameter lengths");
  }
  std::vector<double> log_scales(params.log_scales);
  for (auto& s : log_scales) s = std::max(s, kLogScaleFloor);
  return MixtureLogPmf(params.logits, params.locations, log_scales, x);
}

}  // namespace pixood
