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

#ifndef PIXOOD_MIXTURE_HPP_
#define PIXOOD_MIXTURE_HPP_

#include <span>
#include <vector>

namespace pixood {

// Lower bound on per-component log-scale (subpixel units).
inline constexpr double kLogScaleFloor = -7.0;
inline constexpr int kMaxSubpixel = 255;

// Parameters of a K-component discretized mixture of logistics over the
// integer subpixel values 0..255. Locations and log-scales are in subpixel
// units; logits are unnormalized log mixture weights.
struct MixtureParams {
  std::vector<double> logits;
  std::vector<double> locations;
  std::vector<double> log_scales;

  int size() const { return static_cast<int>(logits.size()); }
};

// log P(x) where each component contributes the logistic mass of the bin
// [x - 0.5, x + 0.5]; the x = 0 bin extends to -inf and the x = 255 bin to
// +inf so the 256 bins partition the real line. Log-scales below
// kLogScaleFloor are clamped to it. Throws kDomain for x outside 0..255.
double DiscretizedLogisticMixtureLogPmf(const MixtureParams& params, int x);

// Span-based core used by the model. Writes d logP / d parameter into the
// gradient spans when they are non-empty. Log-scales are used as given (the
// caller applies the floor).
double MixtureLogPmf(std::span<const double> logits, std::span<const double> locations,
                     std::span<const double> log_scales, int x, std::span<double> d_logits = {},
                     std::span<double> d_locations = {}, std::span<double> d_log_scales = {});

// Log-mass of one logistic component on bin x, with partial derivatives with
// respect to location and log-scale when the out-pointers are non-null.
double LogisticBinLogMass(int x, double location, double log_scale, double* d_location = nullptr,
                          double* d_log_scale = nullptr);

double Softplus(double x);

}  // namespace pixood

#endif  // PIXOOD_MIXTURE_HPP_
