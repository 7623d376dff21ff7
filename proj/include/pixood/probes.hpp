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

#ifndef PIXOOD_PROBES_HPP_
#define PIXOOD_PROBES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pixood/complexity.hpp"
#include "pixood/image.hpp"
#include "pixood/model.hpp"

namespace pixood {

inline constexpr int kDefaultProbeSites = 64;

// Mean over perturbation sites of 100 * (LL_orig - LL_pert) / |LL_orig|,
// where each site replaces the patch x patch neighbourhood of one interior
// pixel with uniform random subpixels. n_sites = nullopt visits every
// interior site; otherwise n_sites are sampled without replacement.
double LocalPerturbationDegradation(const ModelState& model, const ImageTensor& image, int patch,
                                    std::optional<int> n_sites, uint64_t seed);

struct ProbeResult {
  std::vector<double> degradation_percent;  // one per image
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

ProbeResult DegradationProbe(const ModelState& model, const Dataset& dataset, int patch = 3,
                             std::optional<int> n_sites = kDefaultProbeSites, uint64_t seed = 0);

struct ComplexityRow {
  std::string dataset;
  std::string sample_id;
  double bits = 0.0;
  double normalized_bpd = 0.0;
  double loglik = 0.0;
};

std::vector<ComplexityRow> ComplexityVsLlTable(const ModelState& model,
                                               const std::vector<Dataset>& datasets, Codec codec);
std::string ComplexityCsv(const std::vector<ComplexityRow>& rows);

struct AblationDelta {
  std::vector<double> id_deltas;   // LL(model) - LL(ablated), per ID sample
  std::vector<double> ood_deltas;
  double id_median_abs = 0.0;
  double ood_median_abs = 0.0;
};

AblationDelta ComputeAblationDelta(const ModelState& model, const Dataset& id_set, const Dataset& ood_set);

}  // namespace pixood

#endif  // PIXOOD_PROBES_HPP_
