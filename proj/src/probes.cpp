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

#include <charconv>
#include <cmath>
#include <sstream>

#include "pixood/error.hpp"
#include "pixood/rng.hpp"
#include "pixood/scoring.hpp"

namespace pixood {

double LocalPerturbationDegradation(const ModelState& model, const ImageTensor& image, int patch,
                                    std::optional<int> n_sites, uint64_t seed) {
  if (patch < 1 || patch % 2 == 0) throw Error(ErrorKind::kConfig, "probe patch size must be odd");
  if (patch > std::min(image.height(), image.width())) {
    throw Error(ErrorKind::kConfig, "probe patch larger than the image");
  }
  const double original = LogLikelihood(model, image);
  if (original == 0.0) throw Error(ErrorKind::kUndefinedRatio, "original log-likelihood is 0");
  const int half = patch / 2;
  std::vector<std::pair<int, int>> sites;
  for (int r = half; r < image.height() - half; ++r) {
    for (int c = half; c < image.width() - half; ++c) sites.emplace_back(r, c);
  }
  Rng rng(seed);
  if (n_sites) {
    if (*n_sites < 1) throw Error(ErrorKind::kConfig, "n_sites must be >= 1");
    rng.Shuffle(sites);
    if (static_cast<size_t>(*n_sites) < sites.size()) sites.resize(static_cast<size_t>(*n_sites));
  }
  ImageTensor work = image;
  double total = 0.0;
  for (const auto& [row, col] : sites) {
    for (int r = row - half; r <= row + half; ++r) {
      for (int c = col - half; c <= col + half; ++c) {
        for (int ch = 0; ch < image.channels(); ++ch) {
          work.at(r, c, ch) = static_cast<uint8_t>(rng.UniformInt(0, 255));
        }
      }
    }
    const double perturbed = LogLikelihood(model, work);
    total += 100.0 * (original - perturbed) / std::abs(original);
    for (int r = row - half; r <= row + half; ++r) {
      for (int c = col - half; c <= col + half; ++c) {
        for (int ch = 0; ch < image.channels(); ++ch) work.at(r, c, ch) = image.at(r, c, ch);
      }
    }
  }
  return total / static_cast<double>(sites.size());
}

ProbeResult DegradationProbe(const ModelState& model, const Dataset& dataset, int patch,
                             std::optional<int> n_sites, uint64_t seed) {
  ProbeResult result;
  const Rng root(seed);
  for (size_t i = 0; i < dataset.size(); ++i) {
    result.degradation_percent.push_back(
        LocalPerturbationDegradation(model, dataset[i], patch, n_sites, root.Derive(i).seed()));
  }
  result.q25 = Quantile(result.degradation_percent, 0.25);
  result.median = Quantile(result.degradation_percent, 0.5);
  result.q75 = Quantile(result.degradation_percent, 0.75);
  return result;
}

std::vector<ComplexityRow> ComplexityVsLlTable(const ModelState& model,
                                               const std::vector<Dataset>& datasets, Codec codec) {
  std::vector<ComplexityRow> rows;
  for (const auto& dataset : datasets) {
    for (size_t i = 0; i < dataset.size(); ++i) {
      const auto estimate = CompressedLengthBits(dataset[i], codec);
      rows.push_back({dataset.id(), std::to_string(i), estimate.bits, estimate.normalized_bpd,
                      LogLikelihood(model, dataset[i])});
    }
  }
  return rows;
}

std::string ComplexityCsv(const std::vector<ComplexityRow>& rows) {
  auto num = [](double v) {
    char buffer[64];
    return std::string(buffer, std::to_chars(buffer, buffer + sizeof(buffer), v).ptr);
  };
  auto quote = [](const std::string& text) {
    std::string q = "\"";
    for (char c : text) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream out;
  out << "dataset,sample_id,bits,normalized_bpd,loglik\n";
  for (const auto& r : rows) {
    out << quote(r.dataset) << ',' << r.sample_id << ',' << num(r.bits) << ','
        << num(r.normalized_bpd) << ',' << num(r.loglik) << '\n';
  }
  return out.str();
}

AblationDelta ComputeAblationDelta(const ModelState& model, const Dataset& id_set, const Dataset& ood_set) {
  const ModelState ablated = AblateLongRange(model);
  AblationDelta delta;
  auto deltas = [&](const Dataset& dataset, std::vector<double>& out) {
    for (const auto& image : dataset.images()) {
      out.push_back(LogLikelihood(model, image) - LogLikelihood(ablated, image));
    }
  };
  deltas(id_set, delta.id_deltas);
  deltas(ood_set, delta.ood_deltas);
  auto median_abs = [](const std::vector<double>& values) {
    std::vector<double> abs_values;
    for (double v : values) abs_values.push_back(std::abs(v));
    return Median(abs_values);
  };
  delta.id_median_abs = median_abs(delta.id_deltas);
  delta.ood_median_abs = median_abs(delta.ood_deltas);
  return delta;
}

}  // namespace pixood
