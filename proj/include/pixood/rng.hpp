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

#ifndef PIXOOD_RNG_HPP_
#define PIXOOD_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace pixood {

// Seeded 64-bit generator with implementation-independent derived draws.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Bounded integers use rejection sampling and reals use the top 53
// bits, so every draw below is bit-identical across compilers (unlike the
// std:: distributions).
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t seed() const { return seed_; }

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [lo, hi], inclusive; unbiased.
  int64_t UniformInt(int64_t lo, int64_t hi);

  // Uniform real in [0, 1).
  double Uniform01();

  // Uniform real in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Independent child generator for a named stream. Depends only on the seed
  // and the stream id, never on how many draws the parent has made.
  Rng Derive(uint64_t stream) const;

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<size_t>(UniformInt(0, static_cast<int64_t>(i) - 1));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

uint64_t SplitMix64(uint64_t x);

}  // namespace pixood

#endif  // PIXOOD_RNG_HPP_
