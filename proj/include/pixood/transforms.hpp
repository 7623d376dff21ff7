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

#ifndef PIXOOD_TRANSFORMS_HPP_
#define PIXOOD_TRANSFORMS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pixood/image.hpp"

namespace pixood {

// Bijective test-time image transformations: "stirring" (the 7 non-identity
// dihedral symmetries of the square), "shaking" (patch derangements) and the
// slat / 16-patch / combined variants. All channels move together.

enum class Family {
  kIdentity,
  kStir,
  kShake,
  kVSlat,
  kHSlat,
  kShake16,
  kStirShakeCoord,
  kStirShakeIndep,
};

const char* FamilyName(Family family);
Family ParseFamily(const std::string& name);
bool IsSampledFamily(Family family);

// Element of the dihedral group: mirror about the vertical midline first
// (when `flip`), then rotate clockwise by quarter_turns * 90 degrees.
struct Dihedral {
  bool flip = false;
  int quarter_turns = 0;

  bool operator==(const Dihedral&) const = default;
};

// Canonical order: rot90, rot180, rot270, flip, flip-rot90, flip-rot180, flip-rot270.
const std::vector<Dihedral>& StirElements();
std::string StirName(const Dihedral& element);

struct TransformId {
  Family family = Family::kIdentity;
  int index = 0;                  // ordinal within the family
  std::optional<uint64_t> seed;   // sampled families only
  // Patch families: output patch i (row-major) is taken from input patch
  // permutation[i]. Empty for stir and identity.
  std::vector<int> permutation;
  // Stir: one element. Combined families: one element per output patch,
  // applied to the patch contents after it is moved.
  std::vector<Dihedral> patch_ops;

  // Canonical string used as the likelihood-cache key, e.g. "stir/rot90",
  // "shake/q03", "shake16/7/12".
  std::string str() const;

  bool operator==(const TransformId& other) const { return str() == other.str(); }
};

TransformId IdentityTransform();

struct TransformFamily {
  Family family = Family::kStir;
  std::optional<uint64_t> seed;
  std::vector<TransformId> members;

  std::vector<std::string> ids() const;
};

// Number of members in each family (7, 9, 9, 9, 20, 20, 20).
int FamilySize(Family family);

TransformFamily EnumerateFamily(Family family, std::optional<uint64_t> seed = std::nullopt);

// Inverse of TransformId::str(). Sampled ids re-enumerate their family.
TransformId ParseTransformId(const std::string& id);

// All fixed-point-free permutations of {0..n-1}, lexicographic.
std::vector<std::vector<int>> Derangements(int n);

// Output pixel p of Apply(tid, x) is input pixel map[p].
std::vector<uint32_t> SourcePixelMap(const TransformId& tid, int height, int width);

ImageTensor Apply(const TransformId& tid, const ImageTensor& image);
ImageTensor Invert(const TransformId& tid, const ImageTensor& image);

}  // namespace pixood

#endif  // PIXOOD_TRANSFORMS_HPP_
