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

#include "pixood/transforms.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "pixood/error.hpp"
#include "pixood/rng.hpp"

namespace pixood {

namespace {

constexpr int kSampledFamilySize = 20;
constexpr int kStirCount = 7;
constexpr int kQuadrantDerangements = 9;

struct Grid {
  int rows = 1;
  int cols = 1;
};

Grid PatchGrid(Family family) {
  switch (family) {
    case Family::kShake:
    case Family::kStirShakeCoord:
    case Family::kStirShakeIndep:
      return {2, 2};
    case Family::kVSlat:
      return {1, 4};
    case Family::kHSlat:
      return {4, 1};
    case Family::kShake16:
      return {4, 4};
    default:
      return {1, 1};
  }
}

std::string TwoDigits(int value) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%02d", value);
  return buffer;
}

// Maps an output coordinate inside an n_rows x n_cols block to the source
// coordinate under `op`.
void DihedralSource(const Dihedral& op, int n_rows, int n_cols, int& r, int& c) {
  const int sr = r, sc = c;
  switch (op.quarter_turns % 4) {
    case 1:  // clockwise: out[r][c] = in[n - 1 - c][r]; square blocks only
      r = n_rows - 1 - sc;
      c = sr;
      break;
    case 2:
      r = n_rows - 1 - sr;
      c = n_cols - 1 - sc;
      break;
    case 3:
      r = sc;
      c = n_cols - 1 - sr;
      break;
    default:
      break;
  }
  if (op.flip) c = n_cols - 1 - c;
}

bool IsDerangement(const std::vector<int>& p) {
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == static_cast<int>(i)) return false;
  }
  return true;
}

const std::vector<std::vector<int>>& QuadrantDerangements() {
  static const auto kDerangements = Derangements(4);
  return kDerangements;
}

uint64_t FamilyStream(Family family) { return 0x5157ULL + static_cast<uint64_t>(family); }

std::vector<TransformId> SampleShake16(uint64_t seed) {
  Rng rng = Rng(seed).Derive(FamilyStream(Family::kShake16));
  std::set<std::vector<int>> seen;
  std::vector<TransformId> members;
  while (static_cast<int>(members.size()) < kSampledFamilySize) {
    std::vector<int> perm(16);
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
    if (!IsDerangement(perm) || !seen.insert(perm).second) continue;
    TransformId tid;
    tid.family = Family::kShake16;
    tid.index = static_cast<int>(members.size());
    tid.seed = seed;
    tid.permutation = perm;
    members.push_back(std::move(tid));
  }
  return members;
}

std::vector<TransformId> SampleStirShakeCoord(uint64_t seed) {
  Rng rng = Rng(seed).Derive(FamilyStream(Family::kStirShakeCoord));
  std::vector<int> space(kStirCount * kQuadrantDerangements);
  std::iota(space.begin(), space.end(), 0);
  rng.Shuffle(space);
  std::vector<TransformId> members;
  for (int k = 0; k < kSampledFamilySize; ++k) {
    const int stir = space[k] / kQuadrantDerangements;
    const int shake = space[k] % kQuadrantDerangements;
    TransformId tid;
    tid.family = Family::kStirShakeCoord;
    tid.index = k;
    tid.seed = seed;
    tid.permutation = QuadrantDerangements()[shake];
    tid.patch_ops.assign(4, StirElements()[stir]);
    members.push_back(std::move(tid));
  }
  return members;
}

std::vector<TransformId> SampleStirShakeIndep(uint64_t seed) {
  Rng rng = Rng(seed).Derive(FamilyStream(Family::kStirShakeIndep));
  std::set<std::vector<int>> seen;
  std::vector<TransformId> members;
  while (static_cast<int>(members.size()) < kSampledFamilySize) {
    std::vector<int> key(5);
    for (int q = 0; q < 4; ++q) key[q] = static_cast<int>(rng.UniformInt(0, kStirCount - 1));
    key[4] = static_cast<int>(rng.UniformInt(0, kQuadrantDerangements - 1));
    if (!seen.insert(key).second) continue;
    TransformId tid;
    tid.family = Family::kStirShakeIndep;
    tid.index = static_cast<int>(members.size());
    tid.seed = seed;
    tid.permutation = QuadrantDerangements()[key[4]];
    for (int q = 0; q < 4; ++q) tid.patch_ops.push_back(StirElements()[key[q]]);
    members.push_back(std::move(tid));
  }
  return members;
}

void RequireShape(const TransformId& tid, int height, int width) {
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::kShape, tid.str() + " cannot apply to " + std::to_string(height) + "x" +
                                       std::to_string(width) + ": " + why);
  };
  const bool quarter_turn = std::any_of(tid.patch_ops.begin(), tid.patch_ops.end(),
                                        [](const Dihedral& d) { return d.quarter_turns % 2 == 1; });
  switch (tid.family) {
    case Family::kIdentity:
      return;
    case Family::kStir:
      if (quarter_turn && height != width) fail("90/270 degree rotation needs a square image");
      return;
    case Family::kShake:
      if (height % 2 != 0 || width % 2 != 0) fail("quadrants need even sides");
      return;
    case Family::kStirShakeCoord:
    case Family::kStirShakeIndep:
      if (height % 2 != 0 || width % 2 != 0) fail("quadrants need even sides");
      if (quarter_turn && height != width) fail("rotated quadrants need a square image");
      return;
    case Family::kVSlat:
    case Family::kHSlat:
    case Family::kShake16:
      if (height % 4 != 0 || width % 4 != 0) fail("sides must be divisible by 4");
      return;
  }
}

}  // namespace

const char* FamilyName(Family family) {
  switch (family) {
    case Family::kIdentity: return "identity";
    case Family::kStir: return "stir";
    case Family::kShake: return "shake";
    case Family::kVSlat: return "vslat";
    case Family::kHSlat: return "hslat";
    case Family::kShake16: return "shake16";
    case Family::kStirShakeCoord: return "stirshake-coord";
    case Family::kStirShakeIndep: return "stirshake-indep";
  }
  return "identity";
}

Family ParseFamily(const std::string& name) {
  static const std::map<std::string, Family> kFamilies = {
      {"identity", Family::kIdentity},
      {"stir", Family::kStir},
      {"shake", Family::kShake},
      {"vslat", Family::kVSlat},
      {"hslat", Family::kHSlat},
      {"shake16", Family::kShake16},
      {"stirshake-coord", Family::kStirShakeCoord},
      {"stirshake-indep", Family::kStirShakeIndep}};
  const auto it = kFamilies.find(name);
  if (it == kFamilies.end()) throw Error(ErrorKind::kConfig, "unknown transform family '" + name + "'");
  return it->second;
}

bool IsSampledFamily(Family family) {
  return family == Family::kShake16 || family == Family::kStirShakeCoord ||
         family == Family::kStirShakeIndep;
}

const std::vector<Dihedral>& StirElements() {
  static const std::vector<Dihedral> kElements = {
      {false, 1}, {false, 2}, {false, 3}, {true, 0}, {true, 1}, {true, 2}, {true, 3}};
  return kElements;
}

std::string StirName(const Dihedral& element) {
  if (!element.flip) {
    return element.quarter_turns == 0 ? "identity" : "rot" + std::to_string(90 * element.quarter_turns);
  }
  return element.quarter_turns == 0 ? "flip" : "flip-rot" + std::to_string(90 * element.quarter_turns);
}

std::string TransformId::str() const {
  switch (family) {
    case Family::kIdentity:
      return "identity";
    case Family::kStir:
      return "stir/" + StirName(patch_ops.at(0));
    case Family::kShake:
      return "shake/q" + TwoDigits(index);
    case Family::kVSlat:
    case Family::kHSlat:
      return std::string(FamilyName(family)) + "/" + TwoDigits(index);
    case Family::kShake16:
    case Family::kStirShakeCoord:
    case Family::kStirShakeIndep:
      return std::string(FamilyName(family)) + "/" + std::to_string(seed.value_or(0)) + "/" +
             std::to_string(index);
  }
  return "identity";
}

TransformId IdentityTransform() { return TransformId{}; }

std::vector<std::string> TransformFamily::ids() const {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.str());
  return out;
}

int FamilySize(Family family) {
  switch (family) {
    case Family::kIdentity: return 0;
    case Family::kStir: return kStirCount;
    case Family::kShake:
    case Family::kVSlat:
    case Family::kHSlat: return kQuadrantDerangements;
    default: return kSampledFamilySize;
  }
}

std::vector<std::vector<int>> Derangements(int n) {
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    if (IsDerangement(perm)) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

TransformFamily EnumerateFamily(Family family, std::optional<uint64_t> seed) {
  TransformFamily result;
  result.family = family;
  if (IsSampledFamily(family)) {
    if (!seed) throw Error(ErrorKind::kConfig, std::string(FamilyName(family)) + " requires a seed");
    result.seed = seed;
  }
  switch (family) {
    case Family::kIdentity:
      break;
    case Family::kStir:
      for (int i = 0; i < kStirCount; ++i) {
        TransformId tid;
        tid.family = family;
        tid.index = i;
        tid.patch_ops = {StirElements()[i]};
        result.members.push_back(std::move(tid));
      }
      break;
    case Family::kShake:
    case Family::kVSlat:
    case Family::kHSlat: {
      const auto& perms = QuadrantDerangements();
      for (size_t i = 0; i < perms.size(); ++i) {
        TransformId tid;
        tid.family = family;
        tid.index = static_cast<int>(i);
        tid.permutation = perms[i];
        result.members.push_back(std::move(tid));
      }
      break;
    }
    case Family::kShake16:
      result.members = SampleShake16(*seed);
      break;
    case Family::kStirShakeCoord:
      result.members = SampleStirShakeCoord(*seed);
      break;
    case Family::kStirShakeIndep:
      result.members = SampleStirShakeIndep(*seed);
      break;
  }
  return result;
}

TransformId ParseTransformId(const std::string& id) {
  if (id == "identity") return IdentityTransform();
  std::vector<std::string> parts;
  std::stringstream stream(id);
  std::string part;
  while (std::getline(stream, part, '/')) parts.push_back(part);
  const auto bad = [&] { return Error(ErrorKind::kValidation, "unknown transform id '" + id + "'"); };
  if (parts.size() < 2) throw bad();
  Family family;
  try {
    family = ParseFamily(parts[0]);
  } catch (const Error&) {
    throw bad();
  }
  try {
    if (IsSampledFamily(family)) {
      if (parts.size() != 3) throw bad();
      const uint64_t seed = std::stoull(parts[1]);
      const int k = std::stoi(parts[2]);
      if (k < 0 || k >= kSampledFamilySize || std::to_string(seed) != parts[1] ||
          std::to_string(k) != parts[2]) {
        throw bad();
      }
      return EnumerateFamily(family, seed).members[static_cast<size_t>(k)];
    }
    if (parts.size() != 2) throw bad();
    for (auto& tid : EnumerateFamily(family).members) {
      if (tid.str() == id) return tid;
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  throw bad();
}

std::vector<uint32_t> SourcePixelMap(const TransformId& tid, int height, int width) {
  RequireShape(tid, height, width);
  std::vector<uint32_t> map(static_cast<size_t>(height) * width);
  if (tid.family == Family::kIdentity) {
    std::iota(map.begin(), map.end(), 0u);
    return map;
  }
  if (tid.family == Family::kStir) {
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        int sr = r, sc = c;
        DihedralSource(tid.patch_ops[0], height, width, sr, sc);
        map[static_cast<size_t>(r) * width + c] = static_cast<uint32_t>(sr * width + sc);
      }
    }
    return map;
  }
  const Grid grid = PatchGrid(tid.family);
  const int ph = height / grid.rows;
  const int pw = width / grid.cols;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const int out_patch = (r / ph) * grid.cols + c / pw;
      int lr = r % ph, lc = c % pw;
      if (!tid.patch_ops.empty()) DihedralSource(tid.patch_ops[out_patch], ph, pw, lr, lc);
      const int src_patch = tid.permutation[out_patch];
      const int sr = (src_patch / grid.cols) * ph + lr;
      const int sc = (src_patch % grid.cols) * pw + lc;
      map[static_cast<size_t>(r) * width + c] = static_cast<uint32_t>(sr * width + sc);
    }
  }
  return map;
}

ImageTensor Apply(const TransformId& tid, const ImageTensor& image) {
  const auto map = SourcePixelMap(tid, image.height(), image.width());
  const int channels = image.channels();
  ImageTensor out(image.shape());
  auto dst = out.mutable_data();
  const auto src = image.data();
  for (size_t p = 0; p < map.size(); ++p) {
    for (int ch = 0; ch < channels; ++ch) dst[p * channels + ch] = src[map[p] * channels + ch];
  }
  return out;
}

ImageTensor Invert(const TransformId& tid, const ImageTensor& image) {
  const auto map = SourcePixelMap(tid, image.height(), image.width());
  const int channels = image.channels();
  ImageTensor out(image.shape());
  auto dst = out.mutable_data();
  const auto src = image.data();
  for (size_t p = 0; p < map.size(); ++p) {
    for (int ch = 0; ch < channels; ++ch) dst[map[p] * channels + ch] = src[p * channels + ch];
  }
  return out;
}

}  // namespace pixood
