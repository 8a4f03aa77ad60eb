// Copyright (c) 2026 The svs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVS_BASE_HASH_H_
#define SVS_BASE_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace svs {

// 64-bit FNV-1a; stable across platforms, used for config hashes and cache
// keys.
constexpr uint64_t Fnv1a64(std::string_view data,
                           uint64_t seed = 0xcbf29ce484222325ULL) {
  uint64_t h = seed;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string HexDigest(uint64_t value);

// SplitMix64 generator. Portable replacement for std distributions whose
// output is implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double Uniform() { return (Next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) without modulo bias.
  uint64_t Below(uint64_t n);

  double Gaussian();

 private:
  uint64_t state_;
};

}  // namespace svs

#endif  // SVS_BASE_HASH_H_
