// Copyright 2026 The quenchsim authors
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

#pragma once

#include <cstdint>

namespace quench {

/// Mixes a key and a counter into a pseudo-random 64-bit word (SplitMix64
/// finalizer). Used both as the core of CounterRng and to derive independent
/// substream seeds, so that results are bitwise reproducible no matter how
/// work is scheduled across threads.
std::uint64_t mix_u64(std::uint64_t key, std::uint64_t counter);

/// Derives the seed of substream `index` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix_u64(master, index);
}

// Stream tags, so different consumers of the same master seed never collide.
inline constexpr std::uint64_t kStreamRealizations = 0x7265616c697a6531ULL;
inline constexpr std::uint64_t kStreamBootstrap = 0x626f6f7473747230ULL;
inline constexpr std::uint64_t kStreamTemperatureCurve = 0x7463757276653031ULL;
inline constexpr std::uint64_t kStreamRecompile = 0x7265636f6d703031ULL;
inline constexpr std::uint64_t kStreamNoisyRun = 0x6e6f697379303030ULL;

/// Counter-based generator: the n-th output is a pure function of (key, n).
/// Gaussian variates come from Box-Muller on consecutive uniforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix_u64(key_, counter_++); }

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform double in [low, high).
  double uniform(double low, double high);

  /// Unbiased integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal variate (Box-Muller; the pair partner is cached).
  double gaussian();

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace quench
