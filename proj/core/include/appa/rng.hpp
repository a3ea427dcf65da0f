// Copyright 2026 The appa-ed Authors
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

#ifndef APPA_RNG_HPP
#define APPA_RNG_HPP

#include <cstdint>
#include <random>

namespace appa {

/// Deterministic random stream used for every stochastic decision of the
/// engine.
///
/// The generator is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Real draws are formed from the top 53 bits of each 64-bit
/// word, so `uniform01()` is bit-identical across compilers and platforms
/// (unlike std::uniform_real_distribution, whose algorithm is unspecified).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform draw in [0, 1).
  double uniform01() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform draw in [lo, hi]; never leaves the closed interval.
  double uniform(double lo, double hi) noexcept {
    const double x = lo + (hi - lo) * uniform01();
    return x > hi ? hi : x;
  }

  std::uint64_t next_u64() noexcept { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace appa

#endif  // APPA_RNG_HPP
