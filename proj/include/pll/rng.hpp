// Copyright 2026 The pllearn Authors
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

#ifndef PLL_RNG_HPP
#define PLL_RNG_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace pll {

// Seedable, portable random generator used for every stochastic step in the
// library (label-set synthesis, stream generation, shuffling). The algorithm
// is pinned so that streams reproduce bit-for-bit across platforms and can be
// re-implemented in other languages:
//
//   state seeding : SplitMix64 (Steele, Lea, Vigna 2014), four outputs
//   stream        : xoshiro256++ 1.0 (Blackman, Vigna 2019)
//   uniform double: (next_u64() >> 11) * 2^-53, in [0, 1)
//   bounded int   : Lemire's multiply-shift rejection method
//   normal        : Box-Muller, cosine branch, two uniforms per call
//
// Derived substreams use seed = base_seed + run_index.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53 random bits.
  double uniform();

  // Uniform integer in [0, n), unbiased. n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);

  // Standard normal deviate.
  double normal();

  // Uniform point on the sphere of the given radius in `dim` dimensions.
  std::vector<double> on_sphere(int dim, double radius);

  // In-place Fisher-Yates shuffle of [0, n) index permutations and vectors.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values drawn uniformly from `pool` (partial Fisher-Yates,
  // pool taken by value). Result order is the draw order.
  std::vector<int> sample_without_replacement(std::vector<int> pool, int k);

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace pll

#endif  // PLL_RNG_HPP
