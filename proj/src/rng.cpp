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

#include "pll/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pll {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
  // xoshiro256++ step.
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::uniform_below: n must be > 0");
  // Lemire multiply-shift with rejection of the biased low range.
  unsigned __int128 m =
      static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0ULL - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() {
  // Box-Muller, cosine branch. u1 shifted into (0, 1] so log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::vector<double> Rng::on_sphere(int dim, double radius) {
  if (dim < 1) throw std::invalid_argument("Rng::on_sphere: dim must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(dim));
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (auto& e : v) {
      e = normal();
      norm_sq += e * e;
    }
  } while (norm_sq == 0.0);
  const double scale = radius / std::sqrt(norm_sq);
  for (auto& e : v) e *= scale;
  return v;
}

std::vector<int> Rng::sample_without_replacement(std::vector<int> pool, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > pool.size())
    throw std::invalid_argument("Rng::sample_without_replacement: k out of range");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  std::size_t remaining = pool.size();
  for (int i = 0; i < k; ++i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(remaining));
    out.push_back(pool[j]);
    pool[j] = pool[remaining - 1];
    --remaining;
  }
  return out;
}

}  // namespace pll
