// Copyright 2026 The intentdiv Authors.
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

#include "intentdiv/random.hpp"

#include <cmath>
#include <numbers>

namespace intentdiv {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t StreamKey(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = Mix64(seed ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t k : keys) h = Mix64(h ^ Mix64(k + 0x3c6ef372fe94f82bULL));
  return h;
}

StreamRng::result_type StreamRng::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double StreamRng::Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t StreamRng::Below(std::uint64_t n) {
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return x % n;
}

double StreamRng::Normal() {
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double KeyedUniform(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  return static_cast<double>(StreamKey(seed, keys) >> 11) * 0x1.0p-53;
}

}  // namespace intentdiv
