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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace intentdiv {

// splitmix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Hashes a seed and a tuple of integer keys into one stream key. Used to
// give every (user, day, session, purpose) its own random stream so paired
// runs see the same draws wherever their histories agree.
std::uint64_t StreamKey(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

// splitmix64 generator; satisfies UniformRandomBitGenerator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t key) : state_(key) {}
  StreamRng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
      : state_(StreamKey(seed, keys)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer in [0, n); n > 0.
  std::uint64_t Below(std::uint64_t n);
  // Standard normal (Box-Muller, no cached pair).
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::uint64_t state_;
};

// Single uniform draw on [0, 1) determined entirely by the key tuple.
double KeyedUniform(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

}  // namespace intentdiv
