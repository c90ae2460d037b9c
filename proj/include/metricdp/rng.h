//
// Copyright 2026 The metricdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef METRICDP_RNG_H_
#define METRICDP_RNG_H_

#include <cstdint>
#include <random>

namespace metricdp {

// Seed-splitting rule used by every randomized operation:
//
//   stream_seed(seed, i) = SplitMix64(seed ^ SplitMix64(i + 1))
//
// Row i of a database (or coordinate i of a function sample) draws from an
// std::mt19937_64 seeded with stream_seed(seed, i). Streams are therefore
// independent of the order in which rows are visited.
std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t stream);

// Uniform doubles in the open interval (0, 1) built from the top 53 bits of
// mt19937_64 output, so sequences are identical across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}
  Stream(std::uint64_t seed, std::uint64_t stream)
      : engine_(StreamSeed(seed, stream)) {}

  double NextUniform();

  // Laplace(0, scale) by inversion.
  double NextLaplace(double scale);

 private:
  std::mt19937_64 engine_;
};

}  // namespace metricdp

#endif  // METRICDP_RNG_H_
