// Copyright 2026 The stein-fisher Authors
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

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace steinfisher {

/// Philox4x32 with 10 rounds: a keyed bijection on 128-bit counters.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// SplitMix64 finalizer, used to hash (seed, n, shard, ...) tuples into substream ids.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t substream_id(std::initializer_list<std::uint64_t> parts);

/// Counter-based random stream. The key is derived from the seed, the upper half
/// of the Philox counter holds the substream id and the lower half the block
/// index, so distinct (seed, substream) pairs never share a block.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed, std::uint64_t substream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Gamma with unit scale.
  double gamma(double shape);
  double chi_square(double dof);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t substream() const noexcept { return substream_; }
  std::uint64_t blocks_used() const noexcept { return block_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t substream_;
  Philox4x32::Key key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace steinfisher
