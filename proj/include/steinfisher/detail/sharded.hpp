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

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace steinfisher {

template <class T>
std::vector<T> draw_sharded(const std::function<T(Stream&)>& source, const SamplingPlan& plan) {
  const std::size_t shard_size = std::max<std::size_t>(plan.shard_size, 1);
  const std::size_t shards = (plan.reps + shard_size - 1) / shard_size;
  std::vector<T> out(plan.reps);

  auto run_shard = [&](std::size_t s) {
    Stream stream(plan.seed, shard_substream(plan, s));
    const std::size_t begin = s * shard_size;
    const std::size_t end = std::min(plan.reps, begin + shard_size);
    for (std::size_t i = begin; i < end; ++i) out[i] = source(stream);
  };

  const int requested = plan.threads > 0 ? plan.threads : default_thread_count();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(requested, 1)), shards);
  if (workers <= 1) {
    for (std::size_t s = 0; s < shards; ++s) run_shard(s);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t s = w; s < shards; s += workers) run_shard(s);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace steinfisher
