// Copyright 2026 The lindrec Authors
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

#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace lindrec {

using Complex = std::complex<double>;

// --- Error types ---------------------------------------------------------

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested object exceeds the configured memory/size budget.
struct SizeBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDensityMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSteadyState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingObservable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SharedBlockTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SignAmbiguous : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signals a formula/assembly bug, not bad input.
struct InternalConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// --- Reproducible randomness ---------------------------------------------

// splitmix64; used to derive independent named seeds from a master seed.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t index = 0) {
  return splitmix64(splitmix64(base ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) + index);
}

inline uint64_t hash_string(std::string_view s) {
  // FNV-1a
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

using Rng = std::mt19937_64;

// --- Tiny parallel-for ----------------------------------------------------

// Runs fn(i) for i in [0, n) on up to n_threads workers. Results must be
// written to pre-sized storage indexed by i so the outcome is independent
// of scheduling.
inline void parallel_for(std::size_t n, int n_threads,
                         const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (n_threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(n_threads), n);
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mutex;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace lindrec
