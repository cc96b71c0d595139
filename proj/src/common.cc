// Copyright 2026 The Authors.
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

#include "kgprof/common.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include <fmt/format.h>

namespace kgprof {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kUnknownType: return "UnknownType";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kInvalidAlpha: return "InvalidAlpha";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNoUsableDimensions: return "NoUsableDimensions";
    case ErrorCode::kEmptyPool: return "EmptyPool";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kEmptyPositives: return "EmptyPositives";
    case ErrorCode::kEmptyNegatives: return "EmptyNegatives";
    case ErrorCode::kEmptyCandidates: return "EmptyCandidates";
    case ErrorCode::kUntypedEntity: return "UntypedEntity";
    case ErrorCode::kSingletonType: return "SingletonType";
    case ErrorCode::kEmptyTruth: return "EmptyTruth";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double sig6_unit(double x) {
  const double e = std::floor(std::log10(std::fabs(x)));
  return std::pow(10.0, e - 5);
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ stream);
  s = mix64(s ^ (salt * 0xd1b54a32d192ed03ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return Rng(seq);
}

std::string format_sig6(double x) { return fmt::format("{:.6g}", x); }

double round_sig6(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  return std::strtod(format_sig6(x).c_str(), nullptr);
}

double floor_sig6(double x) {
  double r = round_sig6(x);
  if (r > x) r = round_sig6(r - sig6_unit(r));
  return r;
}

double ceil_sig6(double x) {
  double r = round_sig6(x);
  if (r < x) r = round_sig6(r + sig6_unit(r));
  return r;
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min(threads, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kgprof
