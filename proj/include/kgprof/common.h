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

#ifndef KGPROF_COMMON_H_
#define KGPROF_COMMON_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kgprof {

enum class ErrorCode {
  kMalformedLine,
  kEmptyGraph,
  kUnknownType,
  kTooFewSamples,
  kInvalidAlpha,
  kInvalidArgument,
  kNoUsableDimensions,
  kEmptyPool,
  kMissingEmbedding,
  kEmptyPositives,
  kEmptyNegatives,
  kEmptyCandidates,
  kUntypedEntity,
  kSingletonType,
  kEmptyTruth,
  kMissingInput,
  kFormat,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception. `line` is set
// for parse errors and is 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), code_(code), line_(line) {}

  ErrorCode code() const { return code_; }
  std::size_t line() const { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

// Dense interned identifier. Each tag yields a distinct, non-convertible type.
template <typename Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const Id&) const = default;
};

using EntityId = Id<struct EntityTag>;
using LiteralId = Id<struct LiteralTag>;
using PropertyId = Id<struct PropertyTag>;
using TypeId = Id<struct TypeTag>;

using Rng = std::mt19937_64;

// Derives an independent generator for a sub-stream (anchor, label, ...), so
// results do not depend on scheduling order.
Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt = 0);

// Rounds to 6 significant digits, the precision of every real written to disk.
double round_sig6(double x);
// Same, but rounding toward -inf / +inf.
double floor_sig6(double x);
double ceil_sig6(double x);
std::string format_sig6(double x);

// Runs fn(i) for i in [0, n) over at most `threads` workers. threads <= 1 runs
// inline, in order.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace kgprof

template <typename Tag>
struct std::hash<kgprof::Id<Tag>> {
  std::size_t operator()(const kgprof::Id<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

#endif  // KGPROF_COMMON_H_
