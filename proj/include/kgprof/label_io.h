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

// JSON forms of labels, candidate pools, scored pools, label sets and
// selection traces. Every file is an object carrying "format" and "version";
// readers also accept a bare array of label objects. Labels refer to types,
// properties and entities by name and are resolved against the graph.

#ifndef KGPROF_LABEL_IO_H_
#define KGPROF_LABEL_IO_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgprof/distinct.h"
#include "kgprof/graph.h"
#include "kgprof/labels.h"
#include "kgprof/rerank.h"

namespace kgprof {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// {"kind", "type", "property", "inverse", then one of "interval" (AIL:
// {"lo", "hi", "closed"}), "value" (AVL literal), "target" (REL entity name)
// or "inner" (RAL nested label object)}. Reals carry 6 significant digits.
Json label_to_json(const Label& l, const KnowledgeGraph& g);
// Throws kFormat on malformed objects or names absent from the graph.
Label label_from_json(const Json& j, const KnowledgeGraph& g);

Json interval_to_json(const Interval& iv);

void write_candidates(const CandidatePool& pool, const KnowledgeGraph& g, double alpha,
                      std::ostream& out);
// Positives and support are recomputed from the graph.
CandidatePool read_candidates(std::istream& in, const KnowledgeGraph& g);

void write_scored(std::span<const ScoredLabel> scored, const KnowledgeGraph& g, std::ostream& out);
std::vector<ScoredLabel> read_scored(std::istream& in, const KnowledgeGraph& g);

void write_label_sets(std::span<const LabelSet> sets, const KnowledgeGraph& g, std::size_t k,
                      double delta, std::ostream& out);
// Restores labels in rank order and the coverage bitsets; traces are kept in
// their own file and come back empty.
std::vector<LabelSet> read_label_sets(std::istream& in, const KnowledgeGraph& g);

// One JSON object per line and step: type, rank, label, d, reward, penalty,
// objective, covered_count.
void write_trace(std::span<const LabelSet> sets, const KnowledgeGraph& g, std::ostream& out);

// Parses a whole stream, mapping parse errors to kFormat.
Json parse_json(std::istream& in, const std::string& what);

}  // namespace kgprof

#endif  // KGPROF_LABEL_IO_H_
