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

#include "kgprof/label_io.h"

#include <algorithm>
#include <istream>
#include <iterator>
#include <ostream>

#include <fmt/format.h>

namespace kgprof {

namespace {

constexpr const char* kCandidatesFormat = "kgprof.candidates";
constexpr const char* kScoredFormat = "kgprof.scored";
constexpr const char* kLabelSetFormat = "kgprof.labelset";

[[noreturn]] void format_error(const std::string& msg) { throw Error(ErrorCode::kFormat, msg); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) format_error(fmt::format("missing field '{}'", name));
  return j.at(name);
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) format_error(fmt::format("field '{}' must be a string", name));
  return v.get<std::string>();
}

double number_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number()) format_error(fmt::format("field '{}' must be a number", name));
  return v.get<double>();
}

// The label array of a file, checking the format tag when present.
const Json& label_array(const Json& root, const char* format, const char* member) {
  if (root.is_array()) return root;
  if (!root.is_object()) format_error(fmt::format("expected a {} document", format));
  if (root.contains("format") && root["format"] != format) {
    format_error(fmt::format("expected format '{}', found {}", format, root["format"].dump()));
  }
  if (root.contains("version") && root["version"] != kFormatVersion) {
    format_error(fmt::format("unsupported {} version {}", format, root["version"].dump()));
  }
  const Json& arr = field(root, member);
  if (!arr.is_array()) format_error(fmt::format("field '{}' must be an array", member));
  return arr;
}

Json header(const char* format) {
  Json j;
  j["format"] = format;
  j["version"] = kFormatVersion;
  return j;
}

Json candidate_json(const Candidate& c, const KnowledgeGraph& g) {
  Json j = label_to_json(c.label, g);
  j["key"] = c.key;
  j["support"] = round_sig6(c.support);
  j["positives"] = c.positives.size();
  return j;
}

Json scored_json(const ScoredLabel& s, const KnowledgeGraph& g) {
  Json j = candidate_json(s.candidate, g);
  j["distinctiveness"] = round_sig6(s.d);
  j["internal_sim"] = round_sig6(s.internal_sim);
  j["external_sim"] = round_sig6(s.external_sim);
  j["estimator"] = s.estimator == Estimator::kExact ? "exact" : "sampled";
  if (s.estimator == Estimator::kSampled) j["pair_budget"] = s.pair_budget;
  return j;
}

ScoredLabel scored_from_json(const Json& j, const KnowledgeGraph& g) {
  ScoredLabel s;
  s.candidate = candidate_for(label_from_json(j, g), g);
  s.internal_sim = number_field(j, "internal_sim");
  s.external_sim = number_field(j, "external_sim");
  s.d = s.internal_sim - s.external_sim;
  const std::string est = string_field(j, "estimator");
  if (est == "exact") {
    s.estimator = Estimator::kExact;
  } else if (est == "sampled") {
    s.estimator = Estimator::kSampled;
    s.pair_budget = static_cast<std::size_t>(number_field(j, "pair_budget"));
  } else {
    format_error(fmt::format("unknown estimator '{}'", est));
  }
  return s;
}

void write_json(const Json& j, std::ostream& out) {
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed");
}

}  // namespace

Json parse_json(std::istream& in, const std::string& what) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kFormat, fmt::format("{}: invalid JSON: {}", what, e.what()));
  }
}

Json interval_to_json(const Interval& iv) {
  Json j;
  j["lo"] = round_sig6(iv.lo);
  j["hi"] = round_sig6(iv.hi);
  j["closed"] = iv.closed_hi;
  return j;
}

Json label_to_json(const Label& l, const KnowledgeGraph& g) {
  Json j;
  j["kind"] = std::string(label_kind_name(l.kind()));
  j["type"] = g.type_name(l.type);
  j["property"] = g.property_name(l.property);
  j["inverse"] = l.inverse;
  switch (l.kind()) {
    case LabelKind::kAIL:
      j["interval"] = interval_to_json(l.interval());
      break;
    case LabelKind::kAVL:
      j["value"] = l.text();
      break;
    case LabelKind::kREL:
      j["target"] = g.entity_name(l.target());
      break;
    case LabelKind::kRAL:
      j["inner"] = label_to_json(l.inner(), g);
      break;
  }
  return j;
}

Label label_from_json(const Json& j, const KnowledgeGraph& g) {
  const std::string kind = string_field(j, "kind");
  const std::string type_name = string_field(j, "type");
  const std::string prop_name = string_field(j, "property");
  const auto t = g.find_type(type_name);
  if (!t) format_error(fmt::format("unknown type '{}'", type_name));
  const auto p = g.find_property(prop_name);
  if (!p) format_error(fmt::format("unknown property '{}'", prop_name));
  bool inverse = false;
  if (j.contains("inverse")) {
    if (!j["inverse"].is_boolean()) format_error("field 'inverse' must be a boolean");
    inverse = j["inverse"].get<bool>();
  }
  if (kind == "AIL") {
    const Json& value = field(j, "interval");
    Interval iv{number_field(value, "lo"), number_field(value, "hi"), false};
    if (value.contains("closed")) {
      if (!value["closed"].is_boolean()) format_error("field 'closed' must be a boolean");
      iv.closed_hi = value["closed"].get<bool>();
    }
    if (!(iv.lo <= iv.hi)) format_error("interval bounds out of order");
    return Label::ail(*t, *p, iv);
  }
  if (kind == "AVL") return Label::avl(*t, *p, string_field(j, "value"));
  if (kind == "REL") {
    const std::string target = string_field(j, "target");
    const auto e = g.find_entity(target);
    if (!e) format_error(fmt::format("unknown entity '{}'", target));
    return Label::rel(*t, *p, *e, inverse);
  }
  if (kind == "RAL") {
    try {
      return Label::ral(*t, *p, label_from_json(field(j, "inner"), g), inverse);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kFormat) throw;
      format_error(e.what());
    }
  }
  format_error(fmt::format("unknown label kind '{}'", kind));
}

void write_candidates(const CandidatePool& pool, const KnowledgeGraph& g, double alpha,
                      std::ostream& out) {
  Json j = header(kCandidatesFormat);
  j["alpha"] = round_sig6(alpha);
  const PoolCounts c = pool.counts();
  j["counts"] = {{"AIL", c.ail}, {"AVL", c.avl}, {"RAL", c.ral}, {"REL", c.rel}};
  Json labels = Json::array();
  for (const TypePool& tp : pool.types) {
    for (const Candidate& cand : tp.candidates) labels.push_back(candidate_json(cand, g));
  }
  j["labels"] = std::move(labels);
  write_json(j, out);
}

CandidatePool read_candidates(std::istream& in, const KnowledgeGraph& g) {
  const Json root = parse_json(in, "candidate pool");
  std::vector<Label> labels;
  for (const Json& item : label_array(root, kCandidatesFormat, "labels")) {
    labels.push_back(label_from_json(item, g));
  }
  return pool_from_labels(labels, g);
}

void write_scored(std::span<const ScoredLabel> scored, const KnowledgeGraph& g, std::ostream& out) {
  Json j = header(kScoredFormat);
  Json labels = Json::array();
  for (const ScoredLabel& s : scored) labels.push_back(scored_json(s, g));
  j["labels"] = std::move(labels);
  write_json(j, out);
}

std::vector<ScoredLabel> read_scored(std::istream& in, const KnowledgeGraph& g) {
  const Json root = parse_json(in, "scored pool");
  std::vector<ScoredLabel> out;
  for (const Json& item : label_array(root, kScoredFormat, "labels")) {
    out.push_back(scored_from_json(item, g));
  }
  return out;
}

void write_label_sets(std::span<const LabelSet> sets, const KnowledgeGraph& g, std::size_t k,
                      double delta, std::ostream& out) {
  Json j = header(kLabelSetFormat);
  j["k"] = k;
  j["delta"] = round_sig6(delta);
  Json types = Json::array();
  for (const LabelSet& set : sets) {
    Json t;
    t["type"] = g.type_name(set.type);
    t["population"] = set.population;
    t["covered"] = set.covered.count();
    Json labels = Json::array();
    for (std::size_t i = 0; i < set.labels.size(); ++i) {
      Json l = scored_json(set.labels[i], g);
      l["rank"] = i + 1;
      labels.push_back(std::move(l));
    }
    t["labels"] = std::move(labels);
    types.push_back(std::move(t));
  }
  j["types"] = std::move(types);
  write_json(j, out);
}

std::vector<LabelSet> read_label_sets(std::istream& in, const KnowledgeGraph& g) {
  const Json root = parse_json(in, "label set");
  std::vector<LabelSet> out;
  if (root.is_array()) {
    // Bare label array: one set per type in file order of first appearance.
    std::vector<ScoredLabel> scored;
    for (const Json& item : root) {
      ScoredLabel s;
      s.candidate = candidate_for(label_from_json(item, g), g);
      if (item.contains("internal_sim")) s = scored_from_json(item, g);
      scored.push_back(std::move(s));
    }
    for (ScoredLabel& s : scored) {
      const TypeId t = s.candidate.label.type;
      auto it = std::find_if(out.begin(), out.end(), [&](const LabelSet& ls) { return ls.type == t; });
      if (it == out.end()) {
        LabelSet ls;
        ls.type = t;
        ls.population = g.entities_of_type(t).size();
        ls.covered = Bitset(ls.population);
        out.push_back(std::move(ls));
        it = std::prev(out.end());
      }
      it->covered |= to_bitset(s.candidate.positives, it->population);
      it->labels.push_back(std::move(s));
    }
    return out;
  }
  const Json& types = label_array(root, kLabelSetFormat, "types");
  for (const Json& t : types) {
    const std::string name = string_field(t, "type");
    const auto type = g.find_type(name);
    if (!type) format_error(fmt::format("unknown type '{}'", name));
    LabelSet ls;
    ls.type = *type;
    ls.population = g.entities_of_type(*type).size();
    ls.covered = Bitset(ls.population);
    const Json& labels = field(t, "labels");
    if (!labels.is_array()) format_error("field 'labels' must be an array");
    std::vector<std::pair<std::size_t, ScoredLabel>> ranked;
    for (const Json& item : labels) {
      ScoredLabel s = scored_from_json(item, g);
      if (s.candidate.label.type != *type) format_error("label type differs from its set");
      ranked.emplace_back(static_cast<std::size_t>(number_field(item, "rank")), std::move(s));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [rank, s] : ranked) {
      ls.covered |= to_bitset(s.candidate.positives, ls.population);
      ls.labels.push_back(std::move(s));
    }
    out.push_back(std::move(ls));
  }
  return out;
}

void write_trace(std::span<const LabelSet> sets, const KnowledgeGraph& g, std::ostream& out) {
  for (const LabelSet& set : sets) {
    for (const SelectionStep& step : set.trace) {
      Json j;
      j["type"] = g.type_name(set.type);
      j["rank"] = step.rank;
      j["label"] = set.labels[step.rank - 1].candidate.key;
      j["d"] = round_sig6(step.d);
      j["reward"] = round_sig6(step.reward);
      j["penalty"] = round_sig6(step.penalty);
      j["objective"] = round_sig6(step.objective);
      j["covered_count"] = step.covered_count;
      out << j.dump() << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed");
}

}  // namespace kgprof
