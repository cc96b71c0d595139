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

#include "kgprof/labels.h"

#include <algorithm>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

namespace kgprof {

std::string_view label_kind_name(LabelKind kind) {
  switch (kind) {
    case LabelKind::kAIL: return "AIL";
    case LabelKind::kAVL: return "AVL";
    case LabelKind::kRAL: return "RAL";
    case LabelKind::kREL: return "REL";
  }
  return "?";
}

bool NestedTerm::operator==(const NestedTerm& o) const {
  if (inner == o.inner) return true;
  if (!inner || !o.inner) return false;
  return *inner == *o.inner;
}

LabelKind Label::kind() const {
  switch (value.index()) {
    case 0: return LabelKind::kAIL;
    case 1: return LabelKind::kAVL;
    case 2: return LabelKind::kREL;
    default: return LabelKind::kRAL;
  }
}

Label Label::ail(TypeId t, PropertyId p, Interval iv) { return Label{t, p, false, iv}; }

Label Label::avl(TypeId t, PropertyId p, std::string value) {
  return Label{t, p, false, ValueTerm{std::move(value)}};
}

Label Label::rel(TypeId t, PropertyId p, EntityId target, bool inverse) {
  return Label{t, p, inverse, EntityTerm{target}};
}

Label Label::ral(TypeId t, PropertyId p, Label inner, bool inverse) {
  if (inner.kind() != LabelKind::kAIL && inner.kind() != LabelKind::kAVL) {
    throw Error(ErrorCode::kInvalidArgument, "RAL inner label must be AIL or AVL");
  }
  return Label{t, p, inverse, NestedTerm{std::make_shared<const Label>(std::move(inner))}};
}

std::string label_key(const Label& l, const KnowledgeGraph& g) {
  std::string out = fmt::format("{}|{}|{}{}|", label_kind_name(l.kind()), g.type_name(l.type),
                                l.inverse ? "^" : "", g.property_name(l.property));
  switch (l.kind()) {
    case LabelKind::kAIL: {
      const Interval& iv = l.interval();
      out += fmt::format("[{},{}{}", format_sig6(iv.lo), format_sig6(iv.hi),
                         iv.closed_hi ? "]" : ")");
      break;
    }
    case LabelKind::kAVL: out += l.text(); break;
    case LabelKind::kREL: out += g.entity_name(l.target()); break;
    case LabelKind::kRAL: out += "<" + label_key(l.inner(), g) + ">"; break;
  }
  return out;
}

namespace {

bool attribute_matches(const Label& l, EntityId e, const KnowledgeGraph& g) {
  for (const Edge& edge : g.out_edges(e)) {
    if (edge.property != l.property || !edge.is_attribute()) continue;
    const LiteralValue& v = g.literal(edge.target_literal());
    if (l.kind() == LabelKind::kAIL) {
      if (v.is_numeric() && l.interval().contains(v.number)) return true;
    } else if (v.raw == l.text()) {
      return true;
    }
  }
  return false;
}

// Calls fn(neighbor) for each relation neighbor of `e` through l.property in
// the label's direction; stops early when fn returns true.
template <typename Fn>
bool any_related(const Label& l, EntityId e, const KnowledgeGraph& g, Fn&& fn) {
  if (!l.inverse) {
    for (const Edge& edge : g.out_edges(e)) {
      if (edge.property == l.property && edge.is_relation() && fn(edge.target_entity())) {
        return true;
      }
    }
    return false;
  }
  const auto edges = g.edges();
  for (std::uint32_t idx : g.in_relation_edges(e)) {
    const Edge& edge = edges[idx];
    if (edge.property == l.property && fn(edge.source)) return true;
  }
  return false;
}

}  // namespace

bool matches(const Label& l, EntityId e, const KnowledgeGraph& g) {
  if (e.value >= g.num_entities() || !g.has_type(e, l.type)) return false;
  switch (l.kind()) {
    case LabelKind::kAIL:
    case LabelKind::kAVL:
      return attribute_matches(l, e, g);
    case LabelKind::kREL: {
      const EntityId target = l.target();
      return any_related(l, e, g, [&](EntityId x) { return x == target; });
    }
    case LabelKind::kRAL: {
      const Label& inner = l.inner();
      return any_related(l, e, g, [&](EntityId x) { return matches(inner, x, g); });
    }
  }
  return false;
}

namespace {

// Sources (or targets, for inverse labels) of type `t` linked to `x` by `p`.
template <typename Fn>
void for_each_linked(const KnowledgeGraph& g, EntityId x, PropertyId p, bool inverse, Fn&& fn) {
  if (!inverse) {
    const auto edges = g.edges();
    for (std::uint32_t idx : g.in_relation_edges(x)) {
      if (edges[idx].property == p) fn(edges[idx].source);
    }
  } else {
    for (const Edge& edge : g.out_edges(x)) {
      if (edge.property == p && edge.is_relation()) fn(edge.target_entity());
    }
  }
}

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<std::uint32_t> positive_positions(const Label& l, const KnowledgeGraph& g) {
  std::vector<std::uint32_t> out;
  const auto members = g.entities_of_type(l.type);
  switch (l.kind()) {
    case LabelKind::kAIL:
    case LabelKind::kAVL:
      for (std::uint32_t i = 0; i < members.size(); ++i) {
        if (attribute_matches(l, members[i], g)) out.push_back(i);
      }
      return out;
    case LabelKind::kREL:
      for_each_linked(g, l.target(), l.property, l.inverse, [&](EntityId e) {
        if (auto pos = g.position_in_type(l.type, e)) out.push_back(*pos);
      });
      break;
    case LabelKind::kRAL: {
      const Label& inner = l.inner();
      const auto inner_members = g.entities_of_type(inner.type);
      for (std::uint32_t x : positive_positions(inner, g)) {
        for_each_linked(g, inner_members[x], l.property, l.inverse, [&](EntityId e) {
          if (auto pos = g.position_in_type(l.type, e)) out.push_back(*pos);
        });
      }
      break;
    }
  }
  sort_unique(out);
  return out;
}

double support(const Label& l, const KnowledgeGraph& g) {
  const auto members = g.entities_of_type(l.type);
  if (members.empty()) {
    throw Error(ErrorCode::kUnknownType, fmt::format("type id {} has no entities", l.type.value));
  }
  std::size_t hits = 0;
  for (EntityId e : members) hits += matches(l, e, g) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(members.size());
}

AttributeClass classify_attribute(std::span<const LiteralValue> values) {
  std::size_t years = 0, numbers = 0;
  for (const LiteralValue& v : values) {
    if (v.kind == LiteralValue::Kind::kYear) ++years;
    if (v.kind == LiteralValue::Kind::kNumber) ++numbers;
  }
  const double total = static_cast<double>(values.size());
  if (values.empty()) return AttributeClass::kCategorical;
  if (static_cast<double>(years) >= 0.9 * total) return AttributeClass::kYear;
  if (static_cast<double>(years + numbers) >= 0.9 * total) return AttributeClass::kNumeric;
  return AttributeClass::kCategorical;
}

std::size_t CandidatePool::size() const {
  std::size_t n = 0;
  for (const auto& tp : types) n += tp.candidates.size();
  return n;
}

PoolCounts CandidatePool::counts() const {
  PoolCounts c;
  for (const auto& tp : types) {
    for (const auto& cand : tp.candidates) {
      switch (cand.label.kind()) {
        case LabelKind::kAIL: ++c.ail; break;
        case LabelKind::kAVL: ++c.avl; break;
        case LabelKind::kRAL: ++c.ral; break;
        case LabelKind::kREL: ++c.rel; break;
      }
    }
  }
  return c;
}

const TypePool* CandidatePool::find(TypeId t) const {
  auto it = std::lower_bound(types.begin(), types.end(), t,
                             [](const TypePool& tp, TypeId id) { return tp.type < id; });
  if (it == types.end() || it->type != t) return nullptr;
  return &*it;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// Appends `pos` unless it is already the last element; positions arrive in
// nondecreasing order, so this deduplicates.
void push_unique(std::vector<std::uint32_t>& v, std::uint32_t pos) {
  if (v.empty() || v.back() != pos) v.push_back(pos);
}

struct RelKey {
  PropertyId property;
  EntityId target;
  bool inverse;
  auto operator<=>(const RelKey&) const = default;
};

struct RalKey {
  PropertyId property;
  TypeId inner_type;
  std::uint32_t inner_index;
  bool inverse;
  auto operator<=>(const RalKey&) const = default;
};

Candidate make_candidate(Label label, std::vector<std::uint32_t> positives, std::size_t population,
                         const KnowledgeGraph& g) {
  Candidate c;
  c.key = label_key(label, g);
  c.label = std::move(label);
  c.positives = std::move(positives);
  c.support = static_cast<double>(c.positives.size()) / static_cast<double>(population);
  return c;
}

std::vector<Interval> intervals_for(AttributeClass cls, std::span<const double> numbers,
                                    const DiscretizePolicy& density) {
  DiscretizePolicy policy = density;
  if (cls == AttributeClass::kYear) policy.mode = DiscretizePolicy::Mode::kYear;
  try {
    return discretize(numbers, policy);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTooFewSamples) throw;
  }
  // Too few values to estimate a density: one interval over the whole range.
  const auto [lo, hi] = std::minmax_element(numbers.begin(), numbers.end());
  return {Interval{floor_sig6(*lo), ceil_sig6(*hi), true}};
}

TypePool enumerate_base(const KnowledgeGraph& g, TypeId t, const EnumerateOptions& options) {
  TypePool pool;
  pool.type = t;
  const auto members = g.entities_of_type(t);
  pool.population = members.size();

  std::map<PropertyId, std::vector<std::pair<std::uint32_t, LiteralId>>> attrs;
  std::map<RelKey, std::vector<std::uint32_t>> rels;
  const auto edges = g.edges();
  for (std::uint32_t pos = 0; pos < members.size(); ++pos) {
    const EntityId e = members[pos];
    for (const Edge& edge : g.out_edges(e)) {
      if (edge.is_attribute()) {
        attrs[edge.property].emplace_back(pos, edge.target_literal());
      } else {
        push_unique(rels[RelKey{edge.property, edge.target_entity(), false}], pos);
      }
    }
    if (options.include_inverse) {
      for (std::uint32_t idx : g.in_relation_edges(e)) {
        push_unique(rels[RelKey{edges[idx].property, edges[idx].source, true}], pos);
      }
    }
  }

  for (auto& [p, occurrences] : attrs) {
    std::vector<LiteralValue> values;
    values.reserve(occurrences.size());
    for (const auto& [pos, lit] : occurrences) values.push_back(g.literal(lit));
    const AttributeClass cls = classify_attribute(values);
    if (cls == AttributeClass::kCategorical) {
      std::map<std::string, std::vector<std::uint32_t>> by_value;
      for (const auto& [pos, lit] : occurrences) push_unique(by_value[g.literal(lit).raw], pos);
      if (by_value.size() > options.avl_value_cap) continue;
      for (auto& [text, positives] : by_value) {
        pool.candidates.push_back(make_candidate(Label::avl(t, p, text), std::move(positives),
                                                 pool.population, g));
      }
      continue;
    }
    std::vector<double> numbers;
    for (const LiteralValue& v : values) {
      if (v.is_numeric()) numbers.push_back(v.number);
    }
    const std::vector<Interval> intervals = intervals_for(cls, numbers, options.density);
    std::vector<std::vector<std::uint32_t>> positives(intervals.size());
    for (const auto& [pos, lit] : occurrences) {
      const LiteralValue& v = g.literal(lit);
      if (!v.is_numeric()) continue;
      for (std::size_t k = 0; k < intervals.size(); ++k) {
        if (intervals[k].contains(v.number)) {
          push_unique(positives[k], pos);
          break;
        }
      }
    }
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      pool.candidates.push_back(make_candidate(Label::ail(t, p, intervals[k]),
                                               std::move(positives[k]), pool.population, g));
    }
  }

  for (auto& [key, positives] : rels) {
    pool.candidates.push_back(make_candidate(Label::rel(t, key.property, key.target, key.inverse),
                                             std::move(positives), pool.population, g));
  }
  return pool;
}

// Per type: for each member position, the indices of the support-filtered
// AIL/AVL candidates it matches.
using InnerIndex = std::vector<std::vector<std::uint32_t>>;

InnerIndex build_inner_index(const TypePool& pool, double alpha) {
  InnerIndex index(pool.population);
  for (std::uint32_t i = 0; i < pool.candidates.size(); ++i) {
    const Candidate& c = pool.candidates[i];
    const LabelKind kind = c.label.kind();
    if (kind != LabelKind::kAIL && kind != LabelKind::kAVL) continue;
    if (!(c.support > alpha && c.support < 1.0 - alpha)) continue;
    for (std::uint32_t pos : c.positives) index[pos].push_back(i);
  }
  return index;
}

void enumerate_ral(const KnowledgeGraph& g, TypePool& pool, const std::vector<TypePool>& pools,
                   const std::vector<InnerIndex>& inner, const EnumerateOptions& options) {
  const TypeId t = pool.type;
  const auto members = g.entities_of_type(t);
  std::map<RalKey, std::vector<std::uint32_t>> rals;
  const auto edges = g.edges();
  auto visit = [&](std::uint32_t pos, PropertyId p, EntityId x, bool inverse) {
    for (TypeId tx : g.types_of(x)) {
      const auto xpos = g.position_in_type(tx, x);
      for (std::uint32_t idx : inner[tx.value][*xpos]) {
        push_unique(rals[RalKey{p, tx, idx, inverse}], pos);
      }
    }
  };
  for (std::uint32_t pos = 0; pos < members.size(); ++pos) {
    const EntityId e = members[pos];
    for (const Edge& edge : g.out_edges(e)) {
      if (edge.is_relation()) visit(pos, edge.property, edge.target_entity(), false);
    }
    if (options.include_inverse) {
      for (std::uint32_t idx : g.in_relation_edges(e)) {
        visit(pos, edges[idx].property, edges[idx].source, true);
      }
    }
  }
  std::map<std::pair<TypeId, std::uint32_t>, std::shared_ptr<const Label>> shared;
  for (auto& [key, positives] : rals) {
    auto& inner_label = shared[{key.inner_type, key.inner_index}];
    if (!inner_label) {
      inner_label = std::make_shared<const Label>(
          pools[key.inner_type.value].candidates[key.inner_index].label);
    }
    Label label{t, key.property, key.inverse, NestedTerm{inner_label}};
    pool.candidates.push_back(make_candidate(std::move(label), std::move(positives),
                                             pool.population, g));
  }
}

}  // namespace

CandidatePool enumerate_candidates(const KnowledgeGraph& g, const EnumerateOptions& options) {
  const std::size_t nt = g.num_types();
  std::vector<TypePool> pools(nt);
  parallel_for(nt, options.threads, [&](std::size_t t) {
    pools[t] = enumerate_base(g, TypeId{static_cast<std::uint32_t>(t)}, options);
  });

  std::vector<InnerIndex> inner(nt);
  parallel_for(nt, options.threads,
               [&](std::size_t t) { inner[t] = build_inner_index(pools[t], options.alpha); });

  std::vector<std::vector<Candidate>> ral(nt);
  parallel_for(nt, options.threads, [&](std::size_t t) {
    TypePool scratch;
    scratch.type = TypeId{static_cast<std::uint32_t>(t)};
    scratch.population = pools[t].population;
    enumerate_ral(g, scratch, pools, inner, options);
    ral[t] = std::move(scratch.candidates);
  });

  CandidatePool out;
  for (std::size_t t = 0; t < nt; ++t) {
    if (pools[t].population == 0) continue;
    auto& cands = pools[t].candidates;
    std::move(ral[t].begin(), ral[t].end(), std::back_inserter(cands));
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.key < b.key; });
    out.types.push_back(std::move(pools[t]));
  }
  return out;
}

CandidatePool filter_candidates(const CandidatePool& pool, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorCode::kInvalidAlpha, fmt::format("alpha must lie in (0, 0.5), got {}", alpha));
  }
  CandidatePool out;
  for (const TypePool& tp : pool.types) {
    TypePool kept;
    kept.type = tp.type;
    kept.population = tp.population;
    for (const Candidate& c : tp.candidates) {
      if (c.support > alpha && c.support < 1.0 - alpha) kept.candidates.push_back(c);
    }
    out.types.push_back(std::move(kept));
  }
  return out;
}

Candidate candidate_for(const Label& label, const KnowledgeGraph& g) {
  const std::size_t population = g.entities_of_type(label.type).size();
  if (population == 0) {
    throw Error(ErrorCode::kUnknownType,
                fmt::format("label type '{}' has no entities", g.type_name(label.type)));
  }
  return make_candidate(label, positive_positions(label, g), population, g);
}

CandidatePool pool_from_labels(const std::vector<Label>& labels, const KnowledgeGraph& g) {
  std::map<TypeId, TypePool> by_type;
  for (const Label& l : labels) {
    Candidate c = candidate_for(l, g);
    TypePool& tp = by_type[l.type];
    tp.type = l.type;
    tp.population = g.entities_of_type(l.type).size();
    tp.candidates.push_back(std::move(c));
  }
  CandidatePool out;
  for (auto& [t, tp] : by_type) out.types.push_back(std::move(tp));
  return out;
}

}  // namespace kgprof
