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

#include "kgprof/profiler.h"

#include <algorithm>
#include <cassert>
#include <limits>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "kgprof/label_io.h"

namespace kgprof {

namespace {

// Largest numeric value of e's p-attributes, optionally restricted to `iv`.
std::optional<double> max_value(const KnowledgeGraph& g, EntityId e, PropertyId p,
                                const Interval* iv) {
  std::optional<double> best;
  for (const Edge& edge : g.out_edges(e)) {
    if (edge.property != p || !edge.is_attribute()) continue;
    const LiteralValue& lit = g.literal(edge.target_literal());
    if (!lit.is_numeric()) continue;
    if (iv && !iv->contains(lit.number)) continue;
    if (!best || lit.number > *best) best = lit.number;
  }
  return best;
}

double median_of_sorted(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

const char* op_glyph(IndicatorOp op) {
  switch (op) {
    case IndicatorOp::kNeq:
      return "≠";
    case IndicatorOp::kGt:
      return ">";
    case IndicatorOp::kLt:
      return "<";
  }
  return "?";
}

const char* op_name(IndicatorOp op) {
  switch (op) {
    case IndicatorOp::kNeq:
      return "neq";
    case IndicatorOp::kGt:
      return "gt";
    case IndicatorOp::kLt:
      return "lt";
  }
  return "?";
}

void require_typed(EntityId e, const KnowledgeGraph& g) {
  if (!g.is_typed(e)) {
    throw Error(ErrorCode::kUntypedEntity, fmt::format("entity '{}' has no type", g.entity_name(e)));
  }
}

}  // namespace

int percent(std::size_t num, std::size_t den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "percent of an empty population");
  return static_cast<int>((200 * num + den) / (2 * den));
}

Profiler::Profiler(std::span<const LabelSet> sets, const KnowledgeGraph& g) : g_(&g) {
  by_type_.resize(g.num_types());
  for (const LabelSet& set : sets) {
    auto& stats = by_type_[set.type.value];
    const auto members = g.entities_of_type(set.type);
    for (std::size_t i = 0; i < set.labels.size(); ++i) {
      const ScoredLabel& sl = set.labels[i];
      LabelStats s;
      s.label = &sl;
      s.rank = i + 1;
      s.population = members.size();
      s.positives = sl.candidate.positives.size();
      s.positive_bits = to_bitset(sl.candidate.positives, members.size());
      if (sl.candidate.label.kind() == LabelKind::kAIL) {
        for (EntityId m : members) {
          if (auto v = max_value(g, m, sl.candidate.label.property, nullptr)) s.maxima.push_back(*v);
        }
        std::sort(s.maxima.begin(), s.maxima.end());
        s.median = median_of_sorted(s.maxima);
      }
      stats.push_back(std::move(s));
    }
  }
}

Indicator Profiler::indicator_for(const LabelStats& s, EntityId e) const {
  if (s.population < 2) {
    throw Error(ErrorCode::kSingletonType,
                fmt::format("type '{}' has a single entity", g_->type_name(s.label->candidate.label.type)));
  }
  const Label& l = s.label->candidate.label;
  const std::size_t others = s.population - 1;
  if (l.kind() != LabelKind::kAIL) {
    return Indicator{IndicatorOp::kNeq, percent(s.population - s.positives, others)};
  }
  const double v = *max_value(*g_, e, l.property, &l.interval());
  const double own_max = *max_value(*g_, e, l.property, nullptr);
  const auto lower = std::lower_bound(s.maxima.begin(), s.maxima.end(), v);
  const auto upper = std::upper_bound(s.maxima.begin(), s.maxima.end(), v);
  const auto smaller = static_cast<std::size_t>(lower - s.maxima.begin());
  std::size_t larger = static_cast<std::size_t>(s.maxima.end() - upper);
  if (own_max > v) --larger;
  if (v > s.median) return Indicator{IndicatorOp::kGt, percent(smaller, others)};
  return Indicator{IndicatorOp::kLt, percent(larger, others)};
}

Profile Profiler::profile(EntityId e, std::size_t m) const {
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "profile length must be at least 1");
  require_typed(e, *g_);
  struct Hit {
    std::size_t rank;
    TypeId type;
    const LabelStats* stats;
  };
  std::vector<Hit> hits;
  for (TypeId t : g_->types_of(e)) {
    if (t.value >= by_type_.size()) continue;
    const auto pos = g_->position_in_type(t, e);
    if (!pos) continue;
    for (const LabelStats& s : by_type_[t.value]) {
      if (s.positive_bits.test(*pos)) hits.push_back(Hit{s.rank, t, &s});
    }
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.type < b.type;
  });
  Profile p;
  p.entity = e;
  for (std::size_t i = 0; i < hits.size() && i < m; ++i) {
    const LabelStats& s = *hits[i].stats;
    assert(matches(s.label->candidate.label, e, *g_));
    p.entries.push_back(ProfileEntry{s.label->candidate.label, s.label->candidate.key, s.rank,
                                     indicator_for(s, e)});
  }
  if (p.entries.empty()) p.diagnostic = kSparseProfile;
  return p;
}

Indicator indicator(const Label& l, EntityId e, const KnowledgeGraph& g) {
  require_typed(e, g);
  if (!matches(l, e, g)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("entity '{}' does not match {}", g.entity_name(e), label_key(l, g)));
  }
  LabelSet set;
  set.type = l.type;
  set.population = g.entities_of_type(l.type).size();
  ScoredLabel sl;
  sl.candidate = candidate_for(l, g);
  set.labels.push_back(std::move(sl));
  const Profiler profiler(std::span<const LabelSet>(&set, 1), g);
  const Profile p = profiler.profile(e, 1);
  return p.entries.at(0).indicator;
}

Profile profile_entity(EntityId e, std::span<const LabelSet> sets, const KnowledgeGraph& g,
                       std::size_t m) {
  return Profiler(sets, g).profile(e, m);
}

std::vector<Profile> profile_all(std::span<const LabelSet> sets, const KnowledgeGraph& g,
                                 std::size_t m, std::size_t threads) {
  const Profiler profiler(sets, g);
  std::vector<EntityId> typed;
  for (std::uint32_t i = 0; i < g.num_entities(); ++i) {
    if (g.is_typed(EntityId{i})) typed.push_back(EntityId{i});
  }
  std::vector<Profile> out(typed.size());
  parallel_for(typed.size(), threads, [&](std::size_t i) { out[i] = profiler.profile(typed[i], m); });
  return out;
}

std::string local_name(std::string_view iri) {
  const auto cut = iri.find_last_of("/#");
  if (cut == std::string_view::npos || cut + 1 == iri.size()) return std::string(iri);
  return std::string(iri.substr(cut + 1));
}

namespace {

std::string interval_text(const Interval& iv) {
  return fmt::format("[{}, {}{}", format_sig6(iv.lo), format_sig6(iv.hi), iv.closed_hi ? "]" : ")");
}

std::string property_text(const Label& l, const KnowledgeGraph& g) {
  std::string s = (l.inverse ? "^" : "") + local_name(g.property_name(l.property));
  if (l.kind() == LabelKind::kRAL) s += "." + property_text(l.inner(), g);
  return s;
}

std::string value_text(const Label& l, const KnowledgeGraph& g) {
  switch (l.kind()) {
    case LabelKind::kAIL:
      return interval_text(l.interval());
    case LabelKind::kAVL:
      return l.text();
    case LabelKind::kREL:
      return local_name(g.entity_name(l.target()));
    case LabelKind::kRAL:
      return value_text(l.inner(), g);
  }
  return {};
}

}  // namespace

std::string entry_text(const ProfileEntry& entry, const KnowledgeGraph& g) {
  return fmt::format("{}: {} ({} {}%)", property_text(entry.label, g), value_text(entry.label, g),
                     op_glyph(entry.indicator.op), entry.indicator.pct);
}

void render(std::span<const Profile> profiles, const KnowledgeGraph& g, RenderFormat format,
            std::ostream& out) {
  switch (format) {
    case RenderFormat::kJson: {
      Json arr = Json::array();
      for (const Profile& p : profiles) {
        Json j;
        j["entity"] = g.entity_name(p.entity);
        Json entries = Json::array();
        for (const ProfileEntry& e : p.entries) {
          Json item;
          item["label"] = label_to_json(e.label, g);
          item["rank"] = e.rank;
          item["indicator"] = {{"op", op_name(e.indicator.op)}, {"pct", e.indicator.pct}};
          entries.push_back(std::move(item));
        }
        j["entries"] = std::move(entries);
        if (p.empty()) j["diagnostic"] = p.diagnostic.empty() ? kSparseProfile : p.diagnostic;
        arr.push_back(std::move(j));
      }
      out << arr.dump(2) << '\n';
      break;
    }
    case RenderFormat::kMarkdown:
      for (const Profile& p : profiles) {
        out << "## " << local_name(g.entity_name(p.entity)) << "\n\n";
        if (p.empty()) out << "_" << kSparseProfile << "_\n";
        for (const ProfileEntry& e : p.entries) out << "- " << entry_text(e, g) << '\n';
        out << '\n';
      }
      break;
    case RenderFormat::kText:
      for (const Profile& p : profiles) {
        out << local_name(g.entity_name(p.entity)) << ": ";
        if (p.empty()) out << "(" << kSparseProfile << ")";
        for (std::size_t i = 0; i < p.entries.size(); ++i) {
          if (i > 0) out << "; ";
          out << entry_text(p.entries[i], g);
        }
        out << '\n';
      }
      break;
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed");
}

}  // namespace kgprof
