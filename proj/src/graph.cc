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

#include "kgprof/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace kgprof {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

// "YYYY" or "YYYY-MM..." (dates and dateTimes).
std::optional<int> leading_year(std::string_view s) {
  if (s.size() == 4 && all_digits(s)) return std::stoi(std::string(s));
  if (s.size() >= 7 && all_digits(s.substr(0, 4)) && s[4] == '-' && is_digit(s[5]) &&
      is_digit(s[6])) {
    return std::stoi(std::string(s.substr(0, 4)));
  }
  return std::nullopt;
}

}  // namespace

LiteralValue parse_literal(std::string_view raw, const YearWindow& window) {
  LiteralValue v;
  v.raw = std::string(raw);
  if (auto year = leading_year(raw)) {
    if (*year >= window.min_year && *year <= window.max_year) {
      v.kind = LiteralValue::Kind::kYear;
      v.number = *year;
    }
    return v;
  }
  double x = 0.0;
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (!raw.empty() && ec == std::errc() && ptr == last && std::isfinite(x)) {
    v.kind = LiteralValue::Kind::kNumber;
    v.number = x;
  }
  return v;
}

// ---------------------------------------------------------------------------
// KnowledgeGraph

namespace {

template <typename T>
std::optional<T> lookup(const std::unordered_map<std::string, std::uint32_t>& index,
                        std::string_view name) {
  auto it = index.find(std::string(name));
  if (it == index.end()) return std::nullopt;
  return T{it->second};
}

}  // namespace

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view name) const {
  return lookup<EntityId>(entity_index_, name);
}
std::optional<PropertyId> KnowledgeGraph::find_property(std::string_view name) const {
  return lookup<PropertyId>(property_index_, name);
}
std::optional<TypeId> KnowledgeGraph::find_type(std::string_view name) const {
  return lookup<TypeId>(type_index_, name);
}
std::optional<LiteralId> KnowledgeGraph::find_literal(std::string_view raw) const {
  return lookup<LiteralId>(literal_index_, raw);
}

std::span<const Edge> KnowledgeGraph::out_edges(EntityId e) const {
  return std::span<const Edge>(edges_).subspan(
      out_offsets_[e.value], out_offsets_[e.value + 1] - out_offsets_[e.value]);
}

std::span<const std::uint32_t> KnowledgeGraph::in_relation_edges(EntityId e) const {
  return std::span<const std::uint32_t>(in_edges_).subspan(
      in_offsets_[e.value], in_offsets_[e.value + 1] - in_offsets_[e.value]);
}

std::span<const EntityId> KnowledgeGraph::neighbors(EntityId e) const {
  return std::span<const EntityId>(nbrs_).subspan(
      nbr_offsets_[e.value], nbr_offsets_[e.value + 1] - nbr_offsets_[e.value]);
}

std::span<const TypeId> KnowledgeGraph::types_of(EntityId e) const {
  return std::span<const TypeId>(typing_).subspan(
      type_offsets_[e.value], type_offsets_[e.value + 1] - type_offsets_[e.value]);
}

bool KnowledgeGraph::has_type(EntityId e, TypeId t) const {
  auto ts = types_of(e);
  return std::binary_search(ts.begin(), ts.end(), t);
}

std::span<const EntityId> KnowledgeGraph::entities_of_type(TypeId t) const {
  if (t.value >= members_.size()) return {};
  return members_[t.value];
}

std::optional<std::uint32_t> KnowledgeGraph::position_in_type(TypeId t, EntityId e) const {
  auto members = entities_of_type(t);
  auto it = std::lower_bound(members.begin(), members.end(), e);
  if (it == members.end() || *it != e) return std::nullopt;
  return static_cast<std::uint32_t>(it - members.begin());
}

std::vector<LiteralValue> KnowledgeGraph::attribute_values(TypeId t, PropertyId p) const {
  std::vector<LiteralValue> out;
  for (EntityId e : entities_of_type(t)) {
    for (const Edge& edge : out_edges(e)) {
      if (edge.property == p && edge.is_attribute()) out.push_back(literal(edge.target_literal()));
    }
  }
  return out;
}

IncompletenessReport KnowledgeGraph::incompleteness(TypeId t) const {
  auto members = entities_of_type(t);
  if (members.empty()) {
    throw Error(ErrorCode::kUnknownType, fmt::format("type id {} has no entities", t.value));
  }
  std::map<PropertyId, std::size_t> having;
  std::vector<PropertyId> seen;
  for (EntityId e : members) {
    seen.clear();
    for (const Edge& edge : out_edges(e)) seen.push_back(edge.property);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (PropertyId p : seen) ++having[p];
  }
  IncompletenessReport report;
  double sum = 0.0;
  for (const auto& [p, count] : having) {
    const double c = static_cast<double>(count) / static_cast<double>(members.size());
    report.coverage[p] = c;
    sum += c;
  }
  if (!having.empty()) report.mean_incompleteness = 1.0 - sum / static_cast<double>(having.size());
  return report;
}

double KnowledgeGraph::average_degree() const {
  if (entity_names_.empty()) return 0.0;
  return 2.0 * static_cast<double>(num_relation_edges_) / static_cast<double>(num_entities());
}

// ---------------------------------------------------------------------------
// GraphBuilder

std::size_t GraphBuilder::TripleHash::operator()(const TripleKey& k) const noexcept {
  std::uint64_t h = k.s;
  h = h * 0x9e3779b97f4a7c15ULL ^ k.p;
  h = h * 0x9e3779b97f4a7c15ULL ^ k.o;
  h = h * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(k.kind);
  return static_cast<std::size_t>(h ^ (h >> 29));
}

namespace {

std::uint32_t intern(std::unordered_map<std::string, std::uint32_t>& index,
                     std::vector<std::string>& names, std::string_view name) {
  auto [it, inserted] =
      index.try_emplace(std::string(name), static_cast<std::uint32_t>(names.size()));
  if (inserted) names.emplace_back(name);
  return it->second;
}

}  // namespace

EntityId GraphBuilder::entity(std::string_view name) {
  const std::size_t before = g_.entity_names_.size();
  EntityId id{intern(g_.entity_index_, g_.entity_names_, name)};
  if (g_.entity_names_.size() != before) typing_.emplace_back();
  return id;
}

PropertyId GraphBuilder::property(std::string_view name) {
  if (name.empty()) throw Error(ErrorCode::kInvalidArgument, "empty property identifier");
  return PropertyId{intern(g_.property_index_, g_.property_names_, name)};
}

TypeId GraphBuilder::type(std::string_view name) {
  if (name.empty()) throw Error(ErrorCode::kInvalidArgument, "empty type identifier");
  return TypeId{intern(g_.type_index_, g_.type_names_, name)};
}

LiteralId GraphBuilder::literal(std::string_view raw) {
  auto [it, inserted] = g_.literal_index_.try_emplace(
      std::string(raw), static_cast<std::uint32_t>(g_.literals_.size()));
  if (inserted) g_.literals_.push_back(parse_literal(raw, years_));
  return LiteralId{it->second};
}

void GraphBuilder::add_type(std::string_view entity_name, std::string_view type_name) {
  const EntityId e = entity(entity_name);
  const TypeId t = type(type_name);
  auto& ts = typing_[e.value];
  if (std::find(ts.begin(), ts.end(), t) != ts.end()) {
    ++duplicates_;
    return;
  }
  ts.push_back(t);
  ++g_.num_type_assertions_;
}

void GraphBuilder::add_edge(EntityId s, PropertyId p, NodeRef o) {
  if (!seen_.insert(TripleKey{s.value, p.value, o.id, o.kind}).second) {
    ++duplicates_;
    return;
  }
  pending_.push_back(Edge{s, p, o});
}

void GraphBuilder::add_relation(std::string_view source, std::string_view prop,
                                std::string_view target) {
  const EntityId s = entity(source);
  const PropertyId p = property(prop);
  const EntityId o = entity(target);
  add_edge(s, p, NodeRef{o.value, NodeKind::kEntity});
}

void GraphBuilder::add_attribute(std::string_view source, std::string_view prop,
                                 std::string_view raw) {
  const EntityId s = entity(source);
  const PropertyId p = property(prop);
  const LiteralId l = literal(raw);
  add_edge(s, p, NodeRef{l.value, NodeKind::kLiteral});
}

KnowledgeGraph GraphBuilder::build() && {
  KnowledgeGraph g = std::move(g_);
  const std::size_t n = g.entity_names_.size();
  if (n == 0) throw Error(ErrorCode::kEmptyGraph, "graph has no entities");

  // Outgoing CSR, stable in insertion order.
  g.out_offsets_.assign(n + 1, 0);
  for (const Edge& e : pending_) ++g.out_offsets_[e.source.value + 1];
  for (std::size_t i = 0; i < n; ++i) g.out_offsets_[i + 1] += g.out_offsets_[i];
  g.edges_.resize(pending_.size());
  {
    std::vector<std::uint32_t> cursor(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    for (const Edge& e : pending_) g.edges_[cursor[e.source.value]++] = e;
  }
  pending_.clear();
  pending_.shrink_to_fit();
  seen_.clear();

  g.in_offsets_.assign(n + 1, 0);
  g.nbr_offsets_.assign(n + 1, 0);
  for (const Edge& e : g.edges_) {
    if (!e.is_relation()) continue;
    ++g.num_relation_edges_;
    ++g.in_offsets_[e.target.id + 1];
    ++g.nbr_offsets_[e.source.value + 1];
    ++g.nbr_offsets_[e.target.id + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    g.in_offsets_[i + 1] += g.in_offsets_[i];
    g.nbr_offsets_[i + 1] += g.nbr_offsets_[i];
  }
  g.in_edges_.resize(g.num_relation_edges_);
  g.nbrs_.resize(2 * g.num_relation_edges_);
  {
    std::vector<std::uint32_t> in_cur(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    std::vector<std::uint32_t> nb_cur(g.nbr_offsets_.begin(), g.nbr_offsets_.end() - 1);
    for (std::uint32_t i = 0; i < g.edges_.size(); ++i) {
      const Edge& e = g.edges_[i];
      if (!e.is_relation()) continue;
      g.in_edges_[in_cur[e.target.id]++] = i;
      g.nbrs_[nb_cur[e.source.value]++] = e.target_entity();
      g.nbrs_[nb_cur[e.target.id]++] = e.source;
    }
  }

  g.type_offsets_.assign(n + 1, 0);
  g.members_.assign(g.type_names_.size(), {});
  for (std::size_t i = 0; i < n; ++i) {
    auto& ts = typing_[i];
    std::sort(ts.begin(), ts.end());
    g.type_offsets_[i + 1] = g.type_offsets_[i] + static_cast<std::uint32_t>(ts.size());
    for (TypeId t : ts) {
      g.typing_.push_back(t);
      g.members_[t.value].push_back(EntityId{static_cast<std::uint32_t>(i)});
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Parsers

namespace {

class LineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  std::string text;
  NodeKind kind = NodeKind::kEntity;
};

void skip_ws(std::string_view& s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

Term parse_iri(std::string_view& s) {
  auto close = s.find('>');
  if (close == std::string_view::npos) throw LineError("unterminated IRI");
  Term t{std::string(s.substr(1, close - 1)), NodeKind::kEntity};
  if (t.text.empty()) throw LineError("empty IRI");
  s.remove_prefix(close + 1);
  return t;
}

Term parse_term(std::string_view& s, bool allow_literal) {
  skip_ws(s);
  if (s.empty()) throw LineError("missing term");
  if (s.front() == '<') return parse_iri(s);
  if (s.size() > 2 && s.substr(0, 2) == "_:") {
    std::size_t end = 2;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
    Term t{std::string(s.substr(0, end)), NodeKind::kEntity};
    s.remove_prefix(end);
    return t;
  }
  if (s.front() != '"' || !allow_literal) throw LineError("unexpected term");
  std::string value;
  std::size_t i = 1;
  for (;; ++i) {
    if (i >= s.size()) throw LineError("unterminated literal");
    const char c = s[i];
    if (c == '"') break;
    if (c != '\\') {
      value += c;
      continue;
    }
    if (++i >= s.size()) throw LineError("dangling escape");
    switch (s[i]) {
      case 't': value += '\t'; break;
      case 'n': value += '\n'; break;
      case 'r': value += '\r'; break;
      case 'b': value += '\b'; break;
      case 'f': value += '\f'; break;
      case '"': value += '"'; break;
      case '\'': value += '\''; break;
      case '\\': value += '\\'; break;
      case 'u':
      case 'U': {
        const std::size_t len = s[i] == 'u' ? 4 : 8;
        if (i + len >= s.size()) throw LineError("short unicode escape");
        std::uint32_t cp = 0;
        auto hex = s.substr(i + 1, len);
        auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), cp, 16);
        if (ec != std::errc() || p != hex.data() + hex.size()) throw LineError("bad unicode escape");
        append_utf8(value, cp);
        i += len;
        break;
      }
      default: throw LineError("unknown escape");
    }
  }
  s.remove_prefix(i + 1);
  // Language tags and datatypes are accepted and dropped.
  if (!s.empty() && s.front() == '@') {
    std::size_t end = 1;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '.') ++end;
    s.remove_prefix(end);
  } else if (s.size() >= 2 && s.substr(0, 2) == "^^") {
    s.remove_prefix(2);
    if (s.empty() || s.front() != '<') throw LineError("bad datatype");
    parse_iri(s);
  }
  return Term{std::string(trim(value)), NodeKind::kLiteral};
}

std::string unescape_tsv(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default: throw LineError("unknown TSV escape");
    }
  }
  return out;
}

std::string escape_tsv(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

struct Triple {
  std::string subject, predicate;
  Term object;
};

Triple parse_ntriples_line(std::string_view s) {
  Triple t;
  Term subj = parse_term(s, false);
  skip_ws(s);
  if (s.empty() || s.front() != '<') throw LineError("predicate must be an IRI");
  Term pred = parse_iri(s);
  t.object = parse_term(s, true);
  skip_ws(s);
  if (s.empty() || s.front() != '.') throw LineError("missing terminating period");
  s.remove_prefix(1);
  s = trim(s);
  if (!s.empty() && s.front() != '#') throw LineError("trailing content");
  t.subject = std::move(subj.text);
  t.predicate = std::move(pred.text);
  return t;
}

Triple parse_tsv_line(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (;;) {
    auto tab = s.find('\t', start);
    cols.push_back(s.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (cols.size() != 4) throw LineError("expected 4 tab-separated columns");
  Triple t;
  t.subject = unescape_tsv(cols[0]);
  t.predicate = unescape_tsv(cols[1]);
  if (t.subject.empty() || t.predicate.empty()) throw LineError("empty subject or predicate");
  if (cols[3] == "entity") {
    t.object = Term{unescape_tsv(cols[2]), NodeKind::kEntity};
    if (t.object.text.empty()) throw LineError("empty object entity");
  } else if (cols[3] == "literal") {
    t.object = Term{std::string(trim(unescape_tsv(cols[2]))), NodeKind::kLiteral};
  } else {
    throw LineError("object_kind must be 'entity' or 'literal'");
  }
  return t;
}

}  // namespace

KnowledgeGraph load_graph(std::istream& in, GraphFormat format, const IngestOptions& options) {
  GraphBuilder builder(options.years);
  std::string line;
  std::size_t line_no = 0;
  std::size_t skipped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    Triple t;
    try {
      t = format == GraphFormat::kNTriples ? parse_ntriples_line(view) : parse_tsv_line(line);
    } catch (const LineError& e) {
      if (options.strict) {
        throw Error(ErrorCode::kMalformedLine,
                    fmt::format("line {}: {}", line_no, e.what()), line_no);
      }
      ++skipped;
      continue;
    }
    if (t.predicate == options.type_predicate) {
      builder.add_type(t.subject, t.object.text);
    } else if (t.object.kind == NodeKind::kEntity) {
      builder.add_relation(t.subject, t.predicate, t.object.text);
    } else {
      builder.add_attribute(t.subject, t.predicate, t.object.text);
    }
  }
  if (skipped > 0) spdlog::warn("skipped {} malformed line(s)", skipped);
  if (builder.duplicates() > 0) spdlog::debug("dropped {} duplicate triple(s)", builder.duplicates());
  return std::move(builder).build();
}

KnowledgeGraph load_graph_file(const std::string& path, GraphFormat format,
                               const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingInput, fmt::format("cannot open '{}'", path));
  return load_graph(in, format, options);
}

void write_tsv(const KnowledgeGraph& g, std::ostream& out, std::string_view type_predicate) {
  const std::string pred = escape_tsv(type_predicate);
  for (std::uint32_t i = 0; i < g.num_entities(); ++i) {
    const EntityId e{i};
    const std::string name = escape_tsv(g.entity_name(e));
    for (TypeId t : g.types_of(e)) {
      out << name << '\t' << pred << '\t' << escape_tsv(g.type_name(t)) << "\tentity\n";
    }
    for (const Edge& edge : g.out_edges(e)) {
      out << name << '\t' << escape_tsv(g.property_name(edge.property)) << '\t';
      if (edge.is_relation()) {
        out << escape_tsv(g.entity_name(edge.target_entity())) << "\tentity\n";
      } else {
        out << escape_tsv(g.literal(edge.target_literal()).raw) << "\tliteral\n";
      }
    }
  }
}

void write_stats(const KnowledgeGraph& g, std::ostream& out) {
  const std::size_t triples = g.num_edges() + g.num_type_assertions();
  out << fmt::format("{:<12}{:>12}\n", "#triple", triples);
  out << fmt::format("{:<12}{:>12}\n", "#type", g.num_types());
  out << fmt::format("{:<12}{:>12}\n", "#entity", g.num_entities());
  out << fmt::format("{:<12}{:>12}\n", "#literal", g.num_literals());
  out << fmt::format("{:<12}{:>12}\n", "#edge", g.num_edges());
  out << fmt::format("{:<12}{:>12}\n", "#relation", g.num_relation_edges());
  out << fmt::format("{:<12}{:>12}\n", "#attribute", g.num_attribute_edges());
  out << "\n";
  out << fmt::format("{:<32}{:>12}\n", "type", "entities");
  for (std::uint32_t t = 0; t < g.num_types(); ++t) {
    out << fmt::format("{:<32}{:>12}\n", g.type_name(TypeId{t}),
                       g.entities_of_type(TypeId{t}).size());
  }
}

}  // namespace kgprof
