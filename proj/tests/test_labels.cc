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

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "kgprof/labels.h"
#include "kgprof/synth.h"
#include "testing.h"

namespace kgprof {
namespace {

const Candidate* find_candidate(const CandidatePool& pool, const Label& l) {
  const TypePool* tp = pool.find(l.type);
  if (!tp) return nullptr;
  for (const Candidate& c : tp->candidates) {
    if (c.label == l) return &c;
  }
  return nullptr;
}

std::vector<std::uint32_t> scan_positives(const Label& l, const KnowledgeGraph& g) {
  std::vector<std::uint32_t> out;
  const auto members = g.entities_of_type(l.type);
  for (std::uint32_t i = 0; i < members.size(); ++i) {
    if (matches(l, members[i], g)) out.push_back(i);
  }
  return out;
}

// Directors d0..d3 and films f0..f7.
KnowledgeGraph director_graph() {
  GraphBuilder b;
  const char* ratings[] = {"8.3", "8.5", "4.1", "8.9", "5.0", "6.2", "8.0", "9.0"};
  for (int i = 0; i < 8; ++i) {
    b.add_type(fmt::format("f{}", i), "Film");
    b.add_attribute(fmt::format("f{}", i), "rating", ratings[i]);
  }
  const std::vector<std::vector<int>> directed = {{0, 2}, {4, 5}, {7}, {6}};
  for (int d = 0; d < 4; ++d) {
    b.add_type(fmt::format("d{}", d), "Director");
    for (int f : directed[d]) b.add_relation(fmt::format("d{}", d), "directorOf", fmt::format("f{}", f));
  }
  return std::move(b).build();
}

TEST(Matches, AttributeLabels) {
  GraphBuilder b;
  b.add_type("film", "Film");
  b.add_attribute("film", "rating", "8.3");
  b.add_type("p", "Person");
  b.add_attribute("p", "gender", "male");
  b.add_attribute("loose", "rating", "8.5");
  const KnowledgeGraph g = std::move(b).build();
  const TypeId film = *g.find_type("Film"), person = *g.find_type("Person");
  const PropertyId rating = *g.find_property("rating"), gender = *g.find_property("gender");
  EXPECT_TRUE(matches(Label::ail(film, rating, {8.0, 9.0, false}), *g.find_entity("film"), g));
  EXPECT_FALSE(matches(Label::ail(film, rating, {8.4, 9.0, false}), *g.find_entity("film"), g));
  EXPECT_FALSE(matches(Label::avl(person, gender, "female"), *g.find_entity("p"), g));
  EXPECT_TRUE(matches(Label::avl(person, gender, "male"), *g.find_entity("p"), g));
  // Untyped entities never match.
  EXPECT_FALSE(matches(Label::ail(film, rating, {8.0, 9.0, false}), *g.find_entity("loose"), g));
}

TEST(Matches, MultiValuedAttributeMatchesAnyValue) {
  GraphBuilder b;
  b.add_type("f", "Film");
  b.add_attribute("f", "rating", "3.0");
  b.add_attribute("f", "rating", "8.5");
  const KnowledgeGraph g = std::move(b).build();
  EXPECT_TRUE(matches(Label::ail(TypeId{0}, PropertyId{0}, {8.0, 9.0, false}), EntityId{0}, g));
  EXPECT_TRUE(matches(Label::ail(TypeId{0}, PropertyId{0}, {2.0, 4.0, false}), EntityId{0}, g));
}

TEST(Matches, RelationalAttributeByHand) {
  const KnowledgeGraph g = director_graph();
  const TypeId director = *g.find_type("Director"), film = *g.find_type("Film");
  const PropertyId dir = *g.find_property("directorOf"), rating = *g.find_property("rating");
  const Label high = Label::ral(director, dir, Label::ail(film, rating, {8.0, 9.0, false}));
  std::vector<std::string> names;
  for (std::uint32_t p : positive_positions(high, g)) names.push_back(g.entity_name(g.entities_of_type(director)[p]));
  EXPECT_EQ(names, (std::vector<std::string>{"d0", "d3"}));
  const Label closed = Label::ral(director, dir, Label::ail(film, rating, {8.0, 9.0, true}));
  EXPECT_EQ(positive_positions(closed, g).size(), 3u);
  EXPECT_DOUBLE_EQ(support(high, g), 0.5);
  const Label rel = Label::rel(director, dir, *g.find_entity("f7"));
  EXPECT_TRUE(matches(rel, *g.find_entity("d2"), g));
  EXPECT_FALSE(matches(rel, *g.find_entity("d0"), g));
  // Inverse relation labels read incoming edges.
  const Label inv = Label::rel(film, dir, *g.find_entity("d0"), true);
  EXPECT_EQ(positive_positions(inv, g).size(), 2u);
}

TEST(Support, ByHand) {
  GraphBuilder b;
  for (int i = 0; i < 10; ++i) {
    b.add_type(fmt::format("e{}", i), "T");
    b.add_attribute(fmt::format("e{}", i), "flag", i < 3 ? "on" : "off");
    b.add_attribute(fmt::format("e{}", i), "kind", "same");
  }
  const KnowledgeGraph g = std::move(b).build();
  EXPECT_DOUBLE_EQ(support(Label::avl(TypeId{0}, *g.find_property("flag"), "on"), g), 0.3);
  EXPECT_DOUBLE_EQ(support(Label::avl(TypeId{0}, *g.find_property("kind"), "same"), g), 1.0);
  EXPECT_KGP_ERROR(support(Label::avl(TypeId{5}, PropertyId{0}, "on"), g), ErrorCode::kUnknownType);
}

TEST(Filter, StrictBoundsDropBothBoundaries) {
  GraphBuilder b;
  for (int i = 0; i < 20; ++i) {
    const std::string e = fmt::format("e{:02}", i);
    b.add_type(e, "T");
    for (int k : {1, 2, 6, 18, 19}) {
      if (i < k) b.add_attribute(e, "tag", fmt::format("v{}", k));
    }
  }
  const KnowledgeGraph g = std::move(b).build();
  std::multiset<double> kept;
  for (const auto& tp : filter_candidates(enumerate_candidates(g), 0.1).types) {
    for (const auto& c : tp.candidates) kept.insert(c.support);
  }
  // 0.9 equals 1 - 0.1 and fails the strict upper bound.
  EXPECT_EQ(kept, (std::multiset<double>{0.3}));
}

TEST(Filter, AlphaRange) {
  const CandidatePool empty;
  EXPECT_KGP_ERROR(filter_candidates(empty, 0.0), ErrorCode::kInvalidAlpha);
  EXPECT_KGP_ERROR(filter_candidates(empty, 0.5), ErrorCode::kInvalidAlpha);
  EXPECT_KGP_ERROR(filter_candidates(empty, 0.6), ErrorCode::kInvalidAlpha);
  EXPECT_NO_THROW(filter_candidates(empty, 0.1));
}

TEST(Filter, SingleEntityLabelRemoved) {
  GraphBuilder b;
  for (int i = 0; i < 1000; ++i) {
    const std::string e = fmt::format("drug{}", i);
    b.add_type(e, "Drug");
    b.add_attribute(e, "group", i % 2 ? "approved" : "experimental");
  }
  b.add_attribute("drug0", "accessID", "DB00316");
  const KnowledgeGraph g = std::move(b).build();
  const CandidatePool pool = enumerate_candidates(g);
  const Label access = Label::avl(TypeId{0}, *g.find_property("accessID"), "DB00316");
  const Candidate* c = find_candidate(pool, access);
  ASSERT_NE(c, nullptr);
  EXPECT_DOUBLE_EQ(c->support, 0.001);
  EXPECT_EQ(find_candidate(filter_candidates(pool, 0.1), access), nullptr);
}

TEST(Enumerate, SingleFilmGenre) {
  GraphBuilder b;
  b.add_type("f", "Film");
  b.add_attribute("f", "genre", "Drama");
  const KnowledgeGraph g = std::move(b).build();
  const CandidatePool pool = enumerate_candidates(g);
  EXPECT_NE(find_candidate(pool, Label::avl(TypeId{0}, PropertyId{0}, "Drama")), nullptr);
}

TEST(Enumerate, BimodalRatingsGiveTwoIntervals) {
  GraphBuilder b;
  Rng rng = make_rng(2, 0);
  std::normal_distribution<double> lo(2.0, 0.3), hi(8.0, 0.3);
  for (int i = 0; i < 400; ++i) {
    const std::string f = fmt::format("f{}", i);
    b.add_type(f, "Film");
    b.add_attribute(f, "rating", fmt::format("{:.3f}", i % 2 ? lo(rng) : hi(rng)));
  }
  const KnowledgeGraph g = std::move(b).build();
  const CandidatePool pool = enumerate_candidates(g);
  EXPECT_EQ(pool.counts().ail, 2u);
  EXPECT_EQ(pool.counts().avl, 0u);
}

TEST(Enumerate, TableOneCounterparts) {
  GraphBuilder b;
  for (int i = 0; i < 24; ++i) {
    const std::string f = fmt::format("film{}", i);
    b.add_type(f, "Film");
    const double r = i < 12 ? 8.1 + 0.06 * i : 4.0 + 0.1 * (i - 12);
    b.add_attribute(f, "rating", fmt::format("{:.2f}", r));
  }
  for (int i = 0; i < 6; ++i) {
    const std::string d = fmt::format("director{}", i);
    b.add_type(d, "Director");
    b.add_relation(d, "directorOf", fmt::format("film{}", i < 3 ? i : 12 + i));
  }
  for (int i = 0; i < 10; ++i) {
    const std::string p = fmt::format("person{}", i);
    b.add_type(p, "Person");
    b.add_attribute(p, "gender", i < 4 ? "female" : "male");
  }
  for (int i = 0; i < 10; ++i) {
    const std::string p = fmt::format("product{}", i);
    b.add_type(p, "Product");
    b.add_relation(p, "producer", i < 3 ? "Apple" : fmt::format("maker{}", i % 2));
  }
  const KnowledgeGraph g = std::move(b).build();
  const CandidatePool pool = enumerate_candidates(g);
  const TypeId film = *g.find_type("Film");
  const PropertyId rating = *g.find_property("rating");

  // AIL: the interval holding exactly the twelve films rated in [8.0, 9.0].
  const Candidate* high = nullptr;
  for (const Candidate& c : pool.find(film)->candidates) {
    if (c.label.kind() != LabelKind::kAIL || c.label.property != rating) continue;
    if (c.label.interval().contains(8.3)) high = &c;
  }
  ASSERT_NE(high, nullptr);
  EXPECT_EQ(high->positives.size(), 12u);
  EXPECT_GE(high->label.interval().lo, 5.2);
  EXPECT_LE(high->label.interval().lo, 8.1);

  EXPECT_NE(find_candidate(pool, Label::avl(*g.find_type("Person"), *g.find_property("gender"), "female")),
            nullptr);
  EXPECT_NE(find_candidate(pool, Label::rel(*g.find_type("Product"), *g.find_property("producer"),
                                            *g.find_entity("Apple"))),
            nullptr);
  const Label ral = Label::ral(*g.find_type("Director"), *g.find_property("directorOf"), high->label);
  const Candidate* rc = find_candidate(pool, ral);
  ASSERT_NE(rc, nullptr);
  EXPECT_EQ(rc->positives.size(), 3u);
}

TEST(Enumerate, InverseLabelsOnlyWhenEnabled) {
  const KnowledgeGraph g = director_graph();
  EnumerateOptions opt;
  const CandidatePool plain = enumerate_candidates(g, opt);
  opt.include_inverse = true;
  const CandidatePool both = enumerate_candidates(g, opt);
  const Label inv = Label::rel(*g.find_type("Film"), *g.find_property("directorOf"), *g.find_entity("d0"), true);
  EXPECT_EQ(find_candidate(plain, inv), nullptr);
  EXPECT_NE(find_candidate(both, inv), nullptr);
}

TEST(ClassifyAttribute, Thresholds) {
  auto vals = [](int numbers, int texts) {
    std::vector<LiteralValue> v;
    for (int i = 0; i < numbers; ++i) v.push_back(parse_literal(std::to_string(i) + ".5"));
    for (int i = 0; i < texts; ++i) v.push_back(parse_literal("t" + std::to_string(i)));
    return v;
  };
  EXPECT_EQ(classify_attribute(vals(9, 1)), AttributeClass::kNumeric);
  EXPECT_EQ(classify_attribute(vals(8, 2)), AttributeClass::kCategorical);
  std::vector<LiteralValue> years;
  for (int y = 1990; y < 2000; ++y) years.push_back(parse_literal(std::to_string(y)));
  EXPECT_EQ(classify_attribute(years), AttributeClass::kYear);
}

RandomGraphSpec property_spec(std::uint64_t seed) {
  RandomGraphSpec spec;
  spec.entities = 60 + 10 * (seed % 5);
  spec.second_type = 0.2;
  spec.untyped = 3;
  spec.relation_edges = 150 + 20 * (seed % 3);
  return spec;
}

TEST(LabelsProperty, CachedSupportEqualsScan) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const KnowledgeGraph g = random_graph(property_spec(seed), seed);
    const CandidatePool pool = enumerate_candidates(g);
    ASSERT_GT(pool.size(), 0u);
    for (const TypePool& tp : pool.types) {
      EXPECT_EQ(tp.population, g.entities_of_type(tp.type).size());
      for (const Candidate& c : tp.candidates) {
        EXPECT_EQ(c.positives, scan_positives(c.label, g)) << c.key;
        EXPECT_DOUBLE_EQ(c.support, support(c.label, g));
        EXPECT_DOUBLE_EQ(c.support, static_cast<double>(c.positives.size()) / tp.population);
      }
    }
  }
}

TEST(LabelsProperty, NoDuplicateLabels) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const KnowledgeGraph g = random_graph(property_spec(seed), seed);
    const CandidatePool pool = enumerate_candidates(g);
    for (const TypePool& tp : pool.types) {
      std::set<std::string> keys;
      for (std::size_t i = 0; i < tp.candidates.size(); ++i) {
        EXPECT_TRUE(keys.insert(tp.candidates[i].key).second) << tp.candidates[i].key;
        for (std::size_t j = i + 1; j < tp.candidates.size(); ++j) {
          EXPECT_FALSE(tp.candidates[i].label == tp.candidates[j].label);
        }
      }
    }
  }
}

TEST(LabelsProperty, EnumerationIsComplete) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const KnowledgeGraph g = random_graph(property_spec(seed), seed);
    const CandidatePool pool = enumerate_candidates(g);
    for (const Edge& e : g.edges()) {
      for (TypeId t : g.types_of(e.source)) {
        const TypePool* tp = pool.find(t);
        ASSERT_NE(tp, nullptr);
        const bool found = std::any_of(tp->candidates.begin(), tp->candidates.end(), [&](const Candidate& c) {
          if (c.label.property != e.property || c.label.inverse) return false;
          const LabelKind k = c.label.kind();
          return e.is_attribute() ? (k == LabelKind::kAVL || k == LabelKind::kAIL) : k == LabelKind::kREL;
        });
        EXPECT_TRUE(found) << g.property_name(e.property);
      }
    }
  }
}

TEST(LabelsProperty, FilterIsIdempotent) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const KnowledgeGraph g = random_graph(property_spec(seed), seed);
    const CandidatePool pool = enumerate_candidates(g);
    for (double alpha : {0.05, 0.1, 0.25}) {
      const CandidatePool once = filter_candidates(pool, alpha);
      const CandidatePool twice = filter_candidates(once, alpha);
      ASSERT_EQ(once.size(), twice.size());
      for (std::size_t t = 0; t < once.types.size(); ++t) {
        for (std::size_t i = 0; i < once.types[t].candidates.size(); ++i) {
          const Candidate& c = once.types[t].candidates[i];
          EXPECT_EQ(c.key, twice.types[t].candidates[i].key);
          EXPECT_GT(c.support, alpha);
          EXPECT_LT(c.support, 1 - alpha);
        }
      }
    }
  }
}

TEST(LabelsProperty, RalIsTwoStepComposition) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    RandomGraphSpec spec = property_spec(seed);
    spec.relation_edges = 90;
    const KnowledgeGraph g = random_graph(spec, seed);
    const CandidatePool pool = enumerate_candidates(g);
    std::size_t checked = 0;
    for (const TypePool& tp : pool.types) {
      for (const Candidate& c : tp.candidates) {
        if (c.label.kind() != LabelKind::kRAL) continue;
        for (EntityId e : g.entities_of_type(tp.type)) {
          bool composed = false;
          for (const Edge& edge : g.out_edges(e)) {
            if (edge.is_relation() && edge.property == c.label.property &&
                matches(c.label.inner(), edge.target_entity(), g)) {
              composed = true;
            }
          }
          EXPECT_EQ(matches(c.label, e, g), composed);
          ++checked;
        }
      }
    }
    EXPECT_GT(checked, 0u);
  }
}

TEST(PoolFromLabels, RecomputesFromGraph) {
  const KnowledgeGraph g = director_graph();
  const CandidatePool pool = enumerate_candidates(g);
  std::vector<Label> labels;
  for (const TypePool& tp : pool.types) {
    for (const Candidate& c : tp.candidates) labels.push_back(c.label);
  }
  std::reverse(labels.begin(), labels.end());
  const CandidatePool back = pool_from_labels(labels, g);
  EXPECT_EQ(back.size(), pool.size());
  for (const TypePool& tp : back.types) {
    for (const Candidate& c : tp.candidates) {
      const Candidate* orig = find_candidate(pool, c.label);
      ASSERT_NE(orig, nullptr);
      EXPECT_EQ(c.positives, orig->positives);
      EXPECT_EQ(c.key, orig->key);
    }
  }
}

TEST(LabelKey, DistinguishesKindsAndDirections) {
  const KnowledgeGraph g = director_graph();
  const TypeId film = *g.find_type("Film");
  const PropertyId dir = *g.find_property("directorOf");
  const EntityId d0 = *g.find_entity("d0");
  EXPECT_NE(label_key(Label::rel(film, dir, d0, false), g), label_key(Label::rel(film, dir, d0, true), g));
  EXPECT_NE(label_key(Label::ail(film, dir, {1, 2, false}), g), label_key(Label::ail(film, dir, {1, 2, true}), g));
  EXPECT_EQ(label_key(Label::avl(film, dir, "x"), g), label_key(Label::avl(film, dir, "x"), g));
}

}  // namespace
}  // namespace kgprof
