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

#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "kgprof/label_io.h"
#include "kgprof/profiler.h"
#include "testing.h"

namespace kgprof {
namespace {

constexpr const char* kBase = "http://example.org/";

// Ten films with ratings (median 7.1), two comedies, and director d0 on
// every third film. f9 has no genre and "solo" is the only Studio.
KnowledgeGraph films() {
  GraphBuilder b;
  const std::vector<std::string> ratings = {"5.0", "6.1", "6.5", "7.0", "7.0", "7.2", "7.8", "8.1", "8.3", "9.0"};
  for (int i = 0; i < 10; ++i) {
    const std::string f = fmt::format("{}film/f{}", kBase, i);
    b.add_type(f, kBase + std::string("Film"));
    b.add_attribute(f, kBase + std::string("rating"), ratings[i]);
    if (i < 9) b.add_attribute(f, kBase + std::string("genre"), i < 2 ? "Comedy" : "Drama");
    if (i % 3 == 0) b.add_relation(f, kBase + std::string("director"), kBase + std::string("person/d0"));
  }
  b.add_type(kBase + std::string("studio/solo"), kBase + std::string("Studio"));
  b.add_relation(kBase + std::string("free/x"), kBase + std::string("director"), kBase + std::string("person/d0"));
  return std::move(b).build();
}

struct Films {
  KnowledgeGraph g = films();
  TypeId film = *g.find_type(fmt::format("{}Film", kBase));
  PropertyId rating = *g.find_property(fmt::format("{}rating", kBase));
  PropertyId genre = *g.find_property(fmt::format("{}genre", kBase));
  PropertyId director = *g.find_property(fmt::format("{}director", kBase));
  EntityId f(int i) const { return *g.find_entity(fmt::format("{}film/f{}", kBase, i)); }
  EntityId d0() const { return *g.find_entity(fmt::format("{}person/d0", kBase)); }
};

LabelSet label_set(const std::vector<Label>& labels, const KnowledgeGraph& g) {
  LabelSet set;
  set.type = labels.front().type;
  set.population = g.entities_of_type(set.type).size();
  set.covered = Bitset(set.population);
  for (const Label& l : labels) {
    ScoredLabel s;
    s.candidate = candidate_for(l, g);
    set.covered |= to_bitset(s.candidate.positives, set.population);
    set.labels.push_back(std::move(s));
  }
  return set;
}

TEST(Percent, RoundsHalfAwayFromZero) {
  EXPECT_EQ(percent(8, 9), 89);
  EXPECT_EQ(percent(1, 8), 13);  // 12.5
  EXPECT_EQ(percent(0, 5), 0);
  EXPECT_EQ(percent(5, 5), 100);
}

TEST(Indicator, NeqCounts) {
  const Films t;
  EXPECT_EQ(indicator(Label::avl(t.film, t.genre, "Comedy"), t.f(0), t.g), (Indicator{IndicatorOp::kNeq, 89}));
  // f9 has no genre: it is one of the 7 non-matching others.
  EXPECT_EQ(indicator(Label::avl(t.film, t.genre, "Drama"), t.f(2), t.g), (Indicator{IndicatorOp::kNeq, 33}));
  EXPECT_EQ(indicator(Label::rel(t.film, t.director, t.d0()), t.f(6), t.g), (Indicator{IndicatorOp::kNeq, 67}));
}

TEST(Indicator, NeqIsTheSameForEveryPositive) {
  const Films t;
  const Label l = Label::rel(t.film, t.director, t.d0());
  for (int i : {0, 3, 6, 9}) EXPECT_EQ(indicator(l, t.f(i), t.g).pct, 67);
}

TEST(Indicator, IntervalAgainstMedian) {
  const Films t;
  const Label high = Label::ail(t.film, t.rating, {8.0, 9.0, true});
  EXPECT_EQ(indicator(high, t.f(9), t.g), (Indicator{IndicatorOp::kGt, 100}));
  EXPECT_EQ(indicator(high, t.f(8), t.g), (Indicator{IndicatorOp::kGt, 89}));
  const Label low = Label::ail(t.film, t.rating, {5.0, 7.1, false});
  // Ties with 7.0 are not strictly above: 5 of 9.
  EXPECT_EQ(indicator(low, t.f(3), t.g), (Indicator{IndicatorOp::kLt, 56}));
  EXPECT_EQ(indicator(low, t.f(1), t.g), (Indicator{IndicatorOp::kLt, 89}));
}

TEST(Indicator, Errors) {
  const Films t;
  const Label comedy = Label::avl(t.film, t.genre, "Comedy");
  EXPECT_KGP_ERROR(indicator(comedy, t.f(5), t.g), ErrorCode::kInvalidArgument);
  EXPECT_KGP_ERROR(indicator(comedy, *t.g.find_entity(fmt::format("{}free/x", kBase)), t.g),
                   ErrorCode::kUntypedEntity);
  GraphBuilder b;
  b.add_type("only", "Solo");
  b.add_attribute("only", "p", "v");
  const KnowledgeGraph one = std::move(b).build();
  EXPECT_KGP_ERROR(indicator(Label::avl(TypeId{0}, PropertyId{0}, "v"), EntityId{0}, one), ErrorCode::kSingletonType);
}

TEST(Profile, FirstMatchingLabelsInRankOrder) {
  const Films t;
  // f0 matches ranks 1, 3 and 7.
  const std::vector<Label> labels = {
      Label::avl(t.film, t.genre, "Comedy"),          Label::avl(t.film, t.genre, "Drama"),
      Label::rel(t.film, t.director, t.d0()),         Label::ail(t.film, t.rating, {8.0, 9.0, true}),
      Label::ail(t.film, t.rating, {7.1, 8.0, false}), Label::avl(t.film, t.genre, "Western"),
      Label::ail(t.film, t.rating, {5.0, 7.1, false}), Label::ail(t.film, t.rating, {6.0, 6.2, false}),
  };
  const std::vector<LabelSet> sets = {label_set(labels, t.g)};
  const Profile p = profile_entity(t.f(0), sets, t.g, 3);
  std::vector<std::size_t> ranks;
  for (const auto& e : p.entries) ranks.push_back(e.rank);
  EXPECT_EQ(ranks, (std::vector<std::size_t>{1, 3, 7}));
  EXPECT_EQ(profile_entity(t.f(0), sets, t.g, 2).entries.size(), 2u);
  EXPECT_KGP_ERROR(profile_entity(t.f(0), sets, t.g, 0), ErrorCode::kInvalidArgument);
}

TEST(Profile, SparseDiagnostic) {
  const Films t;
  const std::vector<LabelSet> sets = {label_set({Label::avl(t.film, t.genre, "Comedy")}, t.g)};
  const Profile p = profile_entity(t.f(5), sets, t.g, 3);
  EXPECT_TRUE(p.empty());
  EXPECT_EQ(p.diagnostic, kSparseProfile);
  std::ostringstream json;
  render(std::vector<Profile>{p}, t.g, RenderFormat::kJson, json);
  const Json j = Json::parse(json.str());
  EXPECT_EQ(j[0]["diagnostic"], kSparseProfile);
  EXPECT_TRUE(j[0]["entries"].empty());
}

TEST(Render, EmptyInputIsEmptyArray) {
  const Films t;
  std::ostringstream out;
  render({}, t.g, RenderFormat::kJson, out);
  EXPECT_EQ(out.str(), "[]\n");
}

TEST(Render, EntryTextUsesLocalNames) {
  const Films t;
  const ProfileEntry e{Label::avl(t.film, t.genre, "Comedy"), "", 1, {IndicatorOp::kNeq, 89}};
  EXPECT_EQ(entry_text(e, t.g), "genre: Comedy (≠ 89%)");
  const ProfileEntry r{Label::rel(t.film, t.director, t.d0()), "", 2, {IndicatorOp::kNeq, 67}};
  EXPECT_EQ(entry_text(r, t.g), "director: d0 (≠ 67%)");
  const ProfileEntry a{Label::ail(t.film, t.rating, {8.0, 9.0, true}), "", 3, {IndicatorOp::kGt, 100}};
  EXPECT_EQ(entry_text(a, t.g), "rating: [8, 9] (> 100%)");
  EXPECT_EQ(local_name("http://x.org/a#frag"), "frag");
  EXPECT_EQ(local_name("plain"), "plain");
  EXPECT_EQ(local_name("http://x.org/dir/"), "http://x.org/dir/");
}

TEST(Render, TextMatchesGolden) {
  const Films t;
  const std::vector<LabelSet> sets = {label_set({Label::avl(t.film, t.genre, "Comedy"),
                                                 Label::rel(t.film, t.director, t.d0()),
                                                 Label::ail(t.film, t.rating, {8.0, 9.0, true})},
                                                t.g)};
  const auto profiles = profile_all(sets, t.g, 3);
  ASSERT_EQ(profiles.size(), 11u);
  std::ostringstream out;
  render(profiles, t.g, RenderFormat::kText, out);
  EXPECT_EQ(out.str(), testing::slurp(KGPROF_TESTDATA "/films_profiles.txt"));
}

TEST(ProfileAll, ThreadCountDoesNotMatter) {
  const Films t;
  const std::vector<LabelSet> sets = {label_set({Label::avl(t.film, t.genre, "Drama"),
                                                 Label::ail(t.film, t.rating, {5.0, 7.1, false})},
                                                t.g)};
  const auto a = profile_all(sets, t.g, 2, 1), b = profile_all(sets, t.g, 2, 3);
  std::ostringstream ja, jb;
  render(a, t.g, RenderFormat::kJson, ja);
  render(b, t.g, RenderFormat::kJson, jb);
  EXPECT_EQ(ja.str(), jb.str());
}

}  // namespace
}  // namespace kgprof
