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

#include "kgprof/synth.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace kgprof {

namespace {

std::string iri(std::string_view kind, std::string_view local) {
  return fmt::format("{}{}/{}", kSynthBase, kind, local);
}

std::string prop(std::string_view local) { return iri("prop", local); }
std::string type_iri(std::string_view local) { return iri("type", local); }

// Uniform integer in [0, n).
std::size_t uniform(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

std::string fixed(double x, int digits) { return fmt::format("{:.{}f}", x, digits); }

}  // namespace

KnowledgeGraph random_graph(const RandomGraphSpec& spec, std::uint64_t seed) {
  if (spec.entities < 2 || spec.types < 1) {
    throw Error(ErrorCode::kInvalidArgument, "random graph needs 2 entities and 1 type");
  }
  Rng rng = make_rng(seed, 0, 40);
  GraphBuilder b;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < spec.entities; ++i) names.push_back(iri("e", fmt::format("n{}", i)));
  for (std::size_t i = 0; i < spec.entities; ++i) {
    // Round-robin first type keeps every type populated.
    const std::size_t t = i % spec.types;
    b.add_type(names[i], type_iri(fmt::format("T{}", t)));
    if (spec.types > 1 && coin(rng, spec.second_type)) {
      b.add_type(names[i], type_iri(fmt::format("T{}", (t + 1 + uniform(rng, spec.types - 1)) % spec.types)));
    }
    for (std::size_t a = 0; a < spec.numeric_attributes; ++a) {
      if (!coin(rng, spec.attribute_coverage)) continue;
      const double centre = (i % 2 == 0) ? 10.0 : 30.0;
      const double v = centre + std::normal_distribution<double>(0.0, 3.0)(rng) + 5.0 * a;
      b.add_attribute(names[i], prop(fmt::format("num{}", a)), fixed(v, 2));
    }
    for (std::size_t a = 0; a < spec.categorical_attributes; ++a) {
      if (!coin(rng, spec.attribute_coverage)) continue;
      b.add_attribute(names[i], prop(fmt::format("cat{}", a)),
                      fmt::format("v{}", uniform(rng, std::max<std::size_t>(spec.categories, 1))));
    }
  }
  for (std::size_t k = 0; k < spec.untyped; ++k) {
    const std::string name = iri("e", fmt::format("u{}", k));
    b.add_relation(name, prop("r0"), names[uniform(rng, spec.entities)]);
  }
  const std::size_t nprop = std::max<std::size_t>(spec.relation_properties, 1);
  for (std::size_t k = 0; k < spec.relation_edges; ++k) {
    const std::size_t s = uniform(rng, spec.entities);
    std::size_t o = uniform(rng, spec.entities - 1);
    if (o >= s) ++o;
    b.add_relation(names[s], prop(fmt::format("r{}", uniform(rng, nprop))), names[o]);
  }
  return std::move(b).build();
}

KnowledgeGraph two_cliques(std::size_t n) {
  GraphBuilder b;
  for (const char* side : {"a", "b"}) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string u = iri("e", fmt::format("{}{}", side, i));
      b.add_type(u, type_iri("Node"));
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) b.add_relation(u, prop("link"), iri("e", fmt::format("{}{}", side, j)));
      }
    }
  }
  return std::move(b).build();
}

Communities two_communities(std::size_t per_side, double p_in, double p_out, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0, 42);
  GraphBuilder b;
  const std::size_t n = 2 * per_side;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(iri("e", fmt::format("p{}", i)));
    b.add_type(names.back(), type_iri("Person"));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = (i < per_side) == (j < per_side);
      if (coin(rng, same ? p_in : p_out)) b.add_relation(names[i], prop("knows"), names[j]);
    }
  }
  Communities c{std::move(b).build(), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const EntityId e = *c.graph.find_entity(names[i]);
    (i < per_side ? c.first : c.second).push_back(e);
  }
  return c;
}

KnowledgeGraph sample_graph(std::uint64_t seed) {
  Rng rng = make_rng(seed, 0, 43);
  GraphBuilder b;
  constexpr std::size_t kFilms = 100, kPeople = 50, kStudios = 10, kCountries = 10, kGenres = 30;
  const auto film = [](std::size_t i) { return iri("film", fmt::format("F{:03}", i)); };
  const auto person = [](std::size_t i) { return iri("person", fmt::format("P{:03}", i)); };
  const auto studio = [](std::size_t i) { return iri("studio", fmt::format("S{:02}", i)); };
  const auto country = [](std::size_t i) { return iri("country", fmt::format("C{:02}", i)); };
  const auto genre = [](std::size_t i) { return iri("genre", fmt::format("G{:02}", i)); };
  const char* continents[] = {"Europe", "Asia", "America"};
  const char* languages[] = {"English", "French", "Italian", "Japanese", "Spanish"};

  for (std::size_t c = 0; c < kCountries; ++c) {
    b.add_type(country(c), type_iri("Country"));
    b.add_attribute(country(c), prop("continent"), continents[c % 3]);
    b.add_attribute(country(c), prop("population"),
                    fixed(5.0 + 80.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng), 1));
  }
  for (std::size_t g = 0; g < kGenres; ++g) {
    b.add_type(genre(g), type_iri("Genre"));
    b.add_attribute(genre(g), prop("name"), g < 15 ? fmt::format("comedy-{}", g) : fmt::format("drama-{}", g));
  }
  for (std::size_t s = 0; s < kStudios; ++s) {
    b.add_type(studio(s), type_iri("Studio"));
    const int founded = s < 5 ? 1920 + static_cast<int>(uniform(rng, 20)) : 1970 + static_cast<int>(uniform(rng, 20));
    b.add_attribute(studio(s), prop("foundingYear"), std::to_string(founded));
    b.add_relation(studio(s), prop("locatedIn"), country(s < 5 ? uniform(rng, 3) : 3 + uniform(rng, 7)));
  }
  // People 0-9 direct school A, 10-19 school B; 20-34 act in A, 35-49 in B.
  for (std::size_t p = 0; p < kPeople; ++p) {
    b.add_type(person(p), type_iri("Person"));
    const bool school_a = p < 10 || (p >= 20 && p < 35);
    const int born = school_a ? 1925 + static_cast<int>(uniform(rng, 20)) : 1955 + static_cast<int>(uniform(rng, 20));
    b.add_attribute(person(p), prop("birthYear"), std::to_string(born));
    b.add_relation(person(p), prop("nationality"),
                   country(school_a ? uniform(rng, 3) : 3 + uniform(rng, 7)));
    if (coin(rng, 0.7)) b.add_attribute(person(p), prop("gender"), coin(rng, 0.5) ? "female" : "male");
  }
  for (std::size_t f = 0; f < kFilms; ++f) {
    const bool school_a = f < kFilms / 2;
    // Occasional crossover keeps the schools from being perfectly separable.
    const bool cross = coin(rng, 0.1);
    const bool a = school_a != cross;
    b.add_type(film(f), type_iri("Film"));
    const int year = school_a ? 1965 + static_cast<int>(uniform(rng, 20)) : 1995 + static_cast<int>(uniform(rng, 20));
    b.add_attribute(film(f), prop("releaseYear"), std::to_string(year));
    const double runtime = school_a ? std::normal_distribution<double>(88.0, 6.0)(rng)
                                    : std::normal_distribution<double>(148.0, 8.0)(rng);
    b.add_attribute(film(f), prop("runtime"), fixed(std::round(runtime), 0));
    if (coin(rng, 0.9)) {
      const double rating = std::clamp(std::normal_distribution<double>(a ? 6.2 : 7.6, 0.7)(rng), 1.0, 10.0);
      b.add_attribute(film(f), prop("rating"), fixed(rating, 1));
    }
    b.add_attribute(film(f), prop("language"), languages[a ? uniform(rng, 2) : 2 + uniform(rng, 3)]);
    b.add_relation(film(f), prop("director"), person(a ? uniform(rng, 10) : 10 + uniform(rng, 10)));
    const std::size_t cast = 2 + uniform(rng, 2);
    for (std::size_t k = 0; k < cast; ++k) {
      b.add_relation(film(f), prop("starring"), person(a ? 20 + uniform(rng, 15) : 35 + uniform(rng, 15)));
    }
    b.add_relation(film(f), prop("genre"), genre(a ? uniform(rng, 15) : 15 + uniform(rng, 15)));
    if (coin(rng, 0.4)) b.add_relation(film(f), prop("genre"), genre(uniform(rng, kGenres)));
    b.add_relation(film(f), prop("studio"), studio(a ? uniform(rng, 5) : 5 + uniform(rng, 5)));
    if (coin(rng, 0.8)) b.add_relation(film(f), prop("country"), country(a ? uniform(rng, 3) : 3 + uniform(rng, 7)));
  }
  return std::move(b).build();
}

KnowledgeGraph scale_graph(std::size_t entities, std::size_t edges, std::uint64_t seed) {
  constexpr std::size_t kTypes = 5, kBlock = 100, kCategories = 10;
  if (entities < kBlock || edges < 2 * entities) {
    throw Error(ErrorCode::kInvalidArgument, "scale graph needs >= 100 entities and >= 2 edges each");
  }
  Rng rng = make_rng(seed, 0, 44);
  GraphBuilder b;
  std::vector<std::string> names;
  names.reserve(entities);
  for (std::size_t i = 0; i < entities; ++i) names.push_back(iri("e", fmt::format("x{}", i)));
  std::vector<std::string> types, props;
  for (std::size_t t = 0; t < kTypes; ++t) types.push_back(type_iri(fmt::format("K{}", t)));
  for (std::size_t p = 0; p < kTypes; ++p) props.push_back(prop(fmt::format("rel{}", p)));
  const std::string value = prop("value"), category = prop("category");
  for (std::size_t i = 0; i < entities; ++i) {
    const std::size_t block = i / kBlock;
    b.add_type(names[i], types[block % kTypes]);
    const double v = static_cast<double>(block % 7) * 10.0 + std::normal_distribution<double>(0.0, 2.0)(rng);
    b.add_attribute(names[i], value, fixed(v, 2));
    b.add_attribute(names[i], category, fmt::format("c{}", (block + uniform(rng, 3)) % kCategories));
  }
  const std::size_t relations = edges - 2 * entities;
  std::size_t added = 0;
  while (added < relations) {
    const std::size_t s = uniform(rng, entities);
    std::size_t o;
    if (coin(rng, 0.8)) {
      const std::size_t base = (s / kBlock) * kBlock;
      o = base + uniform(rng, std::min(kBlock, entities - base));
    } else {
      o = uniform(rng, entities);
    }
    if (o == s) continue;
    const std::size_t before = b.duplicates();
    b.add_relation(names[s], props[(s / kBlock) % kTypes], names[o]);
    if (b.duplicates() == before) ++added;
  }
  return std::move(b).build();
}

}  // namespace kgprof
