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

// Writes synthetic graphs as TSV.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kgprof/synth.h"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic knowledge graphs"};
  std::string kind = "sample";
  std::string out = "-";
  std::uint64_t seed = 7;
  std::size_t entities = 100000, edges = 1000000;
  app.add_option("kind", kind, "sample | scale | random")
      ->check(CLI::IsMember({"sample", "scale", "random"}));
  app.add_option("-o,--out", out, "output file, - for stdout");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--entities", entities, "entities (scale, random)");
  app.add_option("--edges", edges, "edges (scale), relation edges (random)");
  CLI11_PARSE(app, argc, argv);

  try {
    kgprof::KnowledgeGraph g = [&] {
      if (kind == "scale") return kgprof::scale_graph(entities, edges, seed);
      if (kind == "random") {
        kgprof::RandomGraphSpec spec;
        spec.entities = entities;
        spec.relation_edges = edges;
        return kgprof::random_graph(spec, seed);
      }
      return kgprof::sample_graph(seed);
    }();
    if (out == "-") {
      kgprof::write_tsv(g, std::cout);
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f) {
        std::cerr << "cannot open " << out << '\n';
        return 1;
      }
      kgprof::write_tsv(g, f);
    }
  } catch (const kgprof::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
