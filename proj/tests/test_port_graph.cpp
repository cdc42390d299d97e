// Copyright 2026 The portmatch Authors
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
#include <set>

#include "doctest.h"
#include "portmatch/circuit.hpp"
#include "portmatch/error.hpp"
#include "portmatch/port_graph.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace portmatch;

namespace {

// v0 -(1:0)- v1 -(1:0)- v2, each vertex paired {0,1}
PortGraph chain3() {
  PortGraphBuilder b;
  for (int i = 0; i < 3; ++i) b.add_vertex({0, 1});
  b.add_edge({0, 1}, {1, 0});
  b.add_edge({1, 1}, {2, 0});
  return b.build();
}

std::vector<std::uint32_t> sorted_edges(const LinearPath& p) {
  auto e = p.edges;
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_SUITE("port_graph") {

TEST_CASE("smallest nonempty graph") {
  PortGraphBuilder b;
  b.add_vertex({0});
  b.add_vertex({0});
  b.add_edge({0, 0}, {1, 0});
  auto g = b.build();
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 1);
  CHECK(g.num_edges() == 1);
  auto m = metrics(g);
  CHECK(m.width == 1);
  CHECK(m.depth == 2);
  CHECK(m.is_flat);
}

TEST_CASE("default pairing is consecutive in label order") {
  PortGraphBuilder b;
  b.add_vertex({3, 0, 2, 1});
  auto g = b.build();
  auto cs = g.classes(0);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0] == PortClass{0, 1});
  CHECK(cs[1] == PortClass{2, 3});

  PortGraphBuilder odd;
  odd.add_vertex({5, 1, 7});
  auto h = odd.build();
  CHECK(h.classes(0) == std::vector<PortClass>{{1, 5}, {7, kNoPort}});
}

TEST_CASE("construction errors") {
  PortGraphBuilder b;
  b.add_vertex({0, 1});
  b.add_vertex({0, 1});
  b.add_edge({0, 1}, {1, 0});
  CHECK_THROWS_AS(b.add_edge({0, 1}, {1, 1}), GraphError);
  CHECK_THROWS_AS(b.add_edge({0, 7}, {1, 1}), GraphError);
  CHECK_THROWS_AS(b.add_edge({2, 0}, {1, 1}), GraphError);
  CHECK_THROWS_AS(b.add_vertex({0, 0}), GraphError);
  CHECK_THROWS_AS(b.add_vertex({0, 1}, {}, {{0, 2}}), GraphError);
  CHECK_THROWS_AS(b.add_vertex({0, 1, 2}, {}, {{0, kNoPort}, {1, kNoPort}, {2, kNoPort}}), GraphError);
}

TEST_CASE("linear paths of a chain") {
  auto g = chain3();
  auto ps = linear_paths(g);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].edges.size() == 2);
  CHECK(ps[0].visits.size() == 3);
  CHECK_FALSE(ps[0].cycle);
  CHECK(linear_paths(PortGraph{}).empty());
}

TEST_CASE("linear paths agree with edge-following oracle on CX circuits") {
  GateSet gs;
  gs.add("CX", {2, 0, false});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto c = random_circuit(3, 5, gs, seed);
    auto g = circuit_to_portgraph(c, gs);
    auto ps = linear_paths(g);
    auto o = pmtest::oracle_paths(g);
    std::vector<std::vector<std::uint32_t>> mine;
    for (auto& p : ps)
      if (!p.edges.empty()) mine.push_back(sorted_edges(p));
    std::sort(mine.begin(), mine.end());
    CHECK(mine == o.edge_paths);
    CHECK(ps.size() == o.width());
    // every qubit carries a gate with five CX on three qubits
    std::set<std::uint32_t> used;
    for (auto& gt : c.gates) used.insert(gt.qubits.begin(), gt.qubits.end());
    if (used.size() == 3) CHECK(ps.size() == 3);
  }
}

TEST_CASE("linear paths agree with oracle on random flat graphs") {
  pmtest::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 9);
    o.max_classes = 3;
    auto g = pmtest::random_flat_graph(rng, o, i % 2 == 0);
    auto ps = linear_paths(g);
    auto oracle = pmtest::oracle_paths(g);
    std::vector<std::vector<std::uint32_t>> mine;
    for (auto& p : ps)
      if (!p.edges.empty()) mine.push_back(sorted_edges(p));
    std::sort(mine.begin(), mine.end());
    CHECK(mine == oracle.edge_paths);
    CHECK(ps.size() == oracle.width());
    CHECK_FALSE(oracle.has_cycle);
    PathIndex idx(g);
    CHECK(idx.flat());
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      for (auto& pe : g.ports(v)) {
        auto loc = idx.locate(v, pe.port);
        auto& visit = ps[loc.path].visits[loc.position];
        CHECK(visit.vertex == v);
        CHECK((visit.back == pe.port || visit.fwd == pe.port));
      }
  }
}

TEST_CASE("cycle detection") {
  PortGraphBuilder b;
  b.add_vertex({0, 1});
  b.add_vertex({0, 1});
  b.add_edge({0, 1}, {1, 0});
  b.add_edge({1, 1}, {0, 0});
  auto g = b.build();
  auto m = metrics(g);
  CHECK_FALSE(m.is_flat);
  CHECK(m.width == 1);
  CHECK(pmtest::oracle_paths(g).has_cycle);
}

TEST_CASE("width bound on random flat graphs") {
  pmtest::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 12);
    o.max_classes = 3;
    auto g = pmtest::random_flat_graph(rng, o, false);
    auto m = metrics(g);
    REQUIRE(m.is_flat);
    CHECK(m.width <= (m.n_odd + m.n_open) / 2);
  }
}

TEST_CASE("circuit metrics") {
  auto gs = GateSet::benchmark();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto c = random_circuit(4, 12, gs, seed);
    auto g = circuit_to_portgraph(c, gs);
    std::vector<std::size_t> per(4);
    for (auto& gt : c.gates)
      for (auto q : gt.qubits) ++per[q];
    std::size_t used = std::count_if(per.begin(), per.end(), [](auto n) { return n > 0; });
    auto m = metrics(g);
    CHECK(m.width == used);
    CHECK(m.depth == *std::max_element(per.begin(), per.end()));
    CHECK(m.is_flat);
  }
}

TEST_CASE("components and isomorphism") {
  auto g = chain3();
  CHECK(is_connected(g));
  PortGraphBuilder b;
  b.add_vertex({0, 1});
  b.add_vertex({0, 1});
  auto two = b.build();
  std::size_t n = 0;
  connected_components(two, &n);
  CHECK(n == 2);
  CHECK_FALSE(is_connected(two));

  // same chain with vertices inserted in another order
  PortGraphBuilder r;
  for (int i = 0; i < 3; ++i) r.add_vertex({0, 1});
  r.add_edge({2, 1}, {0, 0});
  r.add_edge({1, 1}, {2, 0});
  CHECK(is_isomorphic(g, r.build()));

  PortGraphBuilder w;
  for (int i = 0; i < 3; ++i) w.add_vertex({0, 1}, i == 1 ? VertexLabel{"x", -1} : VertexLabel{});
  w.add_edge({0, 1}, {1, 0});
  w.add_edge({1, 1}, {2, 0});
  CHECK_FALSE(is_isomorphic(g, w.build()));
}

TEST_CASE("materialize keeps ports and opens cut edges") {
  auto g = chain3();
  auto m = materialize(g, {{1, 2}, {1}});
  CHECK(m.graph.num_vertices() == 2);
  CHECK(m.graph.num_edges() == 1);
  CHECK(m.to_parent == std::vector<VertexId>{1, 2});
  CHECK(m.graph.find(0, 0)->open());
  CHECK_THROWS_AS(materialize(g, {{1}, {1}}), GraphError);
}

TEST_CASE("graph serialisation round trip") {
  pmtest::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 10);
    auto g = pmtest::random_flat_graph(rng, o, false);
    ByteWriter w;
    write_graph(w, g);
    ByteReader r(w.bytes());
    CHECK(read_graph(r) == g);
  }
}

}
