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
#include <chrono>
#include <numeric>

#include "doctest.h"
#include "portmatch/canonical_tree.hpp"
#include "portmatch/circuit.hpp"
#include "portmatch/embedding.hpp"
#include "portmatch/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace portmatch;

namespace {

// Gates A = CX(0,1), B = CX(0,1), D = CX(1,2), C = CX(0,2), vertices 0..3.
PortGraph three_wire() {
  Circuit c{3, {{"CX", {0, 1}, {}}, {"CX", {0, 1}, {}}, {"CX", {1, 2}, {}}, {"CX", {0, 2}, {}}}};
  return circuit_to_portgraph(c, GateSet::benchmark());
}

PortGraph permuted(const PortGraph& g, const std::vector<VertexId>& perm) {
  // perm[old] = new
  std::vector<VertexId> inv(perm.size());
  for (VertexId v = 0; v < perm.size(); ++v) inv[perm[v]] = v;
  PortGraphBuilder b;
  for (VertexId n = 0; n < inv.size(); ++n) {
    std::vector<Port> ports;
    for (auto& e : g.ports(inv[n])) ports.push_back(e.port);
    b.add_vertex(ports, g.label(inv[n]), g.classes(inv[n]));
  }
  for (auto& e : g.edges()) b.add_edge({perm[e.a.vertex], e.a.port}, {perm[e.b.vertex], e.b.port});
  return b.build();
}

bool is_tree(const PortGraph& t) { return is_connected(t) && t.num_edges() + 1 == t.num_vertices(); }

// Roots a vertex-rooted CT accepts: no two classes on one path.
std::vector<VertexId> tree_roots(const PortGraph& g) {
  PathIndex idx(g);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto cs = idx.classes_of(v);
    bool ok = true;
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j) ok = ok && cs[i].path != cs[j].path;
    if (ok) out.push_back(v);
  }
  return out;
}

bool prefix_of(const StringTuple& a, const StringTuple& b) {
  if (a.arity() != b.arity()) return false;
  for (std::size_t k = 0; k < a.arity(); ++k) {
    auto& s = a.strings[k];
    auto& t = b.strings[k];
    if (s.size() > t.size() || !std::equal(s.begin(), s.end(), t.begin())) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("canonical_tree") {

TEST_CASE("split over every vertex is the graph") {
  pmtest::Rng rng(20);
  for (int i = 0; i < 50; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 8);
    auto g = pmtest::random_flat_graph(rng, o);
    std::vector<VertexId> all(g.num_vertices());
    std::iota(all.begin(), all.end(), 0);
    auto s = split_graph(g, all);
    CHECK(is_isomorphic(s.graph, g));
    CHECK(s.origin == all);
  }
}

TEST_CASE("empty anchor set splits a two-path vertex") {
  PortGraphBuilder b;
  b.add_vertex({0, 1, 2, 3});
  auto s = split_graph(b.build(), {});
  CHECK(s.graph.num_vertices() == 2);
  CHECK(s.split_of(0).size() == 2);
  CHECK_THROWS_AS(split_graph(b.build(), std::vector<VertexId>{3}), GraphError);
}

TEST_CASE("three wires split at two anchors") {
  auto g = three_wire();
  std::vector<VertexId> x{0, 2};
  auto s = split_graph(g, x);
  CHECK(s.graph.num_vertices() == 6);
  CHECK(is_tree(s.graph));
  CHECK(linear_paths(s.graph).size() == 3);
  CHECK(s.split_of(0).size() == 1);
  CHECK(s.split_of(1).size() == 2);
  CHECK(s.split_of(3).size() == 2);
  CHECK(as_strings(g, x).arity() == 6);
}

TEST_CASE("CT of the three-wire graph merges only split copies") {
  auto g = three_wire();
  auto ct = ct_representation(g, 0);
  CHECK(is_tree(ct.split.graph));
  CHECK(ct.split.anchors.size() == 2);
  CHECK(ct.path_table.size() == 3);
  for (VertexId s = 0; s < ct.split.graph.num_vertices(); ++s) {
    VertexId v = ct.split.origin[s];
    bool anchor = std::count(ct.split.anchors.begin(), ct.split.anchors.end(), v) > 0;
    if (ct.merge_label[s]) {
      CHECK_FALSE(anchor);
      VertexId r = ct.resolve(*ct.merge_label[s]);
      CHECK(r != s);
      CHECK(ct.split.origin[r] == v);
    }
  }
  // each non-anchor gate has exactly one labelled copy
  std::size_t labelled = 0;
  for (auto& m : ct.merge_label) labelled += m.has_value();
  CHECK(labelled == 2);
  CHECK(is_isomorphic(reconstruct(ct), g));
}

TEST_CASE("single path graph") {
  PortGraphBuilder b;
  for (int i = 0; i < 4; ++i) b.add_vertex({0, 1}, {std::string(1, char('a' + i)), -1});
  for (VertexId i = 0; i + 1 < 4; ++i) b.add_edge({i, 1}, {i + 1, 0});
  auto g = b.build();
  for (VertexId r = 0; r < 4; ++r) {
    CHECK(canonical_anchors(g, r) == std::vector<VertexId>{r});
    auto ct = ct_representation(g, r);
    CHECK(is_isomorphic(ct.split.graph, g));
    CHECK(is_isomorphic(reconstruct(ct), g));
    auto t = as_strings(g, std::vector<VertexId>{r});
    CHECK(t.arity() == 2);
    CHECK(t.strings[0].size() + t.strings[1].size() == 5);
  }
  // an end anchor leaves one side with the anchor character only
  auto t = as_strings(g, std::vector<VertexId>{0});
  CHECK(std::min(t.strings[0].size(), t.strings[1].size()) == 1);
}

TEST_CASE("canonical anchors on random graphs") {
  pmtest::Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 10);
    auto g = pmtest::random_flat_graph(rng, o);
    VertexId r = static_cast<VertexId>(pmtest::uniform(rng, 0, g.num_vertices() - 1));
    auto x = canonical_anchors(g, r);
    CHECK(x.size() <= metrics(g).width);
    CHECK(x.front() == r);
    CHECK(is_connected(split_graph(g, x).graph));
    CHECK(canonical_anchors(g, r) == x);
  }
}

TEST_CASE("CT round trip on random graphs") {
  pmtest::Rng rng(22);
  for (int i = 0; i < 300; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 10);
    auto g = pmtest::random_flat_graph(rng, o);
    auto roots = tree_roots(g);
    if (roots.empty()) continue;
    auto r = roots[pmtest::uniform(rng, 0, roots.size() - 1)];
    auto ct = ct_representation(g, r);
    CHECK(is_tree(ct.split.graph));
    CHECK(is_isomorphic(reconstruct(ct), g));
    for (VertexId s = 0; s < ct.split.graph.num_vertices(); ++s) CHECK(ct.resolve(ct.address(s)) == s);
  }
}

TEST_CASE("reconstruct rejects conflicting merges") {
  auto g = three_wire();
  auto ct = ct_representation(g, 0);
  // send a copy of B onto the anchor A: both own ports 0 and 1
  auto bs = ct.split.split_of(1);
  auto bad = ct;
  bad.merge_label[bs[0]] = ct.address(ct.root);
  bad.merge_label[bs[1]] = ct.address(ct.root);
  CHECK_THROWS_AS(reconstruct(bad), GraphError);
  CHECK_THROWS_AS(ct.resolve(std::vector<Port>{7, 7}), InvariantError);
}

TEST_CASE("string counts") {
  PortGraphBuilder b;
  b.add_vertex({0, 1});
  auto one = b.build();
  CHECK(as_strings(one, std::vector<VertexId>{0}).arity() == 2);
  auto gs = GateSet::benchmark();
  pmtest::Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    auto c = pmtest::random_connected_circuit(rng, 3, 8, gs);
    auto g = circuit_to_portgraph(c, gs);
    auto t = as_strings(g, canonical_anchors(g, 0));
    CHECK(t.arity() == 6);
    CHECK(t.width() == 3);
    auto capped = as_strings(g, canonical_anchors(g, 0), 2);
    CHECK(capped.max_length() <= 2);
  }
}

TEST_CASE("non-anchor sets are rejected") {
  auto g = three_wire();
  // A alone never opens the third wire
  CHECK_THROWS_AS(as_strings(g, std::vector<VertexId>{0}), GraphError);
  // D and C together leave the split graph disconnected from A's side
  CHECK_THROWS_AS(as_strings(g, std::vector<VertexId>{0, 0}), GraphError);
}

TEST_CASE("strings do not depend on vertex numbering") {
  pmtest::Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 9);
    auto g = pmtest::random_flat_graph(rng, o);
    std::vector<VertexId> perm(g.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto h = permuted(g, perm);
    VertexId r = static_cast<VertexId>(pmtest::uniform(rng, 0, g.num_vertices() - 1));
    auto xg = canonical_anchors(g, r);
    auto xh = canonical_anchors(h, perm[r]);
    REQUIRE(xg.size() == xh.size());
    for (std::size_t k = 0; k < xg.size(); ++k) CHECK(perm[xg[k]] == xh[k]);
    CHECK(as_strings(g, xg) == as_strings(h, xh));
  }
}

TEST_CASE("subgraph strings are prefixes") {
  pmtest::Rng rng(25);
  std::size_t checked = 0;
  while (checked < 1000) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 2, 8);
    auto g = pmtest::random_flat_graph(rng, o);
    auto subsets = pmtest::connected_vertex_subsets(g);
    auto& vs = subsets[pmtest::uniform(rng, 0, subsets.size() - 1)];
    auto sub = materialize(g, {vs, pmtest::induced_edges(g, vs)});
    if (!is_convex(sub.graph, g, {0, sub.to_parent})) continue;
    VertexId r = static_cast<VertexId>(pmtest::uniform(rng, 0, vs.size() - 1));
    auto xh = canonical_anchors(sub.graph, r);
    std::vector<VertexId> xg;
    for (auto v : xh) xg.push_back(sub.to_parent[v]);
    // the law needs xg to be an anchor set of g too
    if (!is_connected(split_graph(g, xg).graph) || PathIndex(sub.graph).width() != PathIndex(g).width()) continue;
    auto th = as_strings(sub.graph, xh);
    auto tg = as_strings(g, xg);
    CHECK(prefix_of(th, tg));
    ++checked;
  }
}

TEST_CASE("anchor search scales with w squared times d") {
  // time per unit of w^2 d stays within a constant factor across the sweep
  auto gs = GateSet::benchmark();
  std::vector<double> per_unit;
  for (std::uint32_t w : {4u, 8u, 16u}) {
    for (std::size_t d : {20u, 80u}) {
      Circuit c = random_circuit(w, w * d / 2, gs, 7);
      auto g = circuit_to_portgraph(c, gs);
      if (!is_connected(g)) continue;
      auto m = metrics(g);
      std::vector<double> ts;
      for (int rep = 0; rep < 7; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        for (int k = 0; k < 20; ++k) (void)canonical_anchors(g, 0);
        ts.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
      std::nth_element(ts.begin(), ts.begin() + 3, ts.end());
      per_unit.push_back(ts[3] / double(m.width * m.width * m.depth));
    }
  }
  REQUIRE(per_unit.size() >= 3);
  auto [lo, hi] = std::minmax_element(per_unit.begin(), per_unit.end());
  CHECK(*hi <= 8.0 * *lo);
}

}
