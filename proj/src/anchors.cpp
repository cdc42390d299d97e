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

#include "portmatch/anchors.hpp"

#include <algorithm>

#include "portmatch/error.hpp"
#include "traversal.hpp"

namespace portmatch {

namespace {

std::uint32_t cap_for(std::size_t d) {
  return d == 0 ? detail::kUnlimited : static_cast<std::uint32_t>(d - 1);
}

void require_flat(const PathIndex& idx) {
  if (!idx.flat()) throw GraphError("graph is not flat");
}

}  // namespace

std::uint64_t anchor_bound(std::size_t w) {
  // binom(3w, w) / (2w + 1), exact in 64 bits for w <= 16
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= w; ++i) c = c * (2 * w + i) / i;
  return c / (2 * w + 1);
}

std::vector<AnchorCandidate> all_anchors(const PortGraph& g, Root root, std::size_t w, std::size_t d) {
  PathIndex idx(g);
  require_flat(idx);
  detail::Engine engine(g, idx);
  std::vector<AnchorCandidate> out;
  for (const auto& p : engine.all(root, w, cap_for(d))) {
    AnchorCandidate c;
    c.anchors.root = root;
    for (const auto& o : p.openings) {
      if (o.anchor != kNoVertex) c.anchors.anchors.push_back(o.anchor);
      c.seen_paths.push_back(o.path);
    }
    out.push_back(std::move(c));
  }
  return out;
}

Subgraph g_max(const PortGraph& g, const AnchorCandidate& c, std::size_t d) {
  PathIndex idx(g);
  require_flat(idx);
  detail::Engine engine(g, idx);
  auto ops = engine.replay(c.anchors, cap_for(d));
  std::vector<bool> vin(g.num_vertices(), false);
  std::vector<bool> ein(g.num_edges(), false);
  auto add_vertex = [&](VertexId v) {
    if (v != kNoVertex) vin[v] = true;
  };
  for (const auto& o : ops) {
    add_vertex(o.anchor);
    for (const auto& h : o.half) {
      // each visit is joined to its predecessor by the edge it enters through
      for (detail::Cursor cur = h; !cur.empty(); engine.advance(cur)) {
        add_vertex(cur.vertex);
        const auto* e = g.find(cur.vertex, cur.entry);
        if (!e->open()) ein[e->edge] = true;
      }
    }
  }
  Subgraph s;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (vin[v]) s.vertices.push_back(v);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!ein[e]) continue;
    const auto& ed = g.edge(e);
    if (vin[ed.a.vertex] && vin[ed.b.vertex]) s.edges.push_back(e);
  }
  return s;
}

SubjectStrings subject_strings(const PortGraph& g, const AnchorCandidate& c, std::size_t d) {
  PathIndex idx(g);
  require_flat(idx);
  detail::Engine engine(g, idx);
  auto ops = engine.replay(c.anchors, cap_for(d));
  SubjectStrings out;
  engine.strings(ops, out.tuple, &out.vertices);
  return out;
}

}  // namespace portmatch
