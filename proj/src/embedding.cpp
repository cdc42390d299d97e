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

#include "portmatch/embedding.hpp"

#include <algorithm>

#include "portmatch/error.hpp"

namespace portmatch {

bool verify_embedding(const PortGraph& p, const PortGraph& g, const Embedding& e) {
  if (e.vertex_map.size() != p.num_vertices())
    throw EmbeddingError("vertex map size differs from the pattern's vertex count");
  for (VertexId image : e.vertex_map)
    if (image >= g.num_vertices()) throw EmbeddingError("vertex map references a nonexistent subject vertex");

  std::vector<bool> used(g.num_vertices(), false);
  for (VertexId image : e.vertex_map) {
    if (used[image]) return false;
    used[image] = true;
  }

  for (VertexId v = 0; v < p.num_vertices(); ++v) {
    VertexId u = e.vertex_map[v];
    auto pp = p.ports(v);
    auto gp = g.ports(u);
    if (pp.size() != gp.size()) return false;
    for (std::size_t i = 0; i < pp.size(); ++i) {
      if (pp[i].port != gp[i].port || pp[i].partner != gp[i].partner) return false;
    }
    const auto& lp = p.label(v);
    const auto& lg = g.label(u);
    if (lp.weight && lg.weight && *lp.weight != *lg.weight) return false;
    if (lp.fragment != lg.fragment) return false;
  }

  std::vector<bool> hit(g.num_edges(), false);
  for (const auto& edge : p.edges()) {
    Endpoint a{e.vertex_map[edge.a.vertex], edge.a.port};
    Endpoint b{e.vertex_map[edge.b.vertex], edge.b.port};
    const auto* ea = g.find(a.vertex, a.port);
    if (ea->open()) return false;
    if (g.edge(ea->edge).other(a) != b) return false;
    if (hit[ea->edge]) return false;
    hit[ea->edge] = true;
  }
  return true;
}

bool is_convex(const PathIndex& p_paths, const PathIndex& g_paths, const PortGraph& p, const Embedding& e) {
  std::vector<bool> taken(g_paths.width(), false);
  for (const auto& path : p_paths.paths()) {
    const auto& first = path.visits.front();
    Port port = first.back != kNoPort ? first.back : first.fwd;
    auto loc = g_paths.locate(e.vertex_map[first.vertex], port);
    if (taken[loc.path]) return false;
    taken[loc.path] = true;
  }
  (void)p;
  return true;
}

bool is_convex(const PortGraph& p, const PortGraph& g, const Embedding& e) {
  if (!verify_embedding(p, g, e)) throw EmbeddingError("is_convex requires a valid embedding");
  PathIndex gi(g);
  if (!gi.flat()) throw GraphError("is_convex requires a flat subject graph");
  PathIndex pi(p);
  return is_convex(pi, gi, p, e);
}

}  // namespace portmatch
