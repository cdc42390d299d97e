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

#include "portmatch/normalize.hpp"

#include "portmatch/error.hpp"

namespace portmatch {

NormalizedGraph normalize_two_paths(const PortGraph& g) {
  if (!PathIndex(g).flat()) throw GraphError("normalize_two_paths requires a flat graph");

  NormalizedGraph out;
  out.fragments.resize(g.num_vertices());
  PortGraphBuilder b;
  // home[v][i]: new vertex holding the i-th present port of v
  std::vector<std::vector<VertexId>> home(g.num_vertices());
  std::vector<std::pair<VertexId, VertexId>> spine;

  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto ps = g.ports(v);
    for (const auto& e : ps)
      if (e.port > kMaxUserPort) throw GraphError("vertex uses a reserved port label");
    auto port_index = [&](Port p) { return static_cast<std::size_t>(g.find(v, p) - ps.data()); };
    home[v].assign(ps.size(), kNoVertex);

    auto cls = g.classes(v);
    if (cls.size() <= 2) {
      std::vector<Port> ports;
      for (const auto& e : ps) ports.push_back(e.port);
      VertexId id = b.add_vertex(std::move(ports), g.label(v), cls);
      out.back_map.push_back(v);
      out.fragments[v].push_back(id);
      for (auto& h : home[v]) h = id;
      continue;
    }

    out.changed = true;
    const std::size_t k = cls.size();
    const PortClass spine_class = cls[0];
    for (std::size_t j = 0; j + 1 < k; ++j) {
      const PortClass& extra = cls[j + 1];
      std::vector<Port> ports;
      std::vector<PortClass> pairing;
      if (j == 0) {
        ports = {spine_class.first, kSpineOut};
        pairing.push_back({spine_class.first, kSpineOut});
      } else if (j + 2 < k) {
        ports = {kSpineIn, kSpineOut};
        pairing.push_back({kSpineIn, kSpineOut});
      } else if (spine_class.singleton()) {
        ports = {kSpineIn};
        pairing.push_back({kSpineIn, kNoPort});
      } else {
        ports = {kSpineIn, spine_class.second};
        pairing.push_back({spine_class.second, kSpineIn});
      }
      ports.push_back(extra.first);
      if (!extra.singleton()) ports.push_back(extra.second);
      pairing.push_back(extra);

      VertexLabel label = g.label(v);
      label.fragment = static_cast<std::int32_t>(j);
      VertexId id = b.add_vertex(ports, std::move(label), std::move(pairing));
      out.back_map.push_back(v);
      out.fragments[v].push_back(id);
      for (Port p : ports)
        if (p <= kMaxUserPort) home[v][port_index(p)] = id;
      if (j > 0) spine.push_back({id - 1, id});
    }
  }

  for (const auto& e : g.edges()) {
    auto at = [&](Endpoint x) {
      auto ps = g.ports(x.vertex);
      auto i = static_cast<std::size_t>(g.find(x.vertex, x.port) - ps.data());
      return Endpoint{home[x.vertex][i], x.port};
    };
    b.add_edge(at(e.a), at(e.b));
  }
  for (auto [from, to] : spine) b.add_edge({from, kSpineOut}, {to, kSpineIn});

  out.graph = b.build();
  return out;
}

}  // namespace portmatch
