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

#include "portmatch/port_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "portmatch/error.hpp"

namespace portmatch {

const PortEntry* PortGraph::find(VertexId v, Port p) const {
  auto ps = ports(v);
  auto it = std::lower_bound(ps.begin(), ps.end(), p, [](const PortEntry& e, Port q) { return e.port < q; });
  if (it == ps.end() || it->port != p) return nullptr;
  return &*it;
}

std::vector<PortClass> PortGraph::classes(VertexId v) const {
  std::vector<PortClass> out;
  for (const auto& e : ports(v)) {
    if (e.partner == e.port) {
      out.push_back({e.port, kNoPort});
    } else if (e.port < e.partner) {
      out.push_back({e.port, e.partner});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t PortGraph::signature(VertexId v) const {
  Fnv1a64 h;
  auto ps = ports(v);
  h.add_u32(static_cast<std::uint32_t>(ps.size()));
  for (const auto& e : ps) {
    h.add_u32(e.port);
    h.add_u32(e.partner);
  }
  const auto& l = labels_[v];
  h.add_u8(l.weight ? 1 : 0);
  if (l.weight) h.add_string(*l.weight);
  h.add_u32(static_cast<std::uint32_t>(l.fragment));
  return h.value();
}

// ---------------------------------------------------------------------------

VertexId PortGraphBuilder::add_vertex(std::vector<Port> ports, VertexLabel label) {
  std::sort(ports.begin(), ports.end());
  std::vector<PortClass> pairing;
  for (std::size_t i = 0; i < ports.size(); i += 2) {
    if (i + 1 < ports.size())
      pairing.push_back({ports[i], ports[i + 1]});
    else
      pairing.push_back({ports[i], kNoPort});
  }
  return add_vertex(std::move(ports), std::move(label), std::move(pairing));
}

VertexId PortGraphBuilder::add_vertex(std::vector<Port> ports, VertexLabel label, std::vector<PortClass> pairing) {
  std::sort(ports.begin(), ports.end());
  if (std::adjacent_find(ports.begin(), ports.end()) != ports.end())
    throw GraphError("vertex declares the same port twice");
  if (!ports.empty() && ports.back() == kNoPort) throw GraphError("port label 0xFFFF is reserved");

  Pending v;
  v.label = std::move(label);
  for (Port p : ports) v.entries.push_back({p, kNoPort, kOpenPort});

  auto entry = [&](Port p) -> PortEntry& {
    auto it = std::lower_bound(v.entries.begin(), v.entries.end(), p,
                               [](const PortEntry& e, Port q) { return e.port < q; });
    if (it == v.entries.end() || it->port != p) throw GraphError("pairing references an absent port");
    if (it->partner != kNoPort) throw GraphError("port appears in two pairing classes");
    return *it;
  };
  for (const auto& c : pairing) {
    if (c.singleton()) {
      auto& e = entry(c.first);
      e.partner = c.first;
    } else {
      if (c.first == c.second) throw GraphError("pairing class repeats a port");
      auto& a = entry(c.first);
      auto& b = entry(c.second);
      a.partner = c.second;
      b.partner = c.first;
    }
  }
  std::size_t singletons = 0;
  for (const auto& e : v.entries) {
    if (e.partner == kNoPort) throw GraphError("pairing does not cover every port");
    if (e.partner == e.port) ++singletons;
  }
  if (singletons > 1) throw GraphError("pairing has more than one singleton");
  if (singletons == 1 && v.entries.size() % 2 == 0)
    throw GraphError("singleton class on a vertex of even degree");

  vertices_.push_back(std::move(v));
  return static_cast<VertexId>(vertices_.size() - 1);
}

PortEntry& PortGraphBuilder::slot(Endpoint e) {
  if (e.vertex >= vertices_.size()) throw GraphError("edge references a nonexistent vertex");
  auto& es = vertices_[e.vertex].entries;
  auto it = std::lower_bound(es.begin(), es.end(), e.port, [](const PortEntry& x, Port q) { return x.port < q; });
  if (it == es.end() || it->port != e.port) throw GraphError("edge references an absent port");
  return *it;
}

EdgeId PortGraphBuilder::add_edge(Endpoint a, Endpoint b) {
  if (a == b) throw GraphError("edge connects a port to itself");
  auto& sa = slot(a);
  auto& sb = slot(b);
  if (!sa.open() || !sb.open()) throw GraphError("port is already occupied by an edge");
  auto id = static_cast<EdgeId>(edges_.size());
  sa.edge = id;
  sb.edge = id;
  edges_.push_back({a, b});
  return id;
}

PortGraph PortGraphBuilder::build() const {
  PortGraph g;
  g.offsets_.reserve(vertices_.size() + 1);
  for (const auto& v : vertices_) {
    g.entries_.insert(g.entries_.end(), v.entries.begin(), v.entries.end());
    g.offsets_.push_back(static_cast<std::uint32_t>(g.entries_.size()));
    g.labels_.push_back(v.label);
  }
  g.edges_ = edges_;
  return g;
}

// ---------------------------------------------------------------------------
// Linear paths

namespace {

struct ClassKey {
  VertexId vertex;
  Port port;
  auto operator<=>(const ClassKey&) const = default;
};

Port min_port(const PathVisit& v) { return std::min(v.back, v.fwd); }
ClassKey key_of(const PathVisit& v) { return {v.vertex, min_port(v)}; }

void reverse_path(LinearPath& p) {
  std::reverse(p.visits.begin(), p.visits.end());
  for (auto& v : p.visits) std::swap(v.back, v.fwd);
  if (p.cycle) {
    // edges[i] joins visits[i] and visits[i+1 mod n]; after reversing the
    // visit order the closing edge stays last.
    if (!p.edges.empty()) {
      EdgeId closing = p.edges.back();
      p.edges.pop_back();
      std::reverse(p.edges.begin(), p.edges.end());
      p.edges.push_back(closing);
    }
  } else {
    std::reverse(p.edges.begin(), p.edges.end());
  }
}

}  // namespace

std::vector<LinearPath> linear_paths(const PortGraph& g) {
  // Visited flag per pairing class, keyed by the class' smaller port entry.
  std::vector<std::vector<bool>> done(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) done[v].assign(g.degree(v), false);
  auto index_of = [&](VertexId v, Port p) {
    auto ps = g.ports(v);
    return static_cast<std::size_t>(g.find(v, p) - ps.data());
  };
  auto mark = [&](VertexId v, Port a, Port b) {
    done[v][index_of(v, a)] = true;
    if (b != kNoPort) done[v][index_of(v, b)] = true;
  };

  struct Step {
    PathVisit visit;
    EdgeId edge;
  };
  // Walks away from `start` through port `exit`; stops at an open port, a
  // singleton, or when the walk closes on `start` (cycle).
  auto walk = [&](VertexId start, PortClass cls, Port exit, std::vector<Step>& out) -> bool {
    VertexId v = start;
    Port x = exit;
    while (x != kNoPort) {
      const auto* e = g.find(v, x);
      if (e->open()) return false;
      const Edge& ed = g.edge(e->edge);
      Endpoint there = ed.other({v, x});
      if (there.vertex == start && (there.port == cls.first || there.port == cls.second)) {
        out.push_back({{start, there.port, kNoPort}, e->edge});
        return true;
      }
      const auto* te = g.find(there.vertex, there.port);
      Port leave = te->partner == te->port ? kNoPort : te->partner;
      out.push_back({{there.vertex, there.port, leave}, e->edge});
      v = there.vertex;
      x = leave;
    }
    return false;
  };

  std::vector<LinearPath> paths;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (const auto& cls : g.classes(v)) {
      if (done[v][index_of(v, cls.first)]) continue;
      LinearPath path;
      std::vector<Step> w1;
      if (walk(v, cls, cls.first, w1)) {
        path.cycle = true;
        path.visits.push_back({v, cls.second, cls.first});
        path.edges.push_back(w1.front().edge);
        for (std::size_t i = 0; i + 1 < w1.size(); ++i) {
          path.visits.push_back(w1[i].visit);
          path.edges.push_back(w1[i + 1].edge);
        }
        // Rotate to the smallest visit and orient by its smaller port.
        std::size_t best = 0;
        for (std::size_t i = 1; i < path.visits.size(); ++i)
          if (key_of(path.visits[i]) < key_of(path.visits[best])) best = i;
        std::rotate(path.visits.begin(), path.visits.begin() + static_cast<std::ptrdiff_t>(best), path.visits.end());
        std::rotate(path.edges.begin(), path.edges.begin() + static_cast<std::ptrdiff_t>(best), path.edges.end());
        if (path.visits.front().fwd > path.visits.front().back) {
          reverse_path(path);
          std::size_t first = 0;
          for (std::size_t i = 1; i < path.visits.size(); ++i)
            if (key_of(path.visits[i]) < key_of(path.visits[first])) first = i;
          std::rotate(path.visits.begin(), path.visits.begin() + static_cast<std::ptrdiff_t>(first), path.visits.end());
          std::rotate(path.edges.begin(), path.edges.begin() + static_cast<std::ptrdiff_t>(first), path.edges.end());
        }
      } else {
        std::vector<Step> w2;
        if (!cls.singleton()) walk(v, cls, cls.second, w2);
        for (auto it = w1.rbegin(); it != w1.rend(); ++it) {
          path.visits.push_back({it->visit.vertex, it->visit.fwd, it->visit.back});
          path.edges.push_back(it->edge);
        }
        path.visits.push_back({v, cls.first, cls.second});
        for (const auto& s : w2) {
          path.edges.push_back(s.edge);
          path.visits.push_back(s.visit);
        }
        if (key_of(path.visits.back()) < key_of(path.visits.front())) reverse_path(path);
      }
      for (const auto& pv : path.visits) mark(pv.vertex, pv.back == kNoPort ? pv.fwd : pv.back, pv.back == kNoPort ? kNoPort : pv.fwd);
      paths.push_back(std::move(path));
    }
  }

  auto min_key = [](const LinearPath& p) {
    ClassKey k = key_of(p.visits.front());
    for (const auto& v : p.visits) k = std::min(k, key_of(v));
    return k;
  };
  std::vector<std::pair<ClassKey, std::size_t>> order;
  for (std::size_t i = 0; i < paths.size(); ++i) order.push_back({min_key(paths[i]), i});
  std::sort(order.begin(), order.end());
  std::vector<LinearPath> sorted;
  sorted.reserve(paths.size());
  for (const auto& [k, i] : order) {
    sorted.push_back(std::move(paths[i]));
    sorted.back().id = static_cast<std::uint32_t>(sorted.size() - 1);
  }
  return sorted;
}

PathIndex::PathIndex(const PortGraph& g) : paths_(linear_paths(g)) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (const auto& e : g.ports(v)) ports_.push_back(e.port);
    port_offsets_.push_back(static_cast<std::uint32_t>(ports_.size()));
  }
  port_locations_.resize(ports_.size());
  auto slot = [&](VertexId v, Port p) -> Location& {
    auto b = ports_.begin() + port_offsets_[v];
    auto e = ports_.begin() + port_offsets_[v + 1];
    auto it = std::lower_bound(b, e, p);
    return port_locations_[static_cast<std::size_t>(it - ports_.begin())];
  };
  for (const auto& path : paths_) {
    if (path.cycle) flat_ = false;
    for (std::uint32_t i = 0; i < path.visits.size(); ++i) {
      const auto& pv = path.visits[i];
      if (pv.back != kNoPort) slot(pv.vertex, pv.back) = {path.id, i};
      if (pv.fwd != kNoPort) slot(pv.vertex, pv.fwd) = {path.id, i};
    }
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (const auto& c : g.classes(v)) class_locations_.push_back(locate(v, c.first));
    class_offsets_.push_back(static_cast<std::uint32_t>(class_locations_.size()));
  }
}

PathIndex::Location PathIndex::locate(VertexId v, Port p) const {
  auto b = ports_.begin() + port_offsets_[v];
  auto e = ports_.begin() + port_offsets_[v + 1];
  auto it = std::lower_bound(b, e, p);
  if (it == e || *it != p) throw GraphError("locate: port not present at vertex");
  return port_locations_[static_cast<std::size_t>(it - ports_.begin())];
}

// ---------------------------------------------------------------------------

GraphMetrics metrics(const PortGraph& g) {
  GraphMetrics m;
  auto paths = linear_paths(g);
  m.width = paths.size();
  for (const auto& p : paths) {
    m.depth = std::max(m.depth, p.visits.size());
    if (p.cycle) m.is_flat = false;
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.degree(v) % 2 == 1) ++m.n_odd;
    for (const auto& e : g.ports(v))
      if (e.open()) ++m.n_open;
  }
  return m;
}

std::vector<std::uint32_t> connected_components(const PortGraph& g, std::size_t* count) {
  std::vector<std::uint32_t> parent(g.num_vertices());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.a.vertex);
    auto b = find(e.b.vertex);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> comp(g.num_vertices());
  std::map<std::uint32_t, std::uint32_t> ids;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto r = find(v);
    auto [it, inserted] = ids.try_emplace(r, static_cast<std::uint32_t>(ids.size()));
    comp[v] = it->second;
  }
  if (count) *count = ids.size();
  return comp;
}

bool is_connected(const PortGraph& g) {
  std::size_t n = 0;
  connected_components(g, &n);
  return n <= 1;
}

namespace {

bool same_vertex_shape(const PortGraph& a, VertexId u, const PortGraph& b, VertexId v) {
  if (a.label(u) != b.label(v)) return false;
  auto pa = a.ports(u);
  auto pb = b.ports(v);
  if (pa.size() != pb.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].port != pb[i].port || pa[i].partner != pb[i].partner || pa[i].open() != pb[i].open()) return false;
  }
  return true;
}

// Extends `map` from the seed pair across a's component. Returns false on
// any inconsistency.
bool propagate(const PortGraph& a, const PortGraph& b, VertexId seed_a, VertexId seed_b, std::vector<VertexId>& map,
               std::vector<bool>& used) {
  std::vector<std::pair<VertexId, VertexId>> assigned;
  auto assign = [&](VertexId x, VertexId y) {
    if (map[x] != kNoVertex) return map[x] == y;
    if (used[y] || !same_vertex_shape(a, x, b, y)) return false;
    map[x] = y;
    used[y] = true;
    assigned.push_back({x, y});
    return true;
  };
  bool ok = assign(seed_a, seed_b);
  for (std::size_t i = 0; ok && i < assigned.size(); ++i) {
    auto [x, y] = assigned[i];
    for (const auto& e : a.ports(x)) {
      if (e.open()) continue;
      Endpoint ta = a.edge(e.edge).other({x, e.port});
      const auto* f = b.find(y, e.port);
      Endpoint tb = b.edge(f->edge).other({y, e.port});
      if (ta.port != tb.port || !assign(ta.vertex, tb.vertex)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) {
    for (auto [x, y] : assigned) {
      map[x] = kNoVertex;
      used[y] = false;
    }
  }
  return ok;
}

bool match_components(const PortGraph& a, const PortGraph& b, const std::vector<VertexId>& seeds, std::size_t k,
                      std::vector<VertexId>& map, std::vector<bool>& used) {
  if (k == seeds.size()) return true;
  for (VertexId y = 0; y < b.num_vertices(); ++y) {
    if (used[y]) continue;
    std::vector<VertexId> before = map;
    if (propagate(a, b, seeds[k], y, map, used)) {
      if (match_components(a, b, seeds, k + 1, map, used)) return true;
      for (VertexId x = 0; x < a.num_vertices(); ++x) {
        if (before[x] == kNoVertex && map[x] != kNoVertex) {
          used[map[x]] = false;
          map[x] = kNoVertex;
        }
      }
    }
  }
  return false;
}

}  // namespace

bool is_isomorphic(const PortGraph& a, const PortGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  std::size_t n = 0;
  auto comp = connected_components(a, &n);
  std::vector<VertexId> seeds(n, kNoVertex);
  for (VertexId v = 0; v < a.num_vertices(); ++v)
    if (seeds[comp[v]] == kNoVertex) seeds[comp[v]] = v;
  std::vector<VertexId> map(a.num_vertices(), kNoVertex);
  std::vector<bool> used(b.num_vertices(), false);
  return match_components(a, b, seeds, 0, map, used);
}

MaterializedSubgraph materialize(const PortGraph& g, const Subgraph& sub) {
  MaterializedSubgraph out;
  std::vector<VertexId> local(g.num_vertices(), kNoVertex);
  PortGraphBuilder b;
  for (VertexId v : sub.vertices) {
    if (v >= g.num_vertices()) throw GraphError("subgraph references a nonexistent vertex");
    if (local[v] != kNoVertex) continue;
    std::vector<Port> ports;
    for (const auto& e : g.ports(v)) ports.push_back(e.port);
    local[v] = b.add_vertex(std::move(ports), g.label(v), g.classes(v));
    out.to_parent.push_back(v);
  }
  for (EdgeId e : sub.edges) {
    const auto& ed = g.edge(e);
    if (local[ed.a.vertex] == kNoVertex || local[ed.b.vertex] == kNoVertex)
      throw GraphError("subgraph edge has an endpoint outside the vertex set");
    b.add_edge({local[ed.a.vertex], ed.a.port}, {local[ed.b.vertex], ed.b.port});
  }
  out.graph = b.build();
  return out;
}

void write_graph(ByteWriter& out, const PortGraph& g) {
  out.u32(static_cast<std::uint32_t>(g.num_vertices()));
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto& l = g.label(v);
    out.u8(l.weight ? 1 : 0);
    if (l.weight) out.str(*l.weight);
    out.i32(l.fragment);
    auto ps = g.ports(v);
    out.u32(static_cast<std::uint32_t>(ps.size()));
    for (const auto& e : ps) {
      out.u16(e.port);
      out.u16(e.partner);
    }
  }
  out.u32(static_cast<std::uint32_t>(g.num_edges()));
  for (const auto& e : g.edges()) {
    out.u32(e.a.vertex);
    out.u16(e.a.port);
    out.u32(e.b.vertex);
    out.u16(e.b.port);
  }
}

PortGraph read_graph(ByteReader& in) {
  PortGraphBuilder b;
  try {
    auto nv = in.count(9);
    for (std::uint32_t v = 0; v < nv; ++v) {
      VertexLabel l;
      if (in.u8()) l.weight = in.str();
      l.fragment = in.i32();
      auto np = in.count(4);
      std::vector<Port> ports;
      std::vector<PortClass> pairing;
      for (std::uint32_t i = 0; i < np; ++i) {
        Port p = in.u16();
        Port q = in.u16();
        ports.push_back(p);
        if (q == p)
          pairing.push_back({p, kNoPort});
        else if (p < q)
          pairing.push_back({p, q});
      }
      b.add_vertex(std::move(ports), std::move(l), std::move(pairing));
    }
    auto ne = in.count(12);
    for (std::uint32_t i = 0; i < ne; ++i) {
      Endpoint a{in.u32(), in.u16()};
      Endpoint c{in.u32(), in.u16()};
      b.add_edge(a, c);
    }
  } catch (const GraphError& e) {
    throw FormatError(FormatError::Kind::kMalformed, std::string("invalid graph payload: ") + e.what());
  }
  return b.build();
}

}  // namespace portmatch
