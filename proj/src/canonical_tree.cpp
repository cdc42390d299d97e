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

#include "portmatch/canonical_tree.hpp"

#include <algorithm>
#include <deque>

#include "portmatch/error.hpp"
#include "traversal.hpp"

namespace portmatch {

namespace {

void require_flat_connected(const PortGraph& g, const PathIndex& idx) {
  if (!idx.flat()) throw GraphError("graph is not flat");
  if (!is_connected(g)) throw GraphError("graph is not connected");
}

// Addresses of every vertex of a tree from `root`; children are explored in
// port order so addresses are canonical.
std::vector<std::vector<Port>> tree_addresses(const PortGraph& t, VertexId root) {
  std::vector<std::vector<Port>> addr(t.num_vertices());
  std::vector<bool> seen(t.num_vertices(), false);
  std::deque<VertexId> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (const auto& e : t.ports(v)) {
      if (e.open()) continue;
      Endpoint there = t.edge(e.edge).other({v, e.port});
      if (seen[there.vertex]) continue;
      seen[there.vertex] = true;
      addr[there.vertex] = addr[v];
      addr[there.vertex].push_back(e.port);
      addr[there.vertex].push_back(there.port);
      queue.push_back(there.vertex);
    }
  }
  return addr;
}

bool address_less(const std::vector<Port>& a, const std::vector<Port>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

AnchorSet canonical_anchors(const PortGraph& g, Root root) {
  PathIndex idx(g);
  require_flat_connected(g, idx);
  if (root.vertex >= g.num_vertices()) throw GraphError("root references a nonexistent vertex");
  detail::Engine engine(g, idx);
  AnchorSet out{root, {}};
  if (!root.is_slot()) out.anchors.push_back(root.vertex);
  for (const auto& o : engine.canonical(root)) {
    if (o.anchor == kNoVertex) continue;
    if (std::find(out.anchors.begin(), out.anchors.end(), o.anchor) == out.anchors.end())
      out.anchors.push_back(o.anchor);
  }
  return out;
}

std::vector<VertexId> canonical_anchors(const PortGraph& g, VertexId root) {
  return canonical_anchors(g, Root::at_vertex(root)).anchors;
}

std::vector<VertexId> SplitGraph::split_of(VertexId original) const {
  std::vector<VertexId> out;
  for (VertexId s = 0; s < origin.size(); ++s)
    if (origin[s] == original) out.push_back(s);
  return out;
}

SplitGraph split_graph(const PortGraph& g, std::span<const VertexId> x) {
  std::vector<bool> anchor(g.num_vertices(), false);
  for (VertexId v : x) {
    if (v >= g.num_vertices()) throw GraphError("anchor set references a nonexistent vertex");
    anchor[v] = true;
  }
  SplitGraph out;
  out.anchors.assign(x.begin(), x.end());
  PortGraphBuilder b;
  std::vector<std::vector<VertexId>> home(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto ps = g.ports(v);
    home[v].assign(ps.size(), kNoVertex);
    auto cls = g.classes(v);
    if (anchor[v] || cls.size() <= 1) {
      std::vector<Port> ports;
      for (const auto& e : ps) ports.push_back(e.port);
      VertexId s = b.add_vertex(std::move(ports), g.label(v), cls);
      out.origin.push_back(v);
      for (auto& h : home[v]) h = s;
      continue;
    }
    for (const auto& c : cls) {
      std::vector<Port> ports{c.first};
      if (!c.singleton()) ports.push_back(c.second);
      VertexId s = b.add_vertex(ports, g.label(v), {c});
      out.origin.push_back(v);
      for (Port p : ports) home[v][static_cast<std::size_t>(g.find(v, p) - ps.data())] = s;
    }
  }
  for (const auto& e : g.edges()) {
    auto at = [&](Endpoint ep) {
      auto ps = g.ports(ep.vertex);
      return Endpoint{home[ep.vertex][static_cast<std::size_t>(g.find(ep.vertex, ep.port) - ps.data())], ep.port};
    };
    b.add_edge(at(e.a), at(e.b));
  }
  out.graph = b.build();
  return out;
}

std::vector<Port> CanonicalTree::address(VertexId s) const { return tree_addresses(split.graph, root)[s]; }

VertexId CanonicalTree::resolve(std::span<const Port> address) const {
  if (address.size() % 2 != 0) throw InvariantError("address has odd length");
  VertexId cur = root;
  for (std::size_t i = 0; i < address.size(); i += 2) {
    const auto* e = split.graph.find(cur, address[i]);
    if (!e || e->open()) throw InvariantError("address leaves the tree");
    Endpoint there = split.graph.edge(e->edge).other({cur, address[i]});
    if (there.port != address[i + 1]) throw InvariantError("address enters through the wrong port");
    cur = there.vertex;
  }
  return cur;
}

CanonicalTree ct_representation(const PortGraph& g, VertexId root) {
  auto anchors = canonical_anchors(g, root);
  CanonicalTree ct;
  ct.split = split_graph(g, anchors);
  const auto& t = ct.split.graph;
  if (!is_connected(t) || t.num_edges() + 1 != t.num_vertices())
    throw GraphError("canonical split graph is not a tree; normalize vertices on three or more paths first");
  ct.root = ct.split.split_of(root).front();

  auto addr = tree_addresses(t, ct.root);
  std::vector<VertexId> rep(g.num_vertices(), kNoVertex);
  for (VertexId s = 0; s < t.num_vertices(); ++s) {
    VertexId v = ct.split.origin[s];
    if (rep[v] == kNoVertex || address_less(addr[s], addr[rep[v]])) rep[v] = s;
  }
  ct.merge_label.resize(t.num_vertices());
  for (VertexId s = 0; s < t.num_vertices(); ++s) {
    VertexId r = rep[ct.split.origin[s]];
    if (r != s) ct.merge_label[s] = addr[r];
  }

  PathIndex idx(g);
  detail::Engine engine(g, idx);
  for (const auto& o : engine.canonical(Root::at_vertex(root)))
    ct.path_table.push_back({ct.split.split_of(o.anchor).front(), o.path});
  return ct;
}

PortGraph reconstruct(const CanonicalTree& ct) {
  const auto& t = ct.split.graph;
  std::vector<VertexId> rep(t.num_vertices());
  for (VertexId s = 0; s < t.num_vertices(); ++s) {
    rep[s] = ct.merge_label[s] ? ct.resolve(*ct.merge_label[s]) : s;
    if (ct.merge_label[s] && ct.merge_label[rep[s]]) throw GraphError("merge label points at a non-representative");
  }
  std::vector<VertexId> group(t.num_vertices(), kNoVertex);
  std::vector<VertexId> reps;
  for (VertexId s = 0; s < t.num_vertices(); ++s) {
    if (group[rep[s]] == kNoVertex) {
      group[rep[s]] = static_cast<VertexId>(reps.size());
      reps.push_back(rep[s]);
    }
    group[s] = group[rep[s]];
  }

  PortGraphBuilder b;
  for (VertexId r : reps) {
    std::vector<Port> ports;
    std::vector<PortClass> pairing;
    for (VertexId s = 0; s < t.num_vertices(); ++s) {
      if (rep[s] != r) continue;
      if (t.label(s) != t.label(r)) throw GraphError("merged split vertices carry different labels");
      for (const auto& e : t.ports(s)) ports.push_back(e.port);
      auto cls = t.classes(s);
      pairing.insert(pairing.end(), cls.begin(), cls.end());
    }
    std::vector<Port> sorted = ports;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw GraphError("merged split vertices claim the same port");
    b.add_vertex(std::move(ports), t.label(r), std::move(pairing));
  }
  for (const auto& e : t.edges()) b.add_edge({group[e.a.vertex], e.a.port}, {group[e.b.vertex], e.b.port});
  return b.build();
}

// ---------------------------------------------------------------------------

std::size_t StringTuple::max_length() const noexcept {
  std::size_t m = 0;
  for (const auto& s : strings) m = std::max(m, s.size());
  return m;
}

void StringTuple::write(ByteWriter& out) const {
  out.u32(static_cast<std::uint32_t>(strings.size()));
  for (const auto& s : strings) {
    out.u32(static_cast<std::uint32_t>(s.size()));
    for (const auto& c : s) {
      out.u32(c.entry);
      out.u64(c.sig);
    }
  }
}

StringTuple StringTuple::read(ByteReader& in) {
  StringTuple t;
  t.strings.resize(in.count(4));
  for (auto& s : t.strings) {
    s.resize(in.count(12));
    for (auto& c : s) {
      c.entry = in.u32();
      c.sig = in.u64();
    }
  }
  return t;
}

StringTuple as_strings(const PortGraph& g, const AnchorSet& anchors, std::size_t limit) {
  PathIndex idx(g);
  if (!idx.flat()) throw GraphError("graph is not flat");
  auto split = split_graph(g, anchors.anchors);
  if (!is_connected(split.graph)) throw GraphError("not an anchor set: the split graph is disconnected");
  detail::Engine engine(g, idx);
  std::uint32_t cap = limit == 0 ? detail::kUnlimited : static_cast<std::uint32_t>(limit - 1);
  auto ops = engine.replay(anchors, cap);
  if (ops.size() != idx.width()) throw GraphError("not an anchor set: some linear path is never opened");
  StringTuple out;
  engine.strings(ops, out, nullptr);
  return out;
}

StringTuple as_strings(const PortGraph& g, std::span<const VertexId> x, std::size_t limit) {
  if (x.empty()) throw GraphError("anchor list is empty");
  return as_strings(g, AnchorSet{Root::at_vertex(x[0]), {x.begin(), x.end()}}, limit);
}

}  // namespace portmatch
