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

#include "traversal.hpp"

#include "portmatch/anchors.hpp"
#include "portmatch/error.hpp"

namespace portmatch::detail {

Engine::Engine(const PortGraph& g, const PathIndex& idx) : g_(g), idx_(idx) {
  sig_.reserve(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    sig_.push_back(g.signature(v));
    for (const auto& e : g.ports(v)) {
      if (e.partner == e.port)
        classes_.push_back({e.port, kNoPort});
      else if (e.port < e.partner)
        classes_.push_back({e.port, e.partner});
    }
    class_offsets_.push_back(static_cast<std::uint32_t>(classes_.size()));
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    first_.push_back(static_cast<std::uint32_t>(owner_.size()));
    for (const auto& e : g.ports(v)) {
      owner_.push_back(v);
      port_.push_back(e.port);
    }
  }
  first_.push_back(static_cast<std::uint32_t>(owner_.size()));
  step_.assign(owner_.size(), kNoStep);
  for (std::uint32_t i = 0; i < owner_.size(); ++i) {
    const auto* e = g.find(owner_[i], port_[i]);
    if (e->partner == e->port) continue;
    const auto* x = g.find(owner_[i], e->partner);
    if (x->open()) continue;
    Endpoint next = g.edge(x->edge).other({owner_[i], x->port});
    step_[i] = flat(next.vertex, next.port);
  }
}

std::uint32_t Engine::flat(VertexId v, Port p) const {
  auto ps = g_.ports(v);
  return first_[v] + static_cast<std::uint32_t>(g_.find(v, p) - ps.data());
}

void Engine::advance(Cursor& c) const {
  std::uint32_t n = step_[c.at];
  if (c.remaining <= 1 || n == kNoStep) {
    c.remaining = 0;
    return;
  }
  c.at = n;
  c.vertex = owner_[n];
  c.entry = port_[n];
  if (c.remaining != kUnlimited) --c.remaining;
}

Cursor Engine::enter(VertexId v, Port p, std::uint32_t cap) const {
  if (cap == 0) return {};
  return {v, p, cap, flat(v, p)};
}

Cursor Engine::leave(VertexId v, Port q, std::uint32_t cap) const {
  if (cap == 0 || q == kNoPort) return {};
  const auto* e = g_.find(v, q);
  if (e->open()) return {};
  Endpoint next = g_.edge(e->edge).other({v, q});
  return {next.vertex, next.port, cap, flat(next.vertex, next.port)};
}

Opening Engine::root_opening(Root r, std::uint32_t cap) const {
  if (r.vertex >= g_.num_vertices()) throw GraphError("root references a nonexistent vertex");
  Opening o;
  if (r.is_slot()) {
    if (!g_.has_port(r.vertex, r.slot)) throw GraphError("root slot names an absent port");
    o.anchor = kNoVertex;
    o.path = idx_.locate(r.vertex, r.slot).path;
    o.half[0] = enter(r.vertex, r.slot, cap);
    o.half[1] = leave(r.vertex, r.slot, cap);
    return o;
  }
  auto cls = classes(r.vertex);
  if (cls.size() != 1) throw GraphError("root vertex must lie on exactly one linear path through one pairing class");
  o.anchor = r.vertex;
  o.path = idx_.classes_of(r.vertex)[0].path;
  o.half[0] = leave(r.vertex, cls[0].first, cap);
  o.half[1] = leave(r.vertex, cls[0].second, cap);
  return o;
}

void Engine::open_at(VertexId v, std::vector<char>& seen, std::uint32_t cap, std::vector<Opening>& out) const {
  auto cls = classes(v);
  auto locs = idx_.classes_of(v);
  for (std::size_t k = 0; k < cls.size(); ++k) {
    std::uint32_t p = locs[k].path;
    if (seen[p]) continue;
    seen[p] = 1;
    Opening o;
    o.anchor = v;
    o.path = p;
    o.half[0] = leave(v, cls[k].first, cap);
    o.half[1] = leave(v, cls[k].second, cap);
    out.push_back(o);
  }
}

void Engine::consume(Cursor q, std::vector<char>& seen, std::vector<Opening>& out) const {
  while (!q.empty()) {
    VertexId v = q.vertex;
    advance(q);
    std::size_t before = out.size();
    open_at(v, seen, kUnlimited, out);
    if (out.size() == before) continue;
    // Copy the new halves first: recursion appends to `out`.
    std::vector<Cursor> queues{q};
    for (std::size_t i = before; i < out.size(); ++i) {
      queues.push_back(out[i].half[0]);
      queues.push_back(out[i].half[1]);
    }
    for (const auto& next : queues) consume(next, seen, out);
    return;
  }
}

std::vector<Opening> Engine::canonical(Root r) const {
  if (r.vertex >= g_.num_vertices()) throw GraphError("root references a nonexistent vertex");
  std::vector<char> seen(idx_.width(), 0);
  std::vector<Opening> out;
  if (r.is_slot()) {
    Opening o = root_opening(r, kUnlimited);
    seen[o.path] = 1;
    out.push_back(o);
    consume(o.half[0], seen, out);
    consume(o.half[1], seen, out);
    return out;
  }
  open_at(r.vertex, seen, kUnlimited, out);
  std::vector<Cursor> queues;
  for (const auto& o : out) {
    queues.push_back(o.half[0]);
    queues.push_back(o.half[1]);
  }
  for (const auto& q : queues) consume(q, seen, out);
  return out;
}

std::vector<Opening> Engine::replay(const AnchorSet& a, std::uint32_t cap) const {
  std::vector<char> seen(idx_.width(), 0);
  std::vector<Opening> out;
  if (a.root.is_slot()) {
    Opening o = root_opening(a.root, cap);
    seen[o.path] = 1;
    out.push_back(o);
  } else if (a.anchors.empty() || a.anchors.front() != a.root.vertex) {
    throw GraphError("a vertex root must be the first anchor");
  }
  for (VertexId v : a.anchors) {
    if (v >= g_.num_vertices()) throw GraphError("anchor references a nonexistent vertex");
    std::size_t before = out.size();
    open_at(v, seen, cap, out);
    if (out.size() == before && !classes(v).empty()) throw GraphError("anchor opens no new linear path");
  }
  return out;
}

void Engine::all_consume(std::size_t w, Cursor q, const SeenSet& seen, std::uint32_t cap,
                         std::vector<Opening>& stack, Sink emit) const {
  if (w == 0) {
    emit(seen);
    return;
  }

  VertexId v = kNoVertex;
  std::size_t k_new = 0;
  std::uint32_t p_new = 0;
  std::size_t n_unseen = 0;
  while (n_unseen == 0) {
    if (q.empty()) return;
    v = q.vertex;
    advance(q);
    auto locs = idx_.classes_of(v);
    for (std::size_t k = 0; k < locs.size(); ++k) {
      std::uint32_t p = locs[k].path;
      if (seen.contains(p)) continue;
      if (n_unseen == 0) {
        k_new = k;
        p_new = p;
        n_unseen = 1;
      } else if (p != p_new) {
        ++n_unseen;
      }
    }
  }
  if (n_unseen != 1) throw InvariantError("anchor candidate lies on more than one unseen linear path; normalize first");

  auto cls = classes(v)[k_new];
  Opening o;
  o.anchor = v;
  o.path = p_new;
  o.half[0] = leave(v, cls.first, cap);
  o.half[1] = leave(v, cls.second, cap);
  SeenSet seen0 = seen;
  seen0.add(p_new);

  // Openings come out as o, then the first, second and third sub-results,
  // ordered by (w1, w2) and then by each sub-enumeration.
  stack.push_back(o);
  for (std::size_t w1 = 0; w1 < w; ++w1) {
    for (std::size_t w2 = 0; w1 + w2 < w; ++w2) {
      std::size_t w3 = w - 1 - w1 - w2;
      auto after2 = [&](const SeenSet& s2) { all_consume(w3, o.half[1], s2, cap, stack, emit); };
      auto after1 = [&](const SeenSet& s1) { all_consume(w2, o.half[0], s1, cap, stack, sink(after2)); };
      all_consume(w1, q, seen0, cap, stack, sink(after1));
    }
  }
  stack.pop_back();
}

std::vector<Partial> Engine::all(Root r, std::size_t w, std::uint32_t cap, std::size_t* raw_count) const {
  if (w == 0) throw GraphError("all_anchors requires w >= 1");
  if (w > kMaxWidth) throw GraphError("all_anchors supports widths up to 16");
  Opening o = root_opening(r, cap);
  SeenSet seen;
  seen.add(o.path);

  std::vector<Opening> stack{o};
  std::vector<Partial> raw;
  auto done = [&](const SeenSet& s) {
    // the recursion tree is a ternary tree on w - 1 internal nodes
    if (raw.size() == anchor_bound(w)) throw InvariantError("anchor enumeration exceeded its candidate bound");
    raw.push_back({stack, s});
  };
  for (std::size_t w2 = 0; w2 < w; ++w2) {
    std::size_t w3 = w - 1 - w2;
    auto after2 = [&](const SeenSet& s2) { all_consume(w3, o.half[1], s2, cap, stack, sink(done)); };
    all_consume(w2, o.half[0], seen, cap, stack, sink(after2));
  }
  if (raw_count) *raw_count = raw.size();

  std::vector<Partial> out;
  for (auto& p : raw) {
    bool dup = false;
    for (const auto& q : out) {
      dup = std::equal(p.openings.begin(), p.openings.end(), q.openings.begin(), q.openings.end(),
                       [](const Opening& a, const Opening& b) { return a.same_key(b); });
      if (dup) break;
    }
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

void Engine::strings(std::span<const Opening> ops, StringTuple& out, std::vector<std::vector<VertexId>>* vertices) const {
  out.strings.resize(2 * ops.size());
  if (vertices) vertices->resize(2 * ops.size());
  std::size_t i = 0;
  for (const auto& o : ops) {
    Symbol head{kAnchorEntry, o.anchor == kNoVertex ? kVirtualRootSig : sig_[o.anchor]};
    for (int h = 0; h < 2; ++h, ++i) {
      auto& s = out.strings[i];
      s.clear();
      s.push_back(head);
      std::vector<VertexId>* vs = vertices ? &(*vertices)[i] : nullptr;
      if (vs) {
        vs->clear();
        vs->push_back(o.anchor);
      }
      for (Cursor c = o.half[h]; !c.empty(); advance(c)) {
        s.push_back({c.entry, sig_[c.vertex]});
        if (vs) vs->push_back(c.vertex);
      }
    }
  }
}

}  // namespace portmatch::detail
