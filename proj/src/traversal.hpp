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

#pragma once

// Walk primitives behind CANONICALANCHORS, ALLANCHORS and ASSTRINGS. A queue
// of the listings is a Cursor: a position on a linear path plus a direction
// implied by the entry port, with a budget of remaining visits.

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "portmatch/canonical_tree.hpp"
#include "portmatch/port_graph.hpp"

namespace portmatch::detail {

inline constexpr std::size_t kMaxWidth = 16;
inline constexpr std::uint32_t kUnlimited = std::numeric_limits<std::uint32_t>::max();
inline constexpr std::uint32_t kNoStep = std::numeric_limits<std::uint32_t>::max();

struct Cursor {
  VertexId vertex = kNoVertex;
  Port entry = kNoPort;
  std::uint32_t remaining = 0;
  std::uint32_t at = 0;  // flat index of (vertex, entry) in the graph's port table

  bool empty() const noexcept { return remaining == 0; }
  bool operator==(const Cursor&) const = default;
};

/// A linear path opened at an anchor (or at the virtual root, anchor ==
/// kNoVertex), with its two halves.
struct Opening {
  VertexId anchor = kNoVertex;
  std::uint32_t path = 0;
  Cursor half[2];

  bool same_key(const Opening& o) const { return anchor == o.anchor && path == o.path; }
};

/// Seen linear paths; at most kMaxWidth of them.
class SeenSet {
 public:
  bool contains(std::uint32_t p) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (ids_[i] == p) return true;
    return false;
  }
  void add(std::uint32_t p) { ids_[n_++] = p; }
  std::size_t size() const noexcept { return n_; }
  std::uint32_t operator[](std::size_t i) const { return ids_[i]; }

 private:
  std::array<std::uint32_t, kMaxWidth + 1> ids_{};
  std::size_t n_ = 0;
};

struct Partial {
  std::vector<Opening> openings;
  SeenSet seen;
};

class Engine {
 public:
  /// `g` must be flat; walks do not guard against cycles.
  Engine(const PortGraph& g, const PathIndex& idx);

  const PortGraph& graph() const noexcept { return g_; }
  const PathIndex& index() const noexcept { return idx_; }
  std::uint64_t sig(VertexId v) const { return sig_[v]; }

  std::span<const PortClass> classes(VertexId v) const {
    return {classes_.data() + class_offsets_[v], classes_.data() + class_offsets_[v + 1]};
  }

  /// Pops the current visit.
  void advance(Cursor& c) const;
  /// Half that starts at v, entered through p.
  Cursor enter(VertexId v, Port p, std::uint32_t cap) const;
  /// Half that leaves v through q (empty for kNoPort or an open port).
  Cursor leave(VertexId v, Port q, std::uint32_t cap) const;

  /// Opening of the path through the root. A vertex root must carry exactly
  /// one pairing class.
  Opening root_opening(Root r, std::uint32_t cap) const;

  /// Canonical anchors, allowing an anchor to open several unseen paths.
  std::vector<Opening> canonical(Root r) const;

  /// Replays an anchor list: each anchor opens its paths not yet seen.
  /// Throws GraphError when an anchor opens nothing.
  std::vector<Opening> replay(const AnchorSet& a, std::uint32_t cap) const;

  /// Every anchor set of width w with halves capped at `cap` visits. Results are
  /// deduplicated by their (anchor, path) sequence, first occurrence kept.
  /// `raw_count`, when given, receives the length before deduplication.
  std::vector<Partial> all(Root r, std::size_t w, std::uint32_t cap, std::size_t* raw_count = nullptr) const;

  /// 2w strings for a list of openings; `vertices`, when given, receives the
  /// visited vertex of each character (kNoVertex for a virtual root).
  void strings(std::span<const Opening> ops, StringTuple& out, std::vector<std::vector<VertexId>>* vertices) const;

 private:
  void consume(Cursor q, std::vector<char>& seen, std::vector<Opening>& out) const;
  void open_at(VertexId v, std::vector<char>& seen, std::uint32_t cap, std::vector<Opening>& out) const;
  // Non-owning callable, cheap to pass down the recursion.
  struct Sink {
    void* ctx;
    void (*fn)(void*, const SeenSet&);
    void operator()(const SeenSet& s) const { fn(ctx, s); }
  };
  template <class F>
  static Sink sink(F& f) {
    return {&f, [](void* c, const SeenSet& s) { (*static_cast<F*>(c))(s); }};
  }
  // Pushes the openings of each completion onto `stack`, calls `emit` with
  // the paths seen so far, then pops them again.
  void all_consume(std::size_t w, Cursor q, const SeenSet& seen, std::uint32_t cap, std::vector<Opening>& stack,
                   Sink emit) const;

  const PortGraph& g_;
  const PathIndex& idx_;
  std::vector<std::uint64_t> sig_;
  std::vector<std::uint32_t> class_offsets_{0};
  std::vector<PortClass> classes_;
  // per flat port index: the flat index entered next, owner vertex, port
  std::vector<std::uint32_t> step_;
  std::vector<VertexId> owner_;
  std::vector<Port> port_;
  std::vector<std::uint32_t> first_;

  std::uint32_t flat(VertexId v, Port p) const;
};

}  // namespace portmatch::detail
