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

// Split graphs, canonical anchors and the canonical tree (CT)
// representation, plus the string-tuple encoding the prefix trees consume.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "portmatch/bytes.hpp"
#include "portmatch/port_graph.hpp"

namespace portmatch {

/// Where a traversal starts. Either a real vertex, or a virtual two-port
/// vertex spliced into the slot (vertex, slot): in the middle of the edge at
/// that port, or past its open end. A virtual root always lies on exactly
/// one linear path and never becomes part of the graph.
struct Root {
  VertexId vertex = 0;
  Port slot = kNoPort;

  static Root at_vertex(VertexId v) { return {v, kNoPort}; }
  static Root at_slot(VertexId v, Port p) { return {v, p}; }
  bool is_slot() const noexcept { return slot != kNoPort; }
  auto operator<=>(const Root&) const = default;
};

/// Anchors in discovery order. For a vertex root the root is anchors[0]; a
/// virtual root is not listed.
struct AnchorSet {
  Root root;
  std::vector<VertexId> anchors;

  bool operator==(const AnchorSet&) const = default;
};

/// CANONICALANCHORS. Requires g flat and connected and the root present;
/// throws GraphError otherwise.
AnchorSet canonical_anchors(const PortGraph& g, Root root);
/// Vertex-root convenience form returning the plain anchor list.
std::vector<VertexId> canonical_anchors(const PortGraph& g, VertexId root);

/// The X-split graph. Anchors keep all their ports; every other vertex
/// becomes one split vertex per pairing class. Split vertices are ordered by
/// (origin, class order) and edges keep their original handles.
struct SplitGraph {
  PortGraph graph;
  std::vector<VertexId> origin;   // split vertex -> original vertex
  std::vector<VertexId> anchors;  // the set X, as given

  std::vector<VertexId> split_of(VertexId original) const;
};

SplitGraph split_graph(const PortGraph& g, std::span<const VertexId> x);

/// CT representation: the split graph over the canonical anchors, which
/// must be a tree. merge_label[s] is empty when s represents its original
/// vertex itself, and otherwise holds the address of the representative:
/// the port sequence (exit, entry, exit, entry, ...) of the tree path from
/// the root. The representative of a group is the member with the shortest
/// address, ties broken lexicographically.
struct CanonicalTree {
  SplitGraph split;
  VertexId root = 0;  // split vertex of the root
  std::vector<std::optional<std::vector<Port>>> merge_label;
  struct PathEntry {
    VertexId anchor;      // split vertex owning the path
    std::uint32_t path;   // linear path id in the original graph
    bool operator==(const PathEntry&) const = default;
  };
  std::vector<PathEntry> path_table;

  /// Address of split vertex s from the root.
  std::vector<Port> address(VertexId s) const;
  /// Split vertex at an address; throws InvariantError when out of range.
  VertexId resolve(std::span<const Port> address) const;
};

/// Throws GraphError when the canonical split graph is not a tree, which
/// happens for roots revisited by their own path and for vertices on three
/// or more linear paths (normalize first).
CanonicalTree ct_representation(const PortGraph& g, VertexId root);

/// Inverts ct_representation up to isomorphism. Throws GraphError when two
/// merged split vertices claim the same port or carry different labels.
PortGraph reconstruct(const CanonicalTree& ct);

/// One string character: the port through which a walk enters a vertex and
/// a hash of the vertex's signature. Anchor characters use kAnchorEntry.
struct Symbol {
  std::uint32_t entry = 0;
  std::uint64_t sig = 0;
  auto operator<=>(const Symbol&) const = default;
};

inline constexpr std::uint32_t kAnchorEntry = 0xFFFFFFFFu;
/// Signature used for the character of a virtual root.
inline constexpr std::uint64_t kVirtualRootSig = 0x5652'4f4f'5400'0001ULL;

/// 2w strings, two per linear path: paths in anchor discovery order, halves
/// ordered by the anchor-side port (a missing side last). Each string starts
/// with the anchor's character.
struct StringTuple {
  std::vector<std::vector<Symbol>> strings;

  std::size_t arity() const noexcept { return strings.size(); }
  std::size_t width() const noexcept { return strings.size() / 2; }
  std::size_t max_length() const noexcept;
  bool operator==(const StringTuple&) const = default;

  void write(ByteWriter& out) const;
  static StringTuple read(ByteReader& in);
};

/// ASSTRINGS. `limit` caps each string's length (anchor character included);
/// 0 means unlimited. Throws GraphError when `anchors` is not an anchor set
/// for `root` (an anchor opening no new path, or a disconnected split
/// graph).
StringTuple as_strings(const PortGraph& g, const AnchorSet& anchors, std::size_t limit = 0);
/// Vertex-root form: x[0] is the root.
StringTuple as_strings(const PortGraph& g, std::span<const VertexId> x, std::size_t limit = 0);

}  // namespace portmatch
