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

// Port graphs: undirected graphs whose edge endpoints carry per-vertex-unique
// port labels. Ports that exist on a vertex but carry no edge are open.
// Every vertex partitions its ports into pairs (plus at most one singleton);
// linear paths follow edges through paired ports.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "portmatch/bytes.hpp"

namespace portmatch {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Port = std::uint16_t;

/// Largest port label available to callers; labels above it are reserved.
inline constexpr Port kMaxUserPort = 0xFEFF;
/// Reserved labels for the internal edges created by normalize_two_paths.
inline constexpr Port kSpineIn = 0xFF00;
inline constexpr Port kSpineOut = 0xFF01;
/// "No port": partner of a singleton, or the missing side of a path end.
inline constexpr Port kNoPort = 0xFFFF;

inline constexpr EdgeId kOpenPort = 0xFFFFFFFFu;
inline constexpr VertexId kNoVertex = 0xFFFFFFFFu;

struct Endpoint {
  VertexId vertex = 0;
  Port port = 0;

  auto operator<=>(const Endpoint&) const = default;
};

struct Edge {
  Endpoint a;
  Endpoint b;

  Endpoint other(Endpoint e) const { return e == a ? b : a; }
  bool operator==(const Edge&) const = default;
};

/// Vertex label. `fragment` is set only on vertices produced by splitting a
/// vertex in normalize_two_paths.
struct VertexLabel {
  std::optional<std::string> weight;
  std::int32_t fragment = -1;

  bool operator==(const VertexLabel&) const = default;
};

/// One present port of a vertex.
struct PortEntry {
  Port port = 0;
  Port partner = kNoPort;     // == port for a singleton class
  EdgeId edge = kOpenPort;    // kOpenPort when the port is open

  bool open() const noexcept { return edge == kOpenPort; }
  bool operator==(const PortEntry&) const = default;
};

/// A pairing class. `second == kNoPort` marks a singleton.
struct PortClass {
  Port first = 0;
  Port second = kNoPort;

  bool singleton() const noexcept { return second == kNoPort; }
  auto operator<=>(const PortClass&) const = default;
};

/// Immutable port graph. Vertex and edge handles are dense and assigned in
/// insertion order by PortGraphBuilder.
class PortGraph {
 public:
  PortGraph() = default;

  std::size_t num_vertices() const noexcept { return labels_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  /// Present ports of `v`, sorted by label.
  std::span<const PortEntry> ports(VertexId v) const {
    return {entries_.data() + offsets_[v], entries_.data() + offsets_[v + 1]};
  }
  /// nullptr when `p` is absent at `v`.
  const PortEntry* find(VertexId v, Port p) const;
  bool has_port(VertexId v, Port p) const { return find(v, p) != nullptr; }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  const VertexLabel& label(VertexId v) const { return labels_[v]; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Pairing classes of `v`, ordered by their smallest port.
  std::vector<PortClass> classes(VertexId v) const;

  /// Hash of everything an embedding must preserve at a vertex: present
  /// ports, their pairing and the label.
  std::uint64_t signature(VertexId v) const;

  bool operator==(const PortGraph&) const = default;

 private:
  friend class PortGraphBuilder;

  std::vector<std::uint32_t> offsets_{0};
  std::vector<PortEntry> entries_;
  std::vector<VertexLabel> labels_;
  std::vector<Edge> edges_;
};

/// Incremental constructor for PortGraph; all validation errors are
/// GraphError.
class PortGraphBuilder {
 public:
  /// Adds a vertex with the default pairing: consecutive ports in ascending
  /// label order, the largest left as a singleton when the count is odd.
  VertexId add_vertex(std::vector<Port> ports, VertexLabel label = {});
  /// Adds a vertex with an explicit pairing; singletons are written
  /// {p, kNoPort}. The classes must partition `ports`.
  VertexId add_vertex(std::vector<Port> ports, VertexLabel label, std::vector<PortClass> pairing);

  EdgeId add_edge(Endpoint a, Endpoint b);

  std::size_t num_vertices() const noexcept { return vertices_.size(); }

  PortGraph build() const;

 private:
  struct Pending {
    std::vector<PortEntry> entries;
    VertexLabel label;
  };
  PortEntry& slot(Endpoint e);

  std::vector<Pending> vertices_;
  std::vector<Edge> edges_;
};

struct PathVisit {
  VertexId vertex = 0;
  Port back = kNoPort;  // port facing the previous visit (or the path's start end)
  Port fwd = kNoPort;   // port facing the next visit (or the path's far end)

  bool operator==(const PathVisit&) const = default;
};

/// A maximal sequence of vertex visits joined by edges that enter and leave
/// each vertex through paired ports. edges[i] joins visits[i] and
/// visits[i + 1]; a cycle carries one more edge closing back to visits[0].
struct LinearPath {
  std::uint32_t id = 0;
  std::vector<PathVisit> visits;
  std::vector<EdgeId> edges;
  bool cycle = false;

  bool operator==(const LinearPath&) const = default;
};

/// Linear path decomposition. Every pairing class lies on exactly one path,
/// so every edge does too. Paths are oriented so the smaller
/// (vertex, class-min-port) end comes first and sorted by their smallest
/// (vertex, port) pair.
std::vector<LinearPath> linear_paths(const PortGraph& g);

/// Linear path decomposition plus O(log deg) lookup from a (vertex, port) to
/// the path and position of its pairing class.
class PathIndex {
 public:
  struct Location {
    std::uint32_t path = 0;
    std::uint32_t position = 0;
    bool operator==(const Location&) const = default;
  };

  PathIndex() = default;
  explicit PathIndex(const PortGraph& g);

  std::span<const LinearPath> paths() const noexcept { return paths_; }
  const LinearPath& path(std::uint32_t id) const { return paths_[id]; }
  std::size_t width() const noexcept { return paths_.size(); }
  bool flat() const noexcept { return flat_; }

  /// Location of the class containing port `p` of `v`; `p` must be present.
  Location locate(VertexId v, Port p) const;
  /// One location per pairing class of `v`, ordered by class-min port.
  std::span<const Location> classes_of(VertexId v) const {
    return {class_locations_.data() + class_offsets_[v], class_locations_.data() + class_offsets_[v + 1]};
  }

 private:
  std::vector<LinearPath> paths_;
  std::vector<std::uint32_t> port_offsets_{0};
  std::vector<Port> ports_;
  std::vector<Location> port_locations_;
  std::vector<std::uint32_t> class_offsets_{0};
  std::vector<Location> class_locations_;
  bool flat_ = true;
};

struct GraphMetrics {
  std::size_t width = 0;
  std::size_t depth = 0;  // vertex visits on the longest linear path
  bool is_flat = true;
  std::size_t n_odd = 0;
  std::size_t n_open = 0;

  bool operator==(const GraphMetrics&) const = default;
};

GraphMetrics metrics(const PortGraph& g);

/// Connected components over edges; returns a component id per vertex.
std::vector<std::uint32_t> connected_components(const PortGraph& g, std::size_t* count = nullptr);
bool is_connected(const PortGraph& g);

/// Port-graph isomorphism: a bijection on vertices preserving labels,
/// pairings, open ports and edges at identical port labels.
bool is_isomorphic(const PortGraph& a, const PortGraph& b);

/// A subset of a graph's vertices and edges. Edge endpoints must be listed
/// vertices.
struct Subgraph {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
};

struct MaterializedSubgraph {
  PortGraph graph;
  std::vector<VertexId> to_parent;  // subgraph vertex -> parent vertex
};

/// Builds a standalone graph from `sub`. Vertices keep all their ports and
/// pairing; ports whose edge is not in `sub` become open.
MaterializedSubgraph materialize(const PortGraph& g, const Subgraph& sub);

void write_graph(ByteWriter& out, const PortGraph& g);
PortGraph read_graph(ByteReader& in);

}  // namespace portmatch
