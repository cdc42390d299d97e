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

#include <cstdint>
#include <vector>

#include "portmatch/port_graph.hpp"

namespace portmatch {

/// Result of normalize_two_paths. Fragments of one original vertex are
/// numbered consecutively, in place of that vertex.
struct NormalizedGraph {
  PortGraph graph;
  std::vector<VertexId> back_map;                 // new vertex -> original vertex
  std::vector<std::vector<VertexId>> fragments;   // original vertex -> its new vertices
  bool changed = false;
};

/// Splits every vertex on k > 2 pairing classes into k - 1 fragments, each
/// on two classes, chained by edges on the reserved kSpineOut -> kSpineIn
/// ports. The chain carries the vertex's first class; fragment j also
/// carries class j + 2 (fragment 0 carries classes 1 and 2). Fragments keep
/// the original weight and record their index in VertexLabel::fragment.
///
/// Width is unchanged. Throws GraphError for a non-flat graph or a vertex
/// that already uses a reserved port.
NormalizedGraph normalize_two_paths(const PortGraph& g);

}  // namespace portmatch
