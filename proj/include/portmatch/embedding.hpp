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

/// Injective vertex map from a pattern into a subject graph.
struct Embedding {
  std::uint32_t pattern_id = 0;
  std::vector<VertexId> vertex_map;  // indexed by pattern vertex

  auto operator<=>(const Embedding&) const = default;
};

/// True iff `e` is a pattern embedding of `p` into `g`: injective, port
/// presence and pairing preserved pointwise, weights preserved where both
/// sides carry one, and the induced edge map well defined and injective.
/// Pattern open ports may land on subject edges.
///
/// Throws EmbeddingError when the map has the wrong size or names a vertex
/// that does not exist in `g`.
bool verify_embedding(const PortGraph& p, const PortGraph& g, const Embedding& e);

/// Convexity of a valid embedding: no two linear paths of `p` land on the
/// same linear path of `g`. Throws EmbeddingError for an invalid embedding
/// and GraphError when `g` is not flat.
bool is_convex(const PortGraph& p, const PortGraph& g, const Embedding& e);

/// Same check with precomputed path indices; `e` is assumed valid.
bool is_convex(const PathIndex& p_paths, const PathIndex& g_paths, const PortGraph& p, const Embedding& e);

}  // namespace portmatch
