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

// Exhaustive anchor enumeration (ALLANCHORS), the maximal subgraph for a
// fixed anchor list and subject-side string extraction.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "portmatch/canonical_tree.hpp"
#include "portmatch/port_graph.hpp"

namespace portmatch {

struct AnchorCandidate {
  AnchorSet anchors;
  std::vector<std::uint32_t> seen_paths;  // path opened by the root, then by each anchor

  bool operator==(const AnchorCandidate&) const = default;
};

/// Fuss-Catalan bound binom(3w, w) / (2w + 1) on the number of candidates.
std::uint64_t anchor_bound(std::size_t w);

/// ALLANCHORS for width w, walking at most d vertices per direction (the
/// anchor included); d = 0 means unlimited. Requires g flat with every
/// vertex on at most two pairing classes, and a root on exactly one linear
/// path: a virtual slot root, or a vertex with a single pairing class.
/// Throws GraphError on bad roots, w == 0 or w > 16.
std::vector<AnchorCandidate> all_anchors(const PortGraph& g, Root root, std::size_t w, std::size_t d = 0);

/// Edges of the linear paths through the candidate's anchors, truncated to
/// d vertices per direction from the opening anchor (0: unlimited), with
/// their vertices.
Subgraph g_max(const PortGraph& g, const AnchorCandidate& c, std::size_t d = 0);

struct SubjectStrings {
  StringTuple tuple;
  std::vector<std::vector<VertexId>> vertices;  // per character, kNoVertex for a virtual root
};

/// ASSTRINGS on the candidate's maximal subgraph; every string has at most d
/// characters (0: unlimited).
SubjectStrings subject_strings(const PortGraph& g, const AnchorCandidate& c, std::size_t d = 0);

}  // namespace portmatch
