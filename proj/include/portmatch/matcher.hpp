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

// Compile a pattern set into per-width prefix trees, then find every pattern
// embedding in a subject by enumerating root slots and anchor candidates.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "portmatch/anchors.hpp"
#include "portmatch/canonical_tree.hpp"
#include "portmatch/embedding.hpp"
#include "portmatch/normalize.hpp"
#include "portmatch/port_graph.hpp"
#include "portmatch/prefix_tree.hpp"

namespace portmatch {

struct Match {
  std::uint32_t pattern_id = 0;
  Embedding embedding;
  std::vector<VertexId> anchors;  // subject vertices; the virtual root is not listed
  bool convex = false;
};

struct MatchOptions {
  bool convex_only = true;
};

/// Everything the query needs about one distinct pattern.
struct CompiledPattern {
  std::vector<std::uint32_t> ids;  // every input index with this exact pattern
  PortGraph original;
  PortGraph normalized;
  std::vector<VertexId> back_map;  // normalized vertex -> original vertex
  AnchorSet anchors;               // canonical anchors on the normalized graph
  StringTuple tuple;
  std::vector<std::vector<VertexId>> string_vertices;  // normalized vertex per character
  std::size_t width = 0;
  std::size_t depth = 0;
};

class Matcher {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  /// Each pattern must be nonempty, flat, connected, own at least one port
  /// and have width at most 16; violations throw CompileError carrying the
  /// pattern index. Exact duplicates share one entry.
  static Matcher compile(std::span<const PortGraph> patterns, MatchOptions defaults = {});

  /// Every (convex) embedding of every pattern into g, sorted by pattern id
  /// then vertex map, without duplicates. Throws GraphError if g is not
  /// flat. A vertex without a weight only lines up with vertices without a
  /// weight here; verify_embedding treats it as a wildcard.
  std::vector<Match> find_matches(const PortGraph& g) const { return find_matches(g, defaults_); }
  std::vector<Match> find_matches(const PortGraph& g, MatchOptions opts) const;

  /// Rebuilds the embedding of pattern `id` for an anchor candidate of the
  /// normalized subject (normalize_two_paths(g).graph), or nullopt when the
  /// candidate's strings do not extend the pattern's or the walk is not an
  /// embedding.
  std::optional<Embedding> reconstruct_candidate(std::uint32_t id, const AnchorCandidate& c, const PortGraph& g) const;

  std::size_t num_patterns() const noexcept { return id_to_entry_.size(); }
  std::size_t num_entries() const noexcept { return entries_.size(); }
  const CompiledPattern& pattern(std::uint32_t id) const { return entries_.at(id_to_entry_.at(id)); }
  std::vector<std::size_t> widths() const;
  const PrefixTree& tree(std::size_t w) const { return buckets_.at(w).tree; }
  std::size_t string_limit(std::size_t w) const { return buckets_.at(w).limit; }
  std::size_t max_depth() const noexcept { return max_depth_; }
  const MatchOptions& defaults() const noexcept { return defaults_; }

  std::vector<std::uint8_t> save() const;
  /// Throws FormatError: kBadMagic, kUnsupportedVersion, kTruncated,
  /// kChecksum or kMalformed.
  static Matcher load(std::span<const std::uint8_t> bytes);
  void save_file(const std::filesystem::path& path) const;
  static Matcher load_file(const std::filesystem::path& path);

 private:
  struct Bucket {
    PrefixTree tree;
    std::size_t limit = 0;  // longest string stored in this bucket
  };

  void finish();  // derived, non-serialized state

  std::vector<CompiledPattern> entries_;
  std::vector<std::uint32_t> id_to_entry_;
  std::map<std::size_t, Bucket> buckets_;
  std::size_t max_depth_ = 0;
  MatchOptions defaults_;
  std::vector<PathIndex> entry_paths_;  // path index of each entry's original graph
};

/// Baseline: fixes pattern vertex 0, tries every subject vertex as its image
/// and extends the map by following port-labelled edges; each candidate is
/// checked with verify_embedding. Every embedding is returned, convex or
/// not; `convex` is computed when g is flat. `g_paths` may supply a
/// precomputed path index of g.
std::vector<Match> naive_match(const PortGraph& p, const PortGraph& g, std::uint32_t pattern_id = 0,
                               const PathIndex* g_paths = nullptr);

}  // namespace portmatch
