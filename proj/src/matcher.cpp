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

#include "portmatch/matcher.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "portmatch/error.hpp"
#include "traversal.hpp"

namespace portmatch {

namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'G', 'P', 'M'};

bool match_less(const Match& a, const Match& b) {
  if (a.pattern_id != b.pattern_id) return a.pattern_id < b.pattern_id;
  return a.embedding.vertex_map < b.embedding.vertex_map;
}

bool match_same(const Match& a, const Match& b) {
  return a.pattern_id == b.pattern_id && a.embedding.vertex_map == b.embedding.vertex_map;
}

// Aligns the pattern's strings with a subject candidate's strings and lifts
// the resulting map to the original graphs. nullopt when the alignment is
// inconsistent; callers still run verify_embedding.
std::optional<std::vector<VertexId>> lockstep(const CompiledPattern& pat,
                                              const std::vector<std::vector<VertexId>>& subject_vertices,
                                              const std::vector<VertexId>& subject_back, std::size_t subject_size) {
  std::vector<VertexId> nmap(pat.normalized.num_vertices(), kNoVertex);
  for (std::size_t i = 0; i < pat.string_vertices.size(); ++i) {
    const auto& pv = pat.string_vertices[i];
    const auto& sv = subject_vertices[i];
    if (pv.size() > sv.size()) throw InvariantError("prefix hit with a pattern string longer than the subject's");
    for (std::size_t j = 0; j < pv.size(); ++j) {
      VertexId p = pv[j];
      VertexId s = sv[j];
      if ((p == kNoVertex) != (s == kNoVertex)) throw InvariantError("virtual root misaligned during reconstruction");
      if (p == kNoVertex) continue;
      if (nmap[p] == kNoVertex)
        nmap[p] = s;
      else if (nmap[p] != s)
        return std::nullopt;
    }
  }
  std::vector<VertexId> omap(pat.original.num_vertices(), kNoVertex);
  for (VertexId p = 0; p < nmap.size(); ++p) {
    if (nmap[p] == kNoVertex) throw InvariantError("pattern vertex missing from its string encoding");
    VertexId o = pat.back_map[p];
    VertexId s = subject_back[nmap[p]];
    if (s >= subject_size) throw InvariantError("subject back map out of range");
    if (omap[o] == kNoVertex)
      omap[o] = s;
    else if (omap[o] != s)
      return std::nullopt;
  }
  return omap;
}

bool is_prefix_tuple(const StringTuple& p, const StringTuple& s) {
  if (p.arity() != s.arity()) return false;
  for (std::size_t i = 0; i < p.arity(); ++i) {
    const auto& a = p.strings[i];
    const auto& b = s.strings[i];
    if (a.size() > b.size() || !std::equal(a.begin(), a.end(), b.begin())) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

Matcher Matcher::compile(std::span<const PortGraph> patterns, MatchOptions defaults) {
  Matcher m;
  m.defaults_ = defaults;
  std::map<std::vector<std::uint8_t>, std::uint32_t> seen;

  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const PortGraph& p = patterns[i];
    if (p.empty()) throw CompileError(i, "pattern is empty");
    if (!PathIndex(p).flat()) throw CompileError(i, "pattern is not flat");
    if (!is_connected(p)) throw CompileError(i, "pattern is not connected");

    ByteWriter key;
    write_graph(key, p);
    auto [it, fresh] = seen.try_emplace(std::move(key).take(), static_cast<std::uint32_t>(m.entries_.size()));
    if (!fresh) {
      m.entries_[it->second].ids.push_back(static_cast<std::uint32_t>(i));
      m.id_to_entry_.push_back(it->second);
      continue;
    }

    CompiledPattern cp;
    cp.ids = {static_cast<std::uint32_t>(i)};
    cp.original = p;
    NormalizedGraph norm;
    try {
      norm = normalize_two_paths(p);
    } catch (const GraphError& e) {
      throw CompileError(i, e.what());
    }
    cp.normalized = std::move(norm.graph);
    cp.back_map = std::move(norm.back_map);

    Root root;
    if (cp.normalized.num_edges() > 0) {
      const Endpoint a = cp.normalized.edge(0).a;
      root = Root::at_slot(a.vertex, a.port);
    } else if (cp.normalized.degree(0) > 0) {
      root = Root::at_slot(0, cp.normalized.ports(0).front().port);
    } else {
      throw CompileError(i, "pattern has no ports");
    }

    PathIndex idx(cp.normalized);
    detail::Engine engine(cp.normalized, idx);
    auto ops = engine.canonical(root);
    if (ops.size() > detail::kMaxWidth) throw CompileError(i, "pattern width exceeds 16");
    cp.width = ops.size();
    cp.anchors.root = root;
    for (const auto& o : ops)
      if (o.anchor != kNoVertex) cp.anchors.anchors.push_back(o.anchor);
    engine.strings(ops, cp.tuple, &cp.string_vertices);
    cp.depth = metrics(p).depth;

    m.id_to_entry_.push_back(static_cast<std::uint32_t>(m.entries_.size()));
    m.entries_.push_back(std::move(cp));
  }

  for (std::uint32_t e = 0; e < m.entries_.size(); ++e) {
    const auto& cp = m.entries_[e];
    auto [it, fresh] = m.buckets_.try_emplace(cp.width, Bucket{PrefixTree(2 * cp.width), 0});
    it->second.tree.insert(cp.tuple, e);
    it->second.limit = std::max(it->second.limit, cp.tuple.max_length());
  }
  m.finish();
  return m;
}

void Matcher::finish() {
  max_depth_ = 0;
  entry_paths_.clear();
  for (const auto& cp : entries_) {
    max_depth_ = std::max(max_depth_, cp.depth);
    entry_paths_.emplace_back(cp.original);
  }
}

std::vector<std::size_t> Matcher::widths() const {
  std::vector<std::size_t> out;
  for (const auto& [w, b] : buckets_) out.push_back(w);
  return out;
}

std::vector<Match> Matcher::find_matches(const PortGraph& g, MatchOptions opts) const {
  PathIndex g_paths(g);
  if (!g_paths.flat()) throw GraphError("subject graph is not flat");
  std::vector<Match> out;
  if (entries_.empty() || g.empty()) return out;

  NormalizedGraph norm = normalize_two_paths(g);
  PathIndex n_paths(norm.graph);
  detail::Engine engine(norm.graph, n_paths);

  StringTuple tuple;
  std::vector<std::vector<VertexId>> verts;
  std::vector<std::uint32_t> hits;
  for (const auto& [w, bucket] : buckets_) {
    const auto cap = static_cast<std::uint32_t>(bucket.limit - 1);
    for (VertexId v = 0; v < norm.graph.num_vertices(); ++v) {
      for (const auto& entry : norm.graph.ports(v)) {
        for (const auto& cand : engine.all(Root::at_slot(v, entry.port), w, cap)) {
          engine.strings(cand.openings, tuple, nullptr);
          hits.clear();
          bucket.tree.for_each_match(tuple, [&](std::uint32_t e) { hits.push_back(e); });
          if (hits.empty()) continue;
          engine.strings(cand.openings, tuple, &verts);
          for (std::uint32_t e : hits) {
            const CompiledPattern& pat = entries_[e];
            auto map = lockstep(pat, verts, norm.back_map, g.num_vertices());
            if (!map) continue;
            Embedding emb{pat.ids.front(), std::move(*map)};
            if (!verify_embedding(pat.original, g, emb)) continue;
            bool convex = is_convex(entry_paths_[e], g_paths, pat.original, emb);
            if (opts.convex_only && !convex) continue;
            std::vector<VertexId> anchors;
            for (const auto& o : cand.openings)
              if (o.anchor != kNoVertex) anchors.push_back(norm.back_map[o.anchor]);
            for (std::uint32_t id : pat.ids) {
              Match m;
              m.pattern_id = id;
              m.embedding = {id, emb.vertex_map};
              m.anchors = anchors;
              m.convex = convex;
              out.push_back(std::move(m));
            }
          }
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), match_less);
  out.erase(std::unique(out.begin(), out.end(), match_same), out.end());
  return out;
}

std::optional<Embedding> Matcher::reconstruct_candidate(std::uint32_t id, const AnchorCandidate& c,
                                                        const PortGraph& g) const {
  const CompiledPattern& pat = pattern(id);
  NormalizedGraph norm = normalize_two_paths(g);
  PathIndex n_paths(norm.graph);
  detail::Engine engine(norm.graph, n_paths);
  const auto cap = static_cast<std::uint32_t>(buckets_.at(pat.width).limit - 1);
  auto ops = engine.replay(c.anchors, cap);
  if (ops.size() != pat.width) return std::nullopt;
  StringTuple tuple;
  std::vector<std::vector<VertexId>> verts;
  engine.strings(ops, tuple, &verts);
  if (!is_prefix_tuple(pat.tuple, tuple)) return std::nullopt;
  auto map = lockstep(pat, verts, norm.back_map, g.num_vertices());
  if (!map) return std::nullopt;
  Embedding emb{id, std::move(*map)};
  if (!verify_embedding(pat.original, g, emb)) return std::nullopt;
  return emb;
}

// ---------------------------------------------------------------------------
// File format, all integers little-endian:
//   "PGPM" u32 version u8 convex_only u32 n_ids u32 n_entries
//   entry*: ids, original graph, normalized graph, back map, root, anchors,
//           tuple, per-string vertices, width, depth
//   u32 n_buckets, bucket*: u32 width, u32 limit, prefix tree
//   u64 FNV-1a of every preceding byte

std::vector<std::uint8_t> Matcher::save() const {
  ByteWriter w;
  w.raw(kMagic);
  w.u32(kFormatVersion);
  w.u8(defaults_.convex_only ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(id_to_entry_.size()));
  w.u32(static_cast<std::uint32_t>(entries_.size()));
  for (const auto& cp : entries_) {
    w.u32(static_cast<std::uint32_t>(cp.ids.size()));
    for (auto id : cp.ids) w.u32(id);
    write_graph(w, cp.original);
    write_graph(w, cp.normalized);
    w.u32(static_cast<std::uint32_t>(cp.back_map.size()));
    for (auto v : cp.back_map) w.u32(v);
    w.u32(cp.anchors.root.vertex);
    w.u16(cp.anchors.root.slot);
    w.u32(static_cast<std::uint32_t>(cp.anchors.anchors.size()));
    for (auto v : cp.anchors.anchors) w.u32(v);
    cp.tuple.write(w);
    w.u32(static_cast<std::uint32_t>(cp.string_vertices.size()));
    for (const auto& s : cp.string_vertices) {
      w.u32(static_cast<std::uint32_t>(s.size()));
      for (auto v : s) w.u32(v);
    }
    w.u32(static_cast<std::uint32_t>(cp.width));
    w.u32(static_cast<std::uint32_t>(cp.depth));
  }
  w.u32(static_cast<std::uint32_t>(buckets_.size()));
  for (const auto& [width, b] : buckets_) {
    w.u32(static_cast<std::uint32_t>(width));
    w.u32(static_cast<std::uint32_t>(b.limit));
    b.tree.serialize(w);
  }
  w.u64(fnv1a64(w.bytes()));
  return std::move(w).take();
}

Matcher Matcher::load(std::span<const std::uint8_t> bytes) {
  using Kind = FormatError::Kind;
  if (bytes.size() < 4) throw FormatError(Kind::kTruncated, "file shorter than its magic bytes");
  if (!std::equal(bytes.begin(), bytes.begin() + 4, std::begin(kMagic)))
    throw FormatError(Kind::kBadMagic, "not a matcher file (bad magic)");
  if (bytes.size() < 8) throw FormatError(Kind::kTruncated, "file ends before its version");
  {
    ByteReader r(bytes.subspan(4, 4));
    auto version = r.u32();
    if (version != kFormatVersion)
      throw FormatError(Kind::kUnsupportedVersion, "unsupported matcher format version " + std::to_string(version));
  }
  if (bytes.size() < 16) throw FormatError(Kind::kTruncated, "file ends before its checksum");
  auto body = bytes.first(bytes.size() - 8);
  ByteReader tail(bytes.last(8));
  if (tail.u64() != fnv1a64(body)) throw FormatError(Kind::kChecksum, "checksum mismatch");

  auto malformed = [](const std::string& what) { return FormatError(Kind::kMalformed, what); };
  ByteReader r(body.subspan(8));
  Matcher m;
  std::uint8_t convex = r.u8();
  if (convex > 1) throw malformed("bad convex-only flag");
  m.defaults_.convex_only = convex == 1;
  std::uint32_t n_ids = r.count(4);
  std::uint32_t n_entries = r.count(8);
  m.id_to_entry_.assign(n_ids, 0xFFFFFFFFu);
  for (std::uint32_t e = 0; e < n_entries; ++e) {
    CompiledPattern cp;
    cp.ids.resize(r.count(4));
    if (cp.ids.empty()) throw malformed("entry without ids");
    for (auto& id : cp.ids) {
      id = r.u32();
      if (id >= n_ids || m.id_to_entry_[id] != 0xFFFFFFFFu) throw malformed("bad or repeated pattern id");
      m.id_to_entry_[id] = e;
    }
    cp.original = read_graph(r);
    cp.normalized = read_graph(r);
    cp.back_map.resize(r.count(4));
    if (cp.back_map.size() != cp.normalized.num_vertices()) throw malformed("back map size mismatch");
    for (auto& v : cp.back_map) {
      v = r.u32();
      if (v >= cp.original.num_vertices()) throw malformed("back map out of range");
    }
    cp.anchors.root.vertex = r.u32();
    cp.anchors.root.slot = r.u16();
    if (cp.anchors.root.vertex >= cp.normalized.num_vertices() ||
        !cp.normalized.has_port(cp.anchors.root.vertex, cp.anchors.root.slot))
      throw malformed("root slot out of range");
    cp.anchors.anchors.resize(r.count(4));
    for (auto& v : cp.anchors.anchors) {
      v = r.u32();
      if (v >= cp.normalized.num_vertices()) throw malformed("anchor out of range");
    }
    cp.tuple = StringTuple::read(r);
    cp.string_vertices.resize(r.count(4));
    if (cp.string_vertices.size() != cp.tuple.arity()) throw malformed("string vertex table size mismatch");
    for (std::size_t i = 0; i < cp.string_vertices.size(); ++i) {
      auto& s = cp.string_vertices[i];
      s.resize(r.count(4));
      if (s.size() != cp.tuple.strings[i].size() || s.empty()) throw malformed("string vertex count mismatch");
      for (std::size_t j = 0; j < s.size(); ++j) {
        s[j] = r.u32();
        bool root_char = i < 2 && j == 0;
        if (root_char ? s[j] != kNoVertex : s[j] >= cp.normalized.num_vertices())
          throw malformed("string vertex out of range");
      }
    }
    cp.width = r.u32();
    cp.depth = r.u32();
    if (cp.width == 0 || cp.width > detail::kMaxWidth || cp.tuple.arity() != 2 * cp.width)
      throw malformed("bad pattern width");
    m.entries_.push_back(std::move(cp));
  }
  for (auto e : m.id_to_entry_)
    if (e == 0xFFFFFFFFu) throw malformed("pattern id without an entry");

  std::uint32_t n_buckets = r.count(9);
  std::vector<bool> placed(n_entries, false);
  std::size_t prev = 0;
  for (std::uint32_t b = 0; b < n_buckets; ++b) {
    std::size_t width = r.u32();
    std::size_t limit = r.u32();
    if (width <= prev) throw malformed("buckets out of order");
    prev = width;
    PrefixTree tree = PrefixTree::deserialize(r);
    if (tree.arity() != 2 * width || limit == 0) throw malformed("bucket arity mismatch");
    m.buckets_.emplace(width, Bucket{std::move(tree), limit});
  }
  // every entry must sit in its width's bucket, within the bucket's limit
  for (std::uint32_t e = 0; e < n_entries; ++e) {
    const auto& cp = m.entries_[e];
    auto it = m.buckets_.find(cp.width);
    if (it == m.buckets_.end() || cp.tuple.max_length() > it->second.limit) throw malformed("entry outside its bucket");
    auto hits = it->second.tree.query(cp.tuple);
    if (!std::binary_search(hits.begin(), hits.end(), e)) throw malformed("entry missing from its prefix tree");
    placed[e] = true;
  }
  std::size_t stored = 0;
  for (const auto& [w, b] : m.buckets_) stored += b.tree.stats().ids;
  if (stored != n_entries) throw malformed("prefix trees hold unknown ids");
  if (!r.at_end()) throw malformed("trailing bytes before the checksum");
  m.finish();
  return m;
}

void Matcher::save_file(const std::filesystem::path& path) const {
  auto bytes = save();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("failed writing " + path.string());
}

Matcher Matcher::load_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return load(bytes);
}

// ---------------------------------------------------------------------------

std::vector<Match> naive_match(const PortGraph& p, const PortGraph& g, std::uint32_t pattern_id,
                               const PathIndex* g_paths) {
  std::vector<Match> out;
  if (p.empty()) return out;
  std::optional<PathIndex> own;
  if (!g_paths) g_paths = &own.emplace(g);
  PathIndex p_paths(p);

  std::vector<VertexId> map(p.num_vertices());
  std::vector<VertexId> stack;
  for (VertexId r = 0; r < g.num_vertices(); ++r) {
    if (g.degree(r) != p.degree(0)) continue;
    std::fill(map.begin(), map.end(), kNoVertex);
    map[0] = r;
    stack.assign(1, 0);
    bool ok = true;
    while (ok && !stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      VertexId y = map[x];
      for (const auto& e : p.ports(x)) {
        if (e.open()) continue;
        const auto* f = g.find(y, e.port);
        if (!f || f->open()) {
          ok = false;
          break;
        }
        Endpoint pt = p.edge(e.edge).other({x, e.port});
        Endpoint gt = g.edge(f->edge).other({y, e.port});
        if (pt.port != gt.port) {
          ok = false;
          break;
        }
        if (map[pt.vertex] == kNoVertex) {
          map[pt.vertex] = gt.vertex;
          stack.push_back(pt.vertex);
        } else if (map[pt.vertex] != gt.vertex) {
          ok = false;
          break;
        }
      }
    }
    if (!ok || std::find(map.begin(), map.end(), kNoVertex) != map.end()) continue;
    Embedding emb{pattern_id, map};
    if (!verify_embedding(p, g, emb)) continue;
    Match m;
    m.pattern_id = pattern_id;
    m.convex = g_paths->flat() && is_convex(p_paths, *g_paths, p, emb);
    m.embedding = std::move(emb);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace portmatch
