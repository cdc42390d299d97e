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

#include "portmatch/prefix_tree.hpp"

#include <algorithm>

#include "portmatch/error.hpp"

namespace portmatch {

namespace {
constexpr std::size_t kMaxChainDepth = 1u << 14;
}

PrefixTree::PrefixTree(std::size_t arity) : arity_(arity) {
  if (arity == 0) throw Error("prefix tree arity must be positive");
  nodes_.emplace_back();
}

std::uint32_t PrefixTree::add_node() {
  nodes_.emplace_back();
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t PrefixTree::child(std::uint32_t n, const Symbol& c) const {
  const auto& ch = nodes_[n].children;
  auto it = std::lower_bound(ch.begin(), ch.end(), c, [](const auto& e, const Symbol& s) { return e.first < s; });
  return it != ch.end() && it->first == c ? it->second : kNone;
}

std::uint32_t PrefixTree::child_or_add(std::uint32_t n, const Symbol& c) {
  auto& ch = nodes_[n].children;
  auto it = std::lower_bound(ch.begin(), ch.end(), c, [](const auto& e, const Symbol& s) { return e.first < s; });
  if (it != ch.end() && it->first == c) return it->second;
  auto pos = it - ch.begin();
  std::uint32_t id = add_node();  // may reallocate nodes_, so re-fetch the vector
  auto& ch2 = nodes_[n].children;
  ch2.insert(ch2.begin() + pos, {c, id});
  return id;
}

void PrefixTree::insert(const StringTuple& t, std::uint32_t id) {
  if (t.arity() != arity_) throw Error("tuple arity does not match the prefix tree");
  if (ids_.count(id)) throw Error("id already present in the prefix tree");
  std::uint32_t n = 0;
  for (std::size_t k = 0; k < arity_; ++k) {
    if (k > 0) {
      if (nodes_[n].next == kNone) {
        std::uint32_t r = add_node();
        nodes_[n].next = r;
      }
      n = nodes_[n].next;
    }
    for (const auto& c : t.strings[k]) n = child_or_add(n, c);
  }
  auto& ids = nodes_[n].ids;
  ids.insert(std::upper_bound(ids.begin(), ids.end(), id), id);
  ids_.insert(id);
}

void PrefixTree::walk(std::uint32_t n, std::size_t dim, const StringTuple& s,
                      const std::function<void(std::uint32_t)>& emit, Counters* counters) const {
  const auto& str = s.strings[dim];
  const bool last = dim + 1 == arity_;
  std::size_t consumed = 0;
  if (counters) ++counters->walks;
  while (true) {
    if (counters) ++counters->node_visits;
    const Node& node = nodes_[n];
    if (last) {
      for (auto id : node.ids) emit(id);
    } else if (node.next != kNone) {
      walk(node.next, dim + 1, s, emit, counters);
    }
    if (consumed == str.size()) break;
    std::uint32_t c = child(n, str[consumed]);
    if (c == kNone) break;
    n = c;
    ++consumed;
  }
  if (counters && consumed > str.size()) ++counters->overlong_walks;
}

void PrefixTree::for_each_match(const StringTuple& s, const std::function<void(std::uint32_t)>& emit,
                                Counters* counters) const {
  if (s.arity() != arity_) throw Error("tuple arity does not match the prefix tree");
  walk(0, 0, s, emit, counters);
}

std::vector<std::uint32_t> PrefixTree::query(const StringTuple& s, Counters* counters) const {
  std::vector<std::uint32_t> out;
  for_each_match(s, [&](std::uint32_t id) { out.push_back(id); }, counters);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PrefixTree::Stats PrefixTree::stats() const {
  Stats st;
  st.nodes = nodes_.size();
  st.ids = ids_.size();
  // iterative DFS carrying the chain length
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [n, d] = stack.back();
    stack.pop_back();
    st.depth = std::max(st.depth, d);
    const Node& node = nodes_[n];
    if (node.next != kNone) stack.push_back({node.next, d});
    for (const auto& [c, m] : node.children) stack.push_back({m, d + 1});
  }
  return st;
}

void PrefixTree::write_node(ByteWriter& out, std::uint32_t n) const {
  const Node& node = nodes_[n];
  out.u32(static_cast<std::uint32_t>(node.ids.size()));
  for (auto id : node.ids) out.u32(id);
  out.u8(node.next != kNone ? 1 : 0);
  if (node.next != kNone) write_node(out, node.next);
  out.u32(static_cast<std::uint32_t>(node.children.size()));
  for (const auto& [c, m] : node.children) {
    out.u32(c.entry);
    out.u64(c.sig);
    write_node(out, m);
  }
}

void PrefixTree::serialize(ByteWriter& out) const {
  out.u32(static_cast<std::uint32_t>(arity_));
  write_node(out, 0);
}

std::uint32_t PrefixTree::read_node(ByteReader& in, std::size_t depth, std::size_t dim) {
  if (depth > kMaxChainDepth) throw FormatError(FormatError::Kind::kMalformed, "prefix tree is too deep");
  std::uint32_t n = add_node();
  std::vector<std::uint32_t> ids(in.count(4));
  for (auto& id : ids) {
    id = in.u32();
    if (!ids_.insert(id).second) throw FormatError(FormatError::Kind::kMalformed, "prefix tree repeats an id");
  }
  if (!std::is_sorted(ids.begin(), ids.end()))
    throw FormatError(FormatError::Kind::kMalformed, "prefix tree ids are not sorted");
  if (!ids.empty() && dim + 1 != arity_)
    throw FormatError(FormatError::Kind::kMalformed, "prefix tree stores ids before the last dimension");
  nodes_[n].ids = std::move(ids);
  std::uint8_t has_next = in.u8();
  if (has_next > 1) throw FormatError(FormatError::Kind::kMalformed, "bad next-dimension flag");
  if (has_next && dim + 1 == arity_)
    throw FormatError(FormatError::Kind::kMalformed, "prefix tree links past the last dimension");
  if (has_next) {
    std::uint32_t r = read_node(in, depth + 1, dim + 1);
    nodes_[n].next = r;
  }
  auto nc = in.count(12 + 9);
  std::vector<std::pair<Symbol, std::uint32_t>> children;
  for (std::uint32_t i = 0; i < nc; ++i) {
    Symbol c;
    c.entry = in.u32();
    c.sig = in.u64();
    if (!children.empty() && !(children.back().first < c))
      throw FormatError(FormatError::Kind::kMalformed, "prefix tree children are not sorted");
    std::uint32_t m = read_node(in, depth + 1, dim);
    children.push_back({c, m});
  }
  nodes_[n].children = std::move(children);
  return n;
}

PrefixTree PrefixTree::deserialize(ByteReader& in) {
  auto arity = in.u32();
  if (arity == 0 || arity > 64) throw FormatError(FormatError::Kind::kMalformed, "bad prefix tree arity");
  PrefixTree t(arity);
  t.nodes_.clear();
  t.read_node(in, 0, 0);
  return t;
}

}  // namespace portmatch
