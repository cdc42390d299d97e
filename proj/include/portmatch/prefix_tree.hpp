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

// Multi-dimensional prefix tree: answers "which stored tuples are
// componentwise prefixes of this tuple". Dimension k is a trie whose every
// node may own the root of a trie for dimension k + 1; ids live at the end
// node of the last dimension.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "portmatch/bytes.hpp"
#include "portmatch/canonical_tree.hpp"

namespace portmatch {

class PrefixTree {
 public:
  struct Stats {
    std::size_t nodes = 1;
    std::size_t depth = 0;  // characters on the longest chain across all dimensions
    std::size_t ids = 0;
    bool operator==(const Stats&) const = default;
  };

  /// Instrumentation for one query. A walk is one descent inside one
  /// dimension; it may consume at most that dimension's string.
  struct Counters {
    std::size_t node_visits = 0;
    std::size_t walks = 0;
    std::size_t overlong_walks = 0;  // walks that consumed more than |s_k| characters
  };

  explicit PrefixTree(std::size_t arity = 2);

  std::size_t arity() const noexcept { return arity_; }
  bool empty() const noexcept { return ids_.empty(); }

  /// Throws Error on an arity mismatch or a duplicate id.
  void insert(const StringTuple& t, std::uint32_t id);

  /// Ids whose tuple is a componentwise prefix of `s`, sorted ascending.
  std::vector<std::uint32_t> query(const StringTuple& s, Counters* counters = nullptr) const;
  /// Streams the same ids, unordered but each exactly once.
  void for_each_match(const StringTuple& s, const std::function<void(std::uint32_t)>& emit,
                      Counters* counters = nullptr) const;

  Stats stats() const;

  /// Preorder, children in symbol order; independent of insertion order.
  void serialize(ByteWriter& out) const;
  static PrefixTree deserialize(ByteReader& in);

 private:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  struct Node {
    std::vector<std::pair<Symbol, std::uint32_t>> children;  // sorted by symbol
    std::uint32_t next = kNone;                              // root of the next dimension
    std::vector<std::uint32_t> ids;                          // sorted
  };

  std::uint32_t child(std::uint32_t n, const Symbol& c) const;
  std::uint32_t child_or_add(std::uint32_t n, const Symbol& c);
  std::uint32_t add_node();
  void walk(std::uint32_t n, std::size_t dim, const StringTuple& s, const std::function<void(std::uint32_t)>& emit,
            Counters* counters) const;
  void write_node(ByteWriter& out, std::uint32_t n) const;
  std::uint32_t read_node(ByteReader& in, std::size_t depth, std::size_t dim);

  std::size_t arity_;
  std::vector<Node> nodes_;
  std::unordered_set<std::uint32_t> ids_;
};

}  // namespace portmatch
