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

// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "portmatch/anchors.hpp"
#include "portmatch/circuit.hpp"
#include "portmatch/embedding.hpp"
#include "portmatch/error.hpp"
#include "portmatch/matcher.hpp"
#include "portmatch/prefix_tree.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace portmatch;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

// Every match any criterion produces goes through here.
struct Soundness {
  std::size_t checked = 0, failed = 0;
  void check(std::span<const PortGraph> ps, const PortGraph& g, const std::vector<Match>& ms) {
    for (auto& m : ms) {
      ++checked;
      if (!verify_embedding(ps[m.pattern_id], g, m.embedding)) ++failed;
    }
  }
} soundness;

// Largest candidate count seen per width, over every all_anchors call.
std::map<std::size_t, std::size_t> most_candidates;
std::size_t anchor_calls = 0;

std::vector<AnchorCandidate> counted_all(const PortGraph& g, Root r, std::size_t w, std::size_t d = 0) {
  auto out = all_anchors(g, r, w, d);
  ++anchor_calls;
  auto& m = most_candidates[w];
  m = std::max(m, out.size());
  return out;
}

using MapSet = std::set<std::pair<std::uint32_t, std::vector<VertexId>>>;

MapSet as_set(const std::vector<Match>& ms) {
  MapSet out;
  for (auto& m : ms) out.insert({m.pattern_id, m.embedding.vertex_map});
  return out;
}

MapSet naive_convex(std::span<const PortGraph> ps, const PortGraph& g) {
  MapSet out;
  PathIndex gi(g);
  for (std::uint32_t i = 0; i < ps.size(); ++i)
    for (auto& m : naive_match(ps[i], g, i, &gi))
      if (m.convex) out.insert({i, std::move(m.embedding.vertex_map)});
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Random connected circuit on exactly q qubits with at most `depth` gates
// on any qubit.
Circuit shallow_pattern(pmtest::Rng& rng, std::uint32_t q, std::size_t gates, std::size_t depth, const GateSet& gs) {
  for (;;) {
    auto c = pmtest::random_connected_circuit(rng, q, gates, gs);
    if (metrics(circuit_to_portgraph(c, gs)).depth <= depth) return c;
  }
}

// --- 1 -------------------------------------------------------------------

Verdict oracle_equivalence() {
  auto gs = GateSet::benchmark();
  pmtest::Rng rng(1001);
  std::vector<PortGraph> ps;
  for (int i = 0; i < 50; ++i) {
    auto q = static_cast<std::uint32_t>(pmtest::uniform(rng, 1, 3));
    ps.push_back(circuit_to_portgraph(shallow_pattern(rng, q, pmtest::uniform(rng, q, 3 * q), 4, gs), gs));
  }
  auto m = Matcher::compile(ps);
  std::size_t mismatched = 0, matches = 0;
  for (int s = 0; s < 100; ++s) {
    auto q = static_cast<std::uint32_t>(pmtest::uniform(rng, 2, 5));
    auto g = circuit_to_portgraph(random_circuit(q, pmtest::uniform(rng, 0, 40), gs, rng()), gs);
    auto got = m.find_matches(g);
    soundness.check(ps, g, got);
    matches += got.size();
    if (as_set(got) != naive_convex(ps, g)) ++mismatched;
  }
  return {mismatched == 0, "100 subjects x 50 patterns, " + std::to_string(matches) + " matches, " +
                               std::to_string(mismatched) + " subjects with differing match sets"};
}

// --- 3 -------------------------------------------------------------------

Verdict completeness() {
  pmtest::Rng rng(1003);
  std::size_t subgraphs = 0, rooted = 0, misses = 0;
  for (int i = 0; i < 200; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 2, 10);
    o.max_wires = 4;
    auto g = pmtest::random_flat_graph(rng, o);
    PathIndex gidx(g);
    std::map<std::tuple<VertexId, Port, std::size_t>, std::vector<AnchorCandidate>> cache;
    for (auto& vs : pmtest::connected_vertex_subsets(g)) {
      // convex and connected subgraphs are induced
      auto sub = materialize(g, {vs, pmtest::induced_edges(g, vs)});
      PathIndex hidx(sub.graph);
      std::size_t w = hidx.width();
      if (w > 3 || !is_convex(hidx, gidx, sub.graph, {0, sub.to_parent})) continue;
      ++subgraphs;
      for (VertexId v = 0; v < sub.graph.num_vertices(); ++v) {
        std::vector<Root> roots;
        for (auto& pe : sub.graph.ports(v)) roots.push_back(Root::at_slot(v, pe.port));
        if (sub.graph.classes(v).size() == 1) roots.push_back(Root::at_vertex(v));
        for (auto r : roots) {
          ++rooted;
          auto want = canonical_anchors(sub.graph, r);
          AnchorSet lifted{{sub.to_parent[r.vertex], r.slot}, {}};
          for (auto a : want.anchors) lifted.anchors.push_back(sub.to_parent[a]);
          auto key = std::tuple{lifted.root.vertex, lifted.root.slot, w};
          auto it = cache.find(key);
          if (it == cache.end()) it = cache.emplace(key, counted_all(g, lifted.root, w)).first;
          auto& cands = it->second;
          if (std::none_of(cands.begin(), cands.end(), [&](auto& c) { return c.anchors == lifted; })) ++misses;
        }
      }
    }
  }
  return {misses == 0 && subgraphs > 0, std::to_string(subgraphs) + " convex connected subgraphs, " +
                                            std::to_string(rooted) + " rooted checks, " + std::to_string(misses) +
                                            " misses"};
}

// --- 4 -------------------------------------------------------------------

Verdict candidate_bound() {
  // widen the sample beyond the calls made by criterion 3
  pmtest::Rng rng(1004);
  for (int i = 0; i < 300; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 3, 16);
    o.max_wires = 6;
    auto g = pmtest::random_flat_graph(rng, o);
    for (std::size_t w = 1; w <= 4; ++w) {
      VertexId v = static_cast<VertexId>(pmtest::uniform(rng, 0, g.num_vertices() - 1));
      for (auto& pe : g.ports(v)) (void)counted_all(g, Root::at_slot(v, pe.port), w, pmtest::uniform(rng, 0, 4));
    }
  }
  std::size_t violations = 0;
  std::string detail;
  for (auto [w, most] : most_candidates) {
    if (most > anchor_bound(w)) ++violations;
    if (w <= 4) detail += " w=" + std::to_string(w) + ":" + std::to_string(most) + "/" + std::to_string(anchor_bound(w));
  }
  return {violations == 0, std::to_string(anchor_calls) + " calls, max/bound" + detail + ", " +
                               std::to_string(violations) + " violations"};
}

// --- 5 -------------------------------------------------------------------

Verdict width_bounds() {
  pmtest::Rng rng(1005);
  std::size_t bad_flat = 0, bad_circuit = 0;
  for (int i = 0; i < 500; ++i) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 14);
    o.max_classes = 3;
    o.max_wires = 5;
    auto m = metrics(pmtest::random_flat_graph(rng, o, false));
    if (!m.is_flat || m.width > (m.n_odd + m.n_open) / 2) ++bad_flat;
  }
  auto gs = GateSet::standard();
  for (int i = 0; i < 500; ++i) {
    auto q = static_cast<std::uint32_t>(pmtest::uniform(rng, 3, 8));
    Circuit c;
    do {
      c = random_circuit(q, pmtest::uniform(rng, q, 4 * q), gs, rng());
    } while ([&] {
      std::set<std::uint32_t> used;
      for (auto& g : c.gates) used.insert(g.qubits.begin(), g.qubits.end());
      return used.size() != q;
    }());
    if (metrics(circuit_to_portgraph(c, gs)).width != q) ++bad_circuit;
  }
  return {bad_flat + bad_circuit == 0, "500 flat graphs: " + std::to_string(bad_flat) +
                                           " violations; 500 circuits: " + std::to_string(bad_circuit) +
                                           " with width != q"};
}

// --- 6 -------------------------------------------------------------------

Verdict round_trips() {
  pmtest::Rng rng(1006);
  std::size_t ct_fail = 0, json_fail = 0, graph_fail = 0;
  for (int done = 0; done < 1000;) {
    pmtest::FlatGraphOptions o;
    o.vertices = pmtest::uniform(rng, 1, 12);
    o.max_wires = 4;
    auto g = pmtest::random_flat_graph(rng, o);
    // a CT root may not have two classes on one path
    PathIndex idx(g);
    std::vector<VertexId> roots;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      auto cs = idx.classes_of(v);
      if (cs.size() < 2 || cs[0].path != cs[1].path) roots.push_back(v);
    }
    if (roots.empty()) continue;
    ++done;
    try {
      auto ct = ct_representation(g, roots[pmtest::uniform(rng, 0, roots.size() - 1)]);
      if (!is_isomorphic(reconstruct(ct), g)) ++ct_fail;
    } catch (const Error&) {
      ++ct_fail;
    }
  }
  auto gs = GateSet::standard();
  for (int i = 0; i < 1000; ++i) {
    auto c = random_circuit(static_cast<std::uint32_t>(pmtest::uniform(rng, 3, 6)), pmtest::uniform(rng, 0, 20), gs,
                            rng());
    if (parse_circuit(emit_circuit(c)) != c) ++json_fail;
    // qubits numbered by first use, parameters on the k/16 grid: exact
    std::map<std::uint32_t, std::uint32_t> name;
    for (auto& g : c.gates)
      for (auto& x : g.qubits) x = name.try_emplace(x, static_cast<std::uint32_t>(name.size())).first->second;
    c.num_qubits = static_cast<std::uint32_t>(name.size());
    if (portgraph_to_circuit(circuit_to_portgraph(c, gs), gs) != c) ++graph_fail;
  }
  return {ct_fail + json_fail + graph_fail == 0, "CT 1000 graphs: " + std::to_string(ct_fail) +
                                                     " failures; JSON 1000: " + std::to_string(json_fail) +
                                                     "; graph 1000: " + std::to_string(graph_fail)};
}

// --- 7 -------------------------------------------------------------------

Verdict prefix_trees() {
  pmtest::Rng rng(1007);
  std::size_t wrong = 0, over = 0, queries = 0;
  std::string detail;
  for (std::size_t arity : {2u, 4u, 6u, 8u}) {
    PrefixTree t(arity);
    std::vector<StringTuple> stored;
    std::size_t L = 0;
    for (std::uint32_t i = 0; i < 1000; ++i) {
      StringTuple s;
      for (std::size_t k = 0; k < arity; ++k) {
        std::vector<Symbol> str(pmtest::uniform(rng, 0, 4));
        for (auto& c : str) c = {static_cast<std::uint32_t>(pmtest::uniform(rng, 0, 1)), pmtest::uniform(rng, 0, 2)};
        s.strings.push_back(std::move(str));
      }
      L = std::max(L, s.max_length());
      t.insert(s, i);
      stored.push_back(std::move(s));
    }
    auto nodes = t.stats().nodes;
    if (double(nodes) > std::pow(1000.0 * double(L), double(arity)) + 1) ++over;
    detail += " a=" + std::to_string(arity) + ":" + std::to_string(nodes) + "nodes";
    for (int q = 0; q < 100; ++q) {
      // half the queries extend a stored tuple
      StringTuple s = q % 2 ? stored[pmtest::uniform(rng, 0, 999)] : StringTuple{};
      if (s.strings.empty()) s.strings.resize(arity);
      for (auto& str : s.strings)
        for (std::size_t n = pmtest::uniform(rng, 0, 3); n > 0; --n)
          str.push_back({static_cast<std::uint32_t>(pmtest::uniform(rng, 0, 1)), pmtest::uniform(rng, 0, 2)});
      ++queries;
      if (t.query(s) != pmtest::prefix_scan(stored, s)) ++wrong;
    }
  }
  return {wrong + over == 0, std::to_string(queries) + " queries, " + std::to_string(wrong) + " wrong, " +
                                 std::to_string(over) + " bound violations;" + detail};
}

// --- 8 and 9 -------------------------------------------------------------

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("portmatch_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
};

void write_text(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

Circuit big_subject() { return random_circuit(19, 600, GateSet::benchmark(), 1908); }

Verdict ell_independence() {
  Scratch tmp;
  auto gs = GateSet::benchmark();
  write_text(tmp.file("subject.json"), emit_circuit(big_subject()));
  bool ok = true;
  std::string detail;
  for (std::uint32_t w : {2u, 3u}) {
    pmtest::Rng rng(1008 + w);
    std::vector<Circuit> cs;
    for (int i = 0; i < 10000; ++i) cs.push_back(pmtest::random_connected_circuit(rng, w, 6, gs));
    auto pats = tmp.file("w" + std::to_string(w) + ".jsonl");
    write_text(pats, emit_circuit_lines(cs));
    std::ostringstream out, err;
    int code = cli::run({"bench", "--patterns", pats, "--subject", tmp.file("subject.json"), "--ell-grid",
                         "1000,10000", "--seed", "8", "--reps", "7"},
                        out, err);
    if (code != 0) return {false, "bench exited with " + std::to_string(code) + ": " + err.str()};
    std::istringstream rows(out.str());
    std::string line;
    std::getline(rows, line);
    std::vector<double> query;
    std::vector<std::string> matches;
    while (std::getline(rows, line)) {
      std::vector<std::string> cells;
      std::stringstream cs2(line);
      for (std::string c; std::getline(cs2, c, ',');) cells.push_back(c);
      query.push_back(std::stod(cells[4]));
      matches.push_back(cells[6]);
    }
    double ratio = query[1] / query[0];
    ok = ok && ratio <= 2.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, " w=%u: %.2f ms -> %.2f ms (ratio %.2f, matches %s/%s);", w, query[0], query[1],
                  ratio, matches[0].c_str(), matches[1].c_str());
    detail += buf;
  }
  return {ok, "19-qubit 600-gate subject, 6-gate patterns, median of 7 reps, limit 2.0;" + detail};
}

Verdict baseline_speedup() {
  auto gs = GateSet::benchmark();
  pmtest::Rng rng(1009);
  std::vector<PortGraph> ps;
  for (int i = 0; i < 5000; ++i) {
    auto q = static_cast<std::uint32_t>(pmtest::uniform(rng, 1, 4));
    ps.push_back(circuit_to_portgraph(shallow_pattern(rng, q, pmtest::uniform(rng, q + 2, 3 * q + 3), 6, gs), gs));
  }
  auto g = circuit_to_portgraph(big_subject(), gs);
  auto t0 = std::chrono::steady_clock::now();
  auto m = Matcher::compile(ps);
  double compile_s = seconds_since(t0);

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  // interleaved so both sides see the same machine load
  std::vector<Match> hits = m.find_matches(g);
  MapSet naive = naive_convex(ps, g);
  std::vector<double> fast, slow;
  for (int r = 0; r < 9; ++r) {
    t0 = std::chrono::steady_clock::now();
    hits = m.find_matches(g);
    fast.push_back(seconds_since(t0));
    t0 = std::chrono::steady_clock::now();
    naive = naive_convex(ps, g);
    slow.push_back(seconds_since(t0));
  }
  soundness.check(ps, g, hits);
  bool same = as_set(hits) == naive;
  double speedup = median(slow) / median(fast);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "5000 patterns (w<=4, d<=6), 600-gate subject: query %.1f ms, naive %.1f ms, speedup %.1fx "
                "(target 5x, floor 2x), compile %.1f ms, %zu matches, sets %s",
                1e3 * median(fast), 1e3 * median(slow), speedup, 1e3 * compile_s, hits.size(),
                same ? "equal" : "DIFFER");
  return {same && speedup >= 2.0, buf};
}

// --- 10 ------------------------------------------------------------------

Verdict determinism() {
  auto gs = GateSet::benchmark();
  pmtest::Rng rng(1010);
  std::vector<PortGraph> ps;
  for (int i = 0; i < 2000; ++i) {
    auto q = static_cast<std::uint32_t>(pmtest::uniform(rng, 1, 3));
    ps.push_back(circuit_to_portgraph(pmtest::random_connected_circuit(rng, q, pmtest::uniform(rng, q, 2 * q + 2), gs), gs));
  }
  auto a = Matcher::compile(ps);
  auto b = Matcher::compile(ps);
  auto bytes = a.save();
  bool same_bytes = bytes == b.save();
  auto c = Matcher::load(bytes);
  bool reload_bytes = c.save() == bytes;
  std::size_t differing = 0;
  for (int s = 0; s < 20; ++s) {
    auto g = circuit_to_portgraph(random_circuit(5, 80, gs, rng()), gs);
    auto ra = a.find_matches(g), rb = b.find_matches(g), rc = c.find_matches(g), ra2 = a.find_matches(g);
    soundness.check(ps, g, ra);
    auto key = [](const std::vector<Match>& ms) {
      std::vector<std::tuple<std::uint32_t, std::vector<VertexId>, std::vector<VertexId>, bool>> out;
      for (auto& m : ms) out.emplace_back(m.pattern_id, m.embedding.vertex_map, m.anchors, m.convex);
      return out;
    };
    if (key(ra) != key(rb) || key(ra) != key(rc) || key(ra) != key(ra2)) ++differing;
  }
  return {same_bytes && reload_bytes && differing == 0,
          std::string("compile twice: ") + (same_bytes ? "identical" : "DIFFERENT") +
              " bytes; reload: " + (reload_bytes ? "identical" : "DIFFERENT") + " bytes; " +
              std::to_string(differing) + "/20 subjects with differing match sequences"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  std::vector<Criterion> cs{
      {1, "oracle equivalence", oracle_equivalence},
      {3, "anchor completeness", completeness},
      {4, "candidate bound", candidate_bound},
      {5, "width bounds", width_bounds},
      {6, "round trips", round_trips},
      {7, "prefix tree", prefix_trees},
      {8, "pattern-count independence", ell_independence},
      {9, "baseline speedup", baseline_speedup},
      {10, "determinism", determinism},
      {2, "soundness", [] {
         return Verdict{soundness.failed == 0 && soundness.checked > 0,
                        std::to_string(soundness.checked) + " emitted matches verified, " +
                            std::to_string(soundness.failed) + " rejected"};
       }},
  };

  int failed = 0, ran = 0;
  for (auto& c : cs) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    ++ran;
    failed += !v.pass;
    std::printf("%s %2d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%d passed\n", ran - failed, ran);
  return failed ? 1 : 0;
}
