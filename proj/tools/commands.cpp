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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "portmatch/circuit.hpp"
#include "portmatch/error.hpp"
#include "portmatch/matcher.hpp"

namespace portmatch::cli {

namespace {

struct UsageError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw IoError("cannot write " + path);
}

// One graph per circuit line; conversion errors name the line.
std::vector<PortGraph> load_patterns(const std::string& path, std::vector<std::size_t>& lines) {
  auto circuits = parse_circuit_lines(read_file(path), &lines);
  auto gs = GateSet::standard();
  std::vector<PortGraph> out;
  out.reserve(circuits.size());
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    try {
      out.push_back(circuit_to_portgraph(circuits[i], gs));
    } catch (const CircuitError& e) {
      throw ParseError(lines[i], e.what());
    }
  }
  return out;
}

PortGraph load_subject(const std::string& path) {
  try {
    return circuit_to_portgraph(parse_circuit(read_file(path)), GateSet::standard());
  } catch (const CircuitError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

Matcher compile_or_report(std::span<const PortGraph> ps, MatchOptions opts, const std::vector<std::size_t>& lines) {
  try {
    return Matcher::compile(ps, opts);
  } catch (const CompileError& e) {
    throw ParseError(e.index() < lines.size() ? lines[e.index()] : 0, e.what());
  }
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double median_ms(std::size_t reps, F&& f) {
  f();  // warm-up, discarded
  std::vector<double> ts;
  for (std::size_t i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    ts.push_back(ms_since(t0));
  }
  std::sort(ts.begin(), ts.end());
  return ts.size() % 2 ? ts[ts.size() / 2] : (ts[ts.size() / 2 - 1] + ts[ts.size() / 2]) / 2;
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

// --- compile -------------------------------------------------------------

struct CompileArgs {
  std::string patterns, out;
  bool convex_only = true;
};

int cmd_compile(const CompileArgs& a, std::ostream& out) {
  std::vector<std::size_t> lines;
  auto ps = load_patterns(a.patterns, lines);
  auto m = compile_or_report(ps, {a.convex_only}, lines);
  m.save_file(a.out);
  std::size_t nodes = 0;
  std::string widths;
  for (auto w : m.widths()) {
    nodes += m.tree(w).stats().nodes;
    widths += (widths.empty() ? "" : ",") + std::to_string(w);
  }
  out << "patterns=" << m.num_patterns() << '\n'
      << "entries=" << m.num_entries() << '\n'
      << "widths=" << widths << '\n'
      << "nodes=" << nodes << '\n';
  for (auto w : m.widths()) {
    auto st = m.tree(w).stats();
    out << "width." << w << ".patterns=" << st.ids << '\n' << "width." << w << ".nodes=" << st.nodes << '\n';
  }
  out << "convex_only=" << (a.convex_only ? "true" : "false") << '\n';
  return kOk;
}

// --- match ---------------------------------------------------------------

struct MatchArgs {
  std::string matcher, subject, format = "json";
  bool allow_nonconvex = false;
};

int cmd_match(const MatchArgs& a, std::ostream& out) {
  auto m = Matcher::load_file(a.matcher);
  auto g = load_subject(a.subject);
  MatchOptions opts = m.defaults();
  if (a.allow_nonconvex) opts.convex_only = false;
  auto hits = m.find_matches(g, opts);
  if (a.format == "csv") out << "pattern,vertices,convex\n";
  for (const auto& h : hits) {
    if (a.format == "csv") {
      out << h.pattern_id << ',';
      for (std::size_t i = 0; i < h.embedding.vertex_map.size(); ++i) out << (i ? " " : "") << h.embedding.vertex_map[i];
      out << ',' << (h.convex ? "true" : "false") << '\n';
    } else {
      nlohmann::ordered_json j;
      j["pattern"] = h.pattern_id;
      j["vertices"] = h.embedding.vertex_map;
      j["convex"] = h.convex;
      out << j.dump() << '\n';
    }
  }
  out << "matches=" << hits.size() << '\n';
  return kOk;
}

// --- gen -----------------------------------------------------------------

struct GenArgs {
  std::uint32_t qubits = 0;
  std::size_t gates = 0, count = 1;
  std::uint64_t seed = 0;
  std::string out, gate_set = "benchmark";
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  auto gs = a.gate_set == "standard" ? GateSet::standard() : GateSet::benchmark();
  if (a.qubits < gs.max_arity())
    throw UsageError("--qubits must be at least " + std::to_string(gs.max_arity()) + " for this gate set");
  std::vector<Circuit> cs;
  cs.reserve(a.count);
  for (std::size_t i = 0; i < a.count; ++i) cs.push_back(random_circuit(a.qubits, a.gates, gs, a.seed + i));
  write_file(a.out, emit_circuit_lines(cs));
  out << "circuits=" << cs.size() << '\n';
  return kOk;
}

// --- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string patterns, subject, grid, baseline, csv;
  std::uint64_t seed = 0;
  std::size_t reps = 5;
};

std::vector<std::size_t> parse_grid(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v == 0) throw UsageError("bad --ell-grid entry '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  auto grid = parse_grid(a.grid);
  std::vector<std::size_t> lines;
  auto all = load_patterns(a.patterns, lines);
  for (auto ell : grid)
    if (ell > all.size())
      throw UsageError("--ell-grid asks for " + std::to_string(ell) + " patterns but the file holds " +
                       std::to_string(all.size()));
  auto g = load_subject(a.subject);
  PathIndex g_paths(g);

  std::ostringstream csv;
  csv << "n_patterns,width,depth,compile_ms,query_ms,naive_ms,n_matches,subject_size,seed\n";
  for (auto ell : grid) {
    // nested subsets: the first ell entries of one seeded shuffle
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(a.seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[below(rng, i)]);
    std::vector<PortGraph> subset;
    std::vector<std::size_t> sub_lines;
    for (std::size_t i = 0; i < ell; ++i) {
      subset.push_back(all[order[i]]);
      sub_lines.push_back(lines[order[i]]);
    }

    auto t0 = std::chrono::steady_clock::now();
    auto m = compile_or_report(subset, {true}, sub_lines);
    double compile_ms = ms_since(t0);
    std::size_t width = 0, depth = 0;
    for (std::uint32_t i = 0; i < m.num_patterns(); ++i) {
      width = std::max(width, m.pattern(i).width);
      depth = std::max(depth, m.pattern(i).depth);
    }

    std::vector<Match> hits;
    double query_ms = median_ms(a.reps, [&] { hits = m.find_matches(g); });

    std::string naive_cell;
    if (!a.baseline.empty()) {
      std::set<std::pair<std::uint32_t, std::vector<VertexId>>> naive;
      double naive_ms = median_ms(a.reps, [&] {
        naive.clear();
        for (std::uint32_t i = 0; i < subset.size(); ++i)
          for (auto& x : naive_match(subset[i], g, i, &g_paths))
            if (x.convex) naive.insert({i, std::move(x.embedding.vertex_map)});
      });
      std::set<std::pair<std::uint32_t, std::vector<VertexId>>> fast;
      for (auto& h : hits) fast.insert({h.pattern_id, h.embedding.vertex_map});
      if (fast != naive)
        throw InvariantError("matcher and naive baseline disagree at " + std::to_string(ell) + " patterns (" +
                             std::to_string(fast.size()) + " vs " + std::to_string(naive.size()) + ")");
      naive_cell = fmt_ms(naive_ms);
    }
    csv << ell << ',' << width << ',' << depth << ',' << fmt_ms(compile_ms) << ',' << fmt_ms(query_ms) << ','
        << naive_cell << ',' << hits.size() << ',' << g.num_vertices() << ',' << a.seed << '\n';
  }
  if (a.csv.empty())
    out << csv.str();
  else
    write_file(a.csv, csv.str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Port graph pattern matching"};
  app.name("portmatch");
  app.require_subcommand(1);

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "compile a pattern file into a matcher file");
  compile->add_option("--patterns", ca.patterns, "circuits, one JSON object per line")->required();
  compile->add_option("--out", ca.out, "matcher file to write")->required();
  compile->add_option("--convex-only", ca.convex_only, "default filter stored in the matcher")->default_val(true);

  MatchArgs ma;
  auto* match = app.add_subcommand("match", "find pattern occurrences in a subject circuit");
  match->add_option("--matcher", ma.matcher)->required();
  match->add_option("--subject", ma.subject, "one circuit as JSON")->required();
  match->add_option("--format", ma.format)->check(CLI::IsMember({"json", "csv"}))->default_val("json");
  match->add_flag("--allow-nonconvex", ma.allow_nonconvex, "report non-convex embeddings too");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "write seeded random circuits");
  gen->add_option("--qubits", ga.qubits)->required()->check(CLI::PositiveNumber);
  gen->add_option("--gates", ga.gates)->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--count", ga.count)->default_val(1)->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", ga.seed)->default_val(0);
  gen->add_option("--out", ga.out)->required();
  gen->add_option("--gate-set", ga.gate_set)->check(CLI::IsMember({"benchmark", "standard"}))->default_val("benchmark");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "time compile and query over a grid of pattern counts");
  bench->add_option("--patterns", ba.patterns)->required();
  bench->add_option("--subject", ba.subject)->required();
  bench->add_option("--ell-grid", ba.grid, "comma separated pattern counts")->required();
  bench->add_option("--baseline", ba.baseline)->check(CLI::IsMember({"naive"}));
  bench->add_option("--csv", ba.csv, "write rows here instead of standard output");
  bench->add_option("--seed", ba.seed)->default_val(0);
  bench->add_option("--reps", ba.reps, "timed repetitions per cell")->default_val(5)->check(CLI::Range(5, 1000));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compile) return cmd_compile(ca, out);
    if (*match) return cmd_match(ma, out);
    if (*gen) return cmd_gen(ga, out);
    return cmd_bench(ba, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    // parse, compile, graph, circuit and I/O failures
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace portmatch::cli
