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

#include "portmatch/circuit.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <queue>
#include <random>

#include "json.hpp"
#include "portmatch/error.hpp"

namespace portmatch {

GateSet GateSet::standard() {
  GateSet gs;
  for (const char* n : {"H", "X", "Y", "Z", "S", "Sdg", "T", "Tdg"}) gs.add(n, {1, 0, false});
  for (const char* n : {"RX", "RY", "RZ"}) gs.add(n, {1, 1, false});
  gs.add("CX", {2, 0, false});
  gs.add("CZ", {2, 0, true});
  gs.add("SWAP", {2, 0, true});
  gs.add("CCX", {3, 0, false});
  return gs;
}

GateSet GateSet::benchmark() {
  GateSet gs;
  gs.add("T", {1, 0, false});
  gs.add("H", {1, 0, false});
  gs.add("CX", {2, 0, false});
  return gs;
}

void GateSet::add(const std::string& name, GateSpec spec) {
  if (spec.arity == 0) throw CircuitError("gate " + name + " has arity 0");
  if (spec.symmetric && spec.arity != 2) throw CircuitError("only two-qubit gates can be symmetric");
  if (name.empty() || name.find('(') != std::string::npos) throw CircuitError("invalid gate name '" + name + "'");
  gates_[name] = spec;
}

const GateSpec* GateSet::find(std::string_view name) const {
  auto it = gates_.find(name);
  return it == gates_.end() ? nullptr : &it->second;
}

std::vector<std::string> GateSet::names() const {
  std::vector<std::string> out;
  for (const auto& [n, s] : gates_) out.push_back(n);
  return out;
}

std::size_t GateSet::max_arity() const {
  std::size_t m = 0;
  for (const auto& [n, s] : gates_) m = std::max(m, s.arity);
  return m;
}

std::string gate_weight(const Gate& g) {
  if (g.params.empty()) return g.op;
  std::string w = g.op + "(";
  for (std::size_t i = 0; i < g.params.size(); ++i) {
    char buf[64];
    double v = g.params[i] == 0.0 ? 0.0 : g.params[i];  // no "-0.000000000"
    std::snprintf(buf, sizeof buf, "%.9f", v);
    if (i) w += ",";
    w += buf;
  }
  return w + ")";
}

PortGraph circuit_to_portgraph(const Circuit& c, const GateSet& gs) {
  PortGraphBuilder b;
  // last (vertex, operand) seen on each qubit
  std::vector<std::pair<VertexId, std::size_t>> last(c.num_qubits, {kNoVertex, 0});
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    const GateSpec* spec = gs.find(g.op);
    std::string where = "gate " + std::to_string(i) + " (" + g.op + "): ";
    if (!spec) throw CircuitError(where + "unknown gate");
    if (g.qubits.size() != spec->arity) throw CircuitError(where + "wrong number of qubits");
    if (g.params.size() != spec->params) throw CircuitError(where + "wrong number of parameters");
    for (std::size_t k = 0; k < g.qubits.size(); ++k) {
      if (g.qubits[k] >= c.num_qubits) throw CircuitError(where + "qubit index out of range");
      for (std::size_t j = 0; j < k; ++j)
        if (g.qubits[j] == g.qubits[k]) throw CircuitError(where + "repeated qubit");
    }
    std::vector<Port> ports;
    for (std::size_t k = 0; k < spec->arity; ++k) {
      ports.push_back(in_port(k));
      ports.push_back(out_port(k));
    }
    VertexId v = b.add_vertex(std::move(ports), VertexLabel{gate_weight(g), -1});
    for (std::size_t k = 0; k < g.qubits.size(); ++k) {
      auto [u, ku] = last[g.qubits[k]];
      if (u != kNoVertex) b.add_edge({u, out_port(ku)}, {v, in_port(k)});
      last[g.qubits[k]] = {v, k};
    }
  }
  return b.build();
}

namespace {

Gate parse_weight(const std::optional<std::string>& w, const GateSet& gs, VertexId v) {
  std::string where = "vertex " + std::to_string(v) + ": ";
  if (!w) throw CircuitError(where + "vertex has no gate weight");
  Gate g;
  auto open = w->find('(');
  g.op = w->substr(0, open);
  if (open != std::string::npos) {
    if (w->back() != ')') throw CircuitError(where + "malformed parameter list");
    std::string body = w->substr(open + 1, w->size() - open - 2);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto comma = body.find(',', pos);
      std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      char* end = nullptr;
      double x = std::strtod(item.c_str(), &end);
      if (item.empty() || *end != '\0') throw CircuitError(where + "malformed parameter '" + item + "'");
      g.params.push_back(x);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  const GateSpec* spec = gs.find(g.op);
  if (!spec) throw CircuitError(where + "unknown gate " + g.op);
  if (g.params.size() != spec->params) throw CircuitError(where + "wrong number of parameters");
  return g;
}

}  // namespace

Circuit portgraph_to_circuit(const PortGraph& g, const GateSet& gs) {
  const std::size_t n = g.num_vertices();
  std::vector<Gate> gates(n);
  std::vector<std::size_t> arity(n);
  for (VertexId v = 0; v < n; ++v) {
    gates[v] = parse_weight(g.label(v).weight, gs, v);
    arity[v] = gs.find(gates[v].op)->arity;
    auto ps = g.ports(v);
    if (ps.size() != 2 * arity[v]) throw CircuitError("vertex " + std::to_string(v) + ": port count does not match the gate");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      Port want_partner = static_cast<Port>(i % 2 == 0 ? i + 1 : i - 1);
      if (ps[i].port != i || ps[i].partner != want_partner)
        throw CircuitError("vertex " + std::to_string(v) + ": ports are not i_k/o_k paired");
    }
  }

  // in_src[v][k]: (u, k') feeding operand k of v, or kNoVertex
  std::vector<std::vector<std::pair<VertexId, std::size_t>>> in_src(n);
  for (VertexId v = 0; v < n; ++v) in_src[v].assign(arity[v], {kNoVertex, 0});
  std::vector<std::vector<VertexId>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& e : g.edges()) {
    Endpoint from = e.a, to = e.b;
    if (from.port % 2 == 0) std::swap(from, to);
    if (from.port % 2 != 1 || to.port % 2 != 0) throw CircuitError("edge does not join an output to an input");
    in_src[to.vertex][to.port / 2] = {from.vertex, from.port / 2};
    succ[from.vertex].push_back(to.vertex);
    ++indeg[to.vertex];
  }

  std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
  for (VertexId v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<VertexId> order;
  while (!ready.empty()) {
    VertexId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VertexId s : succ[v])
      if (--indeg[s] == 0) ready.push(s);
  }
  if (order.size() != n) throw CircuitError("wires form a cycle");

  Circuit c;
  std::vector<std::vector<std::uint32_t>> wire(n);
  for (VertexId v : order) {
    Gate gate = gates[v];
    wire[v].resize(arity[v]);
    for (std::size_t k = 0; k < arity[v]; ++k) {
      auto [u, ku] = in_src[v][k];
      wire[v][k] = u == kNoVertex ? c.num_qubits++ : wire[u][ku];
      gate.qubits.push_back(wire[v][k]);
    }
    c.gates.push_back(std::move(gate));
  }
  return c;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

Circuit from_json(const json& j) {
  auto fail = [](const std::string& what) { return ParseError(0, what); };
  if (!j.is_object()) throw fail("circuit must be a JSON object");
  if (!j.contains("num_qubits")) throw fail("missing field num_qubits");
  const auto& nq = j["num_qubits"];
  if (!nq.is_number_integer() || nq.get<std::int64_t>() < 0 || nq.get<std::int64_t>() > 0xFFFFFFFFLL)
    throw fail("field num_qubits must be a non-negative integer");
  Circuit c;
  c.num_qubits = nq.get<std::uint32_t>();
  if (!j.contains("gates")) throw fail("missing field gates");
  const auto& gates = j["gates"];
  if (!gates.is_array()) throw fail("field gates must be an array");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& jg = gates[i];
    std::string at = "gates[" + std::to_string(i) + "]";
    if (!jg.is_object()) throw fail(at + " must be an object");
    if (!jg.contains("op") || !jg["op"].is_string()) throw fail(at + ".op must be a string");
    if (!jg.contains("qubits") || !jg["qubits"].is_array()) throw fail(at + ".qubits must be an array");
    Gate g;
    g.op = jg["op"].get<std::string>();
    for (const auto& q : jg["qubits"]) {
      if (!q.is_number_integer() || q.get<std::int64_t>() < 0 || q.get<std::int64_t>() >= c.num_qubits)
        throw fail(at + ".qubits holds an index outside [0, num_qubits)");
      auto qi = q.get<std::uint32_t>();
      if (std::find(g.qubits.begin(), g.qubits.end(), qi) != g.qubits.end()) throw fail(at + ".qubits repeats a qubit");
      g.qubits.push_back(qi);
    }
    if (jg.contains("params")) {
      if (!jg["params"].is_array()) throw fail(at + ".params must be an array");
      for (const auto& p : jg["params"]) {
        if (!p.is_number()) throw fail(at + ".params must hold numbers");
        g.params.push_back(p.get<double>());
      }
    }
    c.gates.push_back(std::move(g));
  }
  return c;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

std::string emit_circuit(const Circuit& c) {
  nlohmann::ordered_json j;
  j["num_qubits"] = c.num_qubits;
  j["gates"] = nlohmann::ordered_json::array();
  for (const auto& g : c.gates) {
    nlohmann::ordered_json jg;
    jg["op"] = g.op;
    jg["qubits"] = g.qubits;
    if (!g.params.empty()) jg["params"] = g.params;
    j["gates"].push_back(std::move(jg));
  }
  return j.dump();
}

std::vector<Circuit> parse_circuit_lines(std::string_view text, std::vector<std::size_t>* lines) {
  std::vector<Circuit> out;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view row = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line;
    if (row.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(parse_circuit(row));
    } catch (const ParseError& e) {
      throw ParseError(line, e.what());
    }
    if (lines) lines->push_back(line);
  }
  return out;
}

std::string emit_circuit_lines(const std::vector<Circuit>& cs) {
  std::string out;
  for (const auto& c : cs) {
    out += emit_circuit(c);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Uniform integer in [0, n) by rejection, independent of the standard
// library's distribution implementations.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

}  // namespace

Circuit random_circuit(std::uint32_t q, std::size_t n_gates, const GateSet& gs, std::uint64_t seed) {
  if (gs.empty()) throw CircuitError("gate set is empty");
  if (q < gs.max_arity()) throw CircuitError("qubit count is below the gate set's largest arity");
  std::mt19937_64 rng(seed);
  auto names = gs.names();
  Circuit c;
  c.num_qubits = q;
  std::vector<std::uint32_t> pool(q);
  for (std::size_t i = 0; i < n_gates; ++i) {
    Gate g;
    g.op = names[below(rng, names.size())];
    const GateSpec& spec = *gs.find(g.op);
    for (std::uint32_t k = 0; k < q; ++k) pool[k] = k;
    for (std::size_t k = 0; k < spec.arity; ++k) {
      auto j = k + below(rng, q - k);
      std::swap(pool[k], pool[j]);
      g.qubits.push_back(pool[k]);
    }
    for (std::size_t k = 0; k < spec.params; ++k) g.params.push_back(static_cast<double>(below(rng, 32)) / 16.0);
    c.gates.push_back(std::move(g));
  }
  return c;
}

std::vector<Circuit> expand_symmetries(const Circuit& c, const GateSet& gs) {
  std::vector<std::size_t> sym;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const GateSpec* s = gs.find(c.gates[i].op);
    if (s && s->symmetric && c.gates[i].qubits.size() == 2) sym.push_back(i);
  }
  if (sym.size() > 16) throw CircuitError("too many symmetric gates to expand");
  std::vector<Circuit> out;
  for (std::uint32_t mask = 0; mask < (1u << sym.size()); ++mask) {
    Circuit v = c;
    for (std::size_t b = 0; b < sym.size(); ++b)
      if (mask & (1u << b)) std::swap(v.gates[sym[b]].qubits[0], v.gates[sym[b]].qubits[1]);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace portmatch
