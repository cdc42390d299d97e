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

// Quantum circuits as port graphs. A gate on n qubits becomes one vertex
// with ports i_k = 2k and o_k = 2k + 1 for k < n, paired i_k ~ o_k (the
// default consecutive pairing). Wires become edges o_k -> i_k'; circuit
// inputs and outputs stay open.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "portmatch/port_graph.hpp"

namespace portmatch {

struct GateSpec {
  std::size_t arity = 1;
  std::size_t params = 0;
  bool symmetric = false;  // two-qubit gate invariant under swapping its operands

  bool operator==(const GateSpec&) const = default;
};

class GateSet {
 public:
  /// H X Y Z S Sdg T Tdg, RX RY RZ (one parameter), CX, CZ and SWAP
  /// (symmetric), CCX.
  static GateSet standard();
  /// T, H and CX.
  static GateSet benchmark();

  /// Throws CircuitError for arity 0 or a symmetric gate of arity != 2.
  void add(const std::string& name, GateSpec spec);
  const GateSpec* find(std::string_view name) const;
  std::vector<std::string> names() const;  // sorted
  std::size_t max_arity() const;
  bool empty() const noexcept { return gates_.empty(); }

 private:
  std::map<std::string, GateSpec, std::less<>> gates_;
};

struct Gate {
  std::string op;
  std::vector<std::uint32_t> qubits;
  std::vector<double> params;

  bool operator==(const Gate&) const = default;
};

struct Circuit {
  std::uint32_t num_qubits = 0;
  std::vector<Gate> gates;

  bool operator==(const Circuit&) const = default;
};

constexpr Port in_port(std::size_t k) { return static_cast<Port>(2 * k); }
constexpr Port out_port(std::size_t k) { return static_cast<Port>(2 * k + 1); }

/// Vertex weight of a gate: its name, followed by its parameters printed
/// with nine decimals, e.g. "RZ(0.250000000)".
std::string gate_weight(const Gate& g);

/// Vertex i is gate i. Throws CircuitError on unknown gates, a wrong
/// operand or parameter count, or bad qubit indices.
PortGraph circuit_to_portgraph(const Circuit& c, const GateSet& gs);

/// Inverse of circuit_to_portgraph. Gates come out in the smallest-vertex
/// topological order, qubits are numbered by first use, so a circuit whose
/// qubits are numbered by first use and all carry a gate round-trips
/// exactly (parameters up to the nine-decimal weight). Throws CircuitError
/// when g is not a circuit or its wires form a cycle.
Circuit portgraph_to_circuit(const PortGraph& g, const GateSet& gs);

/// JSON form: {"num_qubits": q, "gates": [{"op": s, "qubits": [..],
/// "params": [..]}]}. Throws ParseError naming the offending field.
Circuit parse_circuit(std::string_view text);
std::string emit_circuit(const Circuit& c);
/// One circuit per non-blank line. Errors carry the 1-based line number.
/// `lines`, when given, receives the line number of each circuit.
std::vector<Circuit> parse_circuit_lines(std::string_view text, std::vector<std::size_t>* lines = nullptr);
std::string emit_circuit_lines(const std::vector<Circuit>& cs);

/// Seeded generator with a fixed algorithm (mt19937_64 plus rejection
/// sampling), so the output is identical on every platform. Gate names are
/// drawn uniformly from gs.names(), operands uniformly without repetition,
/// parameters uniformly from {k/16 : 0 <= k < 32}. Throws CircuitError when
/// q is below the gate set's largest arity.
Circuit random_circuit(std::uint32_t q, std::size_t n_gates, const GateSet& gs, std::uint64_t seed);

/// Every variant obtained by swapping the operands of any subset of the
/// symmetric gates: 2^k circuits for k symmetric gates, the input first.
/// Throws CircuitError for more than 16 symmetric gates.
std::vector<Circuit> expand_symmetries(const Circuit& c, const GateSet& gs);

}  // namespace portmatch
