#pragma once

#include <string>
#include <vector>

#include "common.hpp"

namespace benenson {

enum class GateKind { Input, Const, Not, And, Or };

// arg0: input index (1-based) for Input, value for Const, operand gate index
// otherwise. arg1: second operand for And/Or.
struct Gate {
  GateKind kind = GateKind::Const;
  int arg0 = 0;
  int arg1 = 0;
};

// Fan-in <= 2 combinational circuit. Gates are topologically ordered: every
// operand index precedes its user. Exactly one output gate.
struct Circuit {
  int n = 1;
  std::vector<Gate> gates;
  std::vector<std::string> names;  // parallel to gates; empty entries auto-name
  int output = 0;
};

void validate_circuit(const Circuit& c);

int eval_circuit(const Circuit& c, const bits& x);

// Gate values for every gate, in order. Used by tests that inspect
// multi-output fragments inside a single-output circuit.
std::vector<std::uint8_t> eval_all_gates(const Circuit& c, const bits& x);

// Longest input-to-output path counting every AND/OR/NOT gate.
int circuit_depth(const Circuit& c);
// Same, but NOT gates add nothing; this is the depth figure that determines
// the compiled branching-program length.
int and_or_depth(const Circuit& c);

Circuit parse_circuit(const std::string& text);
Circuit parse_circuit_file(const std::string& path);
std::string serialize_circuit(const Circuit& c);

}  // namespace benenson
