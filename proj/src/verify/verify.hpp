#pragma once

#include <functional>
#include <memory>
#include <string>

#include "compiler/compiler.hpp"
#include "core/automaton.hpp"
#include "machines/branching.hpp"
#include "machines/circuit.hpp"

namespace benenson {

// Uniform evaluation handle over circuits, branching programs, and
// deterministic automata.
struct Evaluator {
  int n = 0;
  std::string label;
  std::function<int(const bits&)> eval;
};

Evaluator evaluator_from(const Circuit& c, std::string label = "circuit");
Evaluator evaluator_from(const GeneralBp& bp, std::string label = "bp");
Evaluator evaluator_from(const LayeredBp& bp, std::string label = "bp");
Evaluator evaluator_from(const Automaton& aut, std::string label = "automaton");

struct EquivalenceResult {
  bool equal = true;
  bits counterexample;
  int a_value = 0;
  int b_value = 0;
  std::uint64_t inputs_checked = 0;

  // PASS / FAIL x=<bits> a=<bit> b=<bit>
  std::string line() const;
};

// Compares on all 2^n inputs in lexicographic order; the smallest
// counterexample wins regardless of how work is split across jobs.
// Refuses when n exceeds the limit.
EquivalenceResult equivalence_exhaustive(const Evaluator& a, const Evaluator& b,
                                         int limit = 20, int jobs = 1);

// Seeded counter-based sampling; identical seeds give identical samples.
EquivalenceResult equivalence_random(const Evaluator& a, const Evaluator& b,
                                     std::uint64_t trials, std::uint64_t seed);

struct AuditResult {
  bool pass = true;
  std::vector<std::string> discrepancies;
};

// Recomputes the construction formulas from the report's inputs and compares
// them with the produced parameters. Zero tolerance.
AuditResult audit_parameters(const CompilationReport& report);

}  // namespace benenson
