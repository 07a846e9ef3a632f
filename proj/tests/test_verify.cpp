#include "doctest.h"

#include "barrington/barrington.hpp"
#include "compiler/compiler.hpp"
#include "extractor/extractor.hpp"
#include "test_util.hpp"
#include "verify/verify.hpp"

using namespace benenson;
using namespace benenson::testutil;

namespace {

Circuit constant_circuit(int n, int value) {
  Circuit c;
  c.n = n;
  c.gates = {{GateKind::Const, value, 0}};
  c.output = 0;
  return c;
}

Circuit and_xy() {
  Circuit c;
  c.n = 2;
  c.gates = {{GateKind::Input, 1, 0}, {GateKind::Input, 2, 0}, {GateKind::And, 0, 1}};
  c.output = 2;
  return c;
}

}  // namespace

TEST_CASE("a circuit is equivalent to itself") {
  Circuit c = random_circuit(3, 4, 6);
  auto result = equivalence_exhaustive(evaluator_from(c), evaluator_from(c));
  CHECK(result.equal);
  CHECK(result.inputs_checked == 16);
  CHECK(result.line() == "PASS");
}

TEST_CASE("the conjunction matches its width-5 program on all four inputs") {
  Circuit c = and_xy();
  LayeredBp bp = barrington_compile(c);
  auto result = equivalence_exhaustive(evaluator_from(c), evaluator_from(bp));
  CHECK(result.equal);
  CHECK(result.inputs_checked == 4);
}

TEST_CASE("the toy automaton matches the projection circuit") {
  Automaton toy(Alphabet("abc"), 1, 2, 4, "abacbc", {{1, 1, "ab", 2}, {1, 1, "ac", 4}}, 6);
  Circuit proj;
  proj.n = 1;
  proj.gates = {{GateKind::Input, 1, 0}};
  proj.output = 0;
  auto result = equivalence_exhaustive(evaluator_from(toy), evaluator_from(proj));
  CHECK(result.equal);
}

TEST_CASE("counterexamples are minimal, verified, and well-formatted") {
  auto zero = evaluator_from(constant_circuit(3, 0));
  auto one = evaluator_from(constant_circuit(3, 1));
  auto result = equivalence_exhaustive(zero, one);
  REQUIRE_FALSE(result.equal);
  CHECK(result.counterexample == bits{0, 0, 0});
  CHECK(result.line() == "FAIL x=000 a=0 b=1");

  // First differing input in lexicographic order, not just any.
  Circuit x1;
  x1.n = 2;
  x1.gates = {{GateKind::Input, 1, 0}};
  x1.output = 0;
  Circuit x2;
  x2.n = 2;
  x2.gates = {{GateKind::Input, 2, 0}};
  x2.output = 0;
  auto diff = equivalence_exhaustive(evaluator_from(x1), evaluator_from(x2));
  REQUIRE_FALSE(diff.equal);
  CHECK(diff.counterexample == bits{0, 1});
}

TEST_CASE("parallel scans return the same counterexample as serial ones") {
  Circuit a = random_circuit(71, 6, 8);
  Circuit b = a;
  b.gates.push_back({GateKind::Not, b.output, 0});
  b.output = static_cast<int>(b.gates.size()) - 1;  // complement: differs everywhere
  auto serial = equivalence_exhaustive(evaluator_from(a), evaluator_from(b), 20, 1);
  auto parallel = equivalence_exhaustive(evaluator_from(a), evaluator_from(b), 20, 4);
  REQUIRE_FALSE(serial.equal);
  REQUIRE_FALSE(parallel.equal);
  CHECK(serial.counterexample == parallel.counterexample);

  Circuit c = random_circuit(72, 6, 8);
  auto equal_serial = equivalence_exhaustive(evaluator_from(c), evaluator_from(c), 20, 1);
  auto equal_parallel = equivalence_exhaustive(evaluator_from(c), evaluator_from(c), 20, 4);
  CHECK(equal_serial.equal);
  CHECK(equal_parallel.equal);
}

TEST_CASE("the exhaustive scan refuses oversized input spaces") {
  Circuit wide = constant_circuit(25, 1);
  CHECK_THROWS_AS(equivalence_exhaustive(evaluator_from(wide), evaluator_from(wide)),
                  precondition_error);
  CHECK_THROWS_AS(
      equivalence_exhaustive(evaluator_from(constant_circuit(2, 1)),
                             evaluator_from(constant_circuit(3, 1))),
      precondition_error);
}

TEST_CASE("random sampling is reproducible and finds constant mismatches") {
  auto zero = evaluator_from(constant_circuit(4, 0));
  auto one = evaluator_from(constant_circuit(4, 1));
  auto first = equivalence_random(zero, one, 100, 7);
  REQUIRE_FALSE(first.equal);
  CHECK(first.inputs_checked == 1);
  auto again = equivalence_random(zero, one, 100, 7);
  CHECK(again.counterexample == first.counterexample);

  Circuit c = random_circuit(9, 22, 10);
  auto sampled = equivalence_random(evaluator_from(c), evaluator_from(c), 200, 11);
  CHECK(sampled.equal);
  CHECK(sampled.inputs_checked == 200);
}

TEST_CASE("identical seeds give identical input sequences") {
  for (int trial = 0; trial < 32; ++trial) {
    bits a = rng::input_bits(99, static_cast<std::uint64_t>(trial), 70);
    bits b = rng::input_bits(99, static_cast<std::uint64_t>(trial), 70);
    CHECK(a == b);
  }
  CHECK(rng::input_bits(1, 0, 70) != rng::input_bits(2, 0, 70));
}

TEST_CASE("parameter audits accept every construction's report") {
  Alphabet sigma("ACGT");
  LayeredBp layered = random_layered(21, 4, 3, 4);
  CHECK(audit_parameters(compile_fixed_width(layered, sigma).report).pass);
  CHECK(audit_parameters(compile_fixed_width_constd(layered, sigma).report).pass);
  LayeredBp pbp = normalized_pbp(22, 3, 5, 4, 2);
  CHECK(audit_parameters(compile_permutation(pbp, sigma).report).pass);
  CHECK(audit_parameters(compile_sparse1(pbp, sigma).report).pass);
  GeneralBp general = to_general(layered);
  CHECK(audit_parameters(compile_general(general, sigma).report).pass);
}

TEST_CASE("parameter audits catch doctored reports") {
  Alphabet sigma("ACGT");
  LayeredBp pbp = normalized_pbp(23, 3, 3, 4, 2);
  CompilationReport report = compile_permutation(pbp, sigma).report;
  report.sticky_size += 1;
  auto audit = audit_parameters(report);
  CHECK_FALSE(audit.pass);
  CHECK(audit.discrepancies.size() == 1);
}

TEST_CASE("audit vectors: known parameter instantiations") {
  Alphabet sigma("ACGT");

  // Nine-node general program: S = 2, D = 16, L = 18.
  LayeredBp src = random_layered(31, 4, 3, 3);
  GeneralBp nine = to_general(src);
  REQUIRE(nine.nodes.size() == 9);
  auto general = compile_general(nine, sigma);
  CHECK(general.report.sticky_size == 2);
  CHECK(general.report.max_cut == 16);
  CHECK(general.report.length == 18);
  CHECK(audit_parameters(general.report).pass);

  // Width-5 1-sparse pipeline: D = 17 and S = 4 for up to 18 inputs.
  for (int n : {2, 10, 18}) {
    LayeredBp pbp = normalized_pbp(32, n, 5, 3, 2);
    auto sparse = compile_sparse1(pbp, sigma);
    CHECK(sparse.report.max_cut == 17);
    CHECK(sparse.report.sticky_size == 4);
    CHECK(audit_parameters(sparse.report).pass);
  }

  // Width-3 1-sparse program over 22 inputs: S = 4, D = 9.
  LayeredBp w3 = normalized_pbp(33, 22, 3, 4, 3);
  auto sparse22 = compile_sparse1(w3, sigma);
  CHECK(sparse22.report.sticky_size == 4);
  CHECK(sparse22.report.max_cut == 9);
  CHECK(audit_parameters(sparse22.report).pass);
}

TEST_CASE("round trip: circuit to program to automaton to circuit") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    int n = 2 + static_cast<int>(seed % 3);
    Circuit c = random_circuit_max_depth(seed, n, 5, 2);
    LayeredBp pbp = normalize_goto0_identity(barrington_compile(c));
    auto compiled = compile_permutation(pbp, Alphabet("ACGT"));
    auto extracted = extract_circuit(compiled.automaton);
    auto result = equivalence_exhaustive(evaluator_from(c), evaluator_from(extracted.circuit));
    CHECK(result.equal);
  }
}

TEST_CASE("nondeterministic automata cannot be wrapped") {
  Automaton bad(Alphabet("abc"), 2, 1, 2, "aab", {{1, 1, "a", 1}, {2, 1, "a", 2}}, 3);
  CHECK_THROWS_AS(evaluator_from(bad), precondition_error);
}
