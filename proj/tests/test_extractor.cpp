#include "doctest.h"

#include <algorithm>

#include "barrington/barrington.hpp"
#include "compiler/compiler.hpp"
#include "extractor/extractor.hpp"
#include "test_util.hpp"

using namespace benenson;
using namespace benenson::testutil;

namespace {

Automaton toy_automaton() {
  return Automaton(Alphabet("abc"), 1, 2, 4, "abacbc",
                   {{1, 1, "ab", 2}, {1, 1, "ac", 4}}, 6);
}

PhiTable random_table(std::uint64_t seed, int range) {
  PhiTable t;
  t.range = range;
  for (int j = 0; j < range; ++j)
    t.rows.push_back(static_cast<int>(
        rng::below(seed, static_cast<std::uint64_t>(j) + 1, static_cast<std::uint64_t>(range) + 1)));
  return t;
}

std::vector<std::uint8_t> encode_table(const PhiTable& t) {
  int W = row_bits(t.range);
  std::vector<std::uint8_t> enc;
  for (int j = 0; j < t.range; ++j)
    for (int w = 0; w < W; ++w)
      enc.push_back(static_cast<std::uint8_t>((t.rows[static_cast<std::size_t>(j)] >> w) & 1));
  return enc;
}

PhiTable decode_wires(const std::vector<std::uint8_t>& values, const std::vector<int>& wires,
                      int range) {
  int W = row_bits(range);
  PhiTable t;
  t.range = range;
  for (int j = 0; j < range; ++j) {
    int v = 0;
    for (int w = 0; w < W; ++w)
      v |= values[static_cast<std::size_t>(wires[static_cast<std::size_t>(j * W + w)])] << w;
    t.rows.push_back(v);
  }
  return t;
}

// Largest offset of segment q+1 reachable from offset 0, as a plain
// reachability scan; the composition of tables must agree with it.
int last_position_oracle(const Automaton& aut, const bits& x, int q) {
  auto reach = reachable_offsets(aut, x);
  std::int64_t base = static_cast<std::int64_t>(q) * aut.max_cut();
  std::int64_t limit = std::min(base + aut.max_cut() - 1, aut.length());
  int best = -1;
  for (std::int64_t offset : reach)
    if (offset >= base && offset <= limit) best = std::max(best, static_cast<int>(offset - base));
  return best;
}

}  // namespace

TEST_CASE("table composition: identity, absorption, associativity") {
  for (int range : {3, 5, 8}) {
    PhiTable id = identity_table(range);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      PhiTable f = random_table(seed, range);
      CHECK(compose_tables(id, f).rows == f.rows);
      CHECK(compose_tables(f, id).rows == f.rows);
      PhiTable bottom;
      bottom.range = range;
      bottom.rows.assign(static_cast<std::size_t>(range), bottom.bottom());
      CHECK(compose_tables(f, bottom).rows == bottom.rows);
      CHECK(compose_tables(bottom, f).rows == bottom.rows);
      PhiTable g = random_table(seed + 100, range);
      PhiTable h = random_table(seed + 200, range);
      CHECK(compose_tables(compose_tables(f, g), h).rows ==
            compose_tables(f, compose_tables(g, h)).rows);
    }
  }
}

TEST_CASE("tables of a rule-free automaton are all bottom") {
  Automaton aut(Alphabet("abc"), 1, 2, 3, "abcabcabc", {}, 9);
  PhiTable t = compute_phi(aut, 1, {1});
  for (int row : t.rows) CHECK(row == t.bottom());
}

TEST_CASE("toy automaton table rows match the reachability oracle") {
  Automaton aut = toy_automaton();
  PhiTable active = compute_phi(aut, 1, {1});
  // Entering at 0, the chain 0 -> 2 -> 6 puts the last next-segment cut at
  // offset 6, two symbols into the second segment.
  CHECK(active.rows[0] == 2);
  // Entering at 2 (sticky "ac") jumps straight to 6.
  CHECK(active.rows[2] == 2);
  // Entering at 1 reveals "ba" which no rule matches.
  CHECK(active.rows[1] == active.bottom());
  PhiTable inactive = compute_phi(aut, 1, {0});
  for (int row : inactive.rows) CHECK(row == inactive.bottom());
  CHECK_THROWS_AS(compute_phi(aut, 0, {1}), precondition_error);
  CHECK_THROWS_AS(compute_phi(aut, 3, {1}), precondition_error);
}

TEST_CASE("composition of all tables tracks the deterministic walk") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Automaton aut = random_deterministic_automaton(seed);
    int segments = static_cast<int>((aut.length() + aut.max_cut() - 1) / aut.max_cut());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << aut.inputs()); ++mask) {
      bits x = bits_from_counter(mask, aut.inputs());
      PhiTable acc = identity_table(aut.max_cut());
      for (int q = 1; q < segments; ++q) {
        acc = compose_tables(acc, compute_phi(aut, q, x));
        int oracle = last_position_oracle(aut, x, q);
        if (oracle < 0)
          CHECK(acc.rows[0] == acc.bottom());
        else
          CHECK(acc.rows[0] == oracle);
      }
    }
  }
}

TEST_CASE("gadget A equals its table oracle on every input") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    Automaton aut = random_deterministic_automaton(seed, 3);
    int segments = static_cast<int>((aut.length() + aut.max_cut() - 1) / aut.max_cut());
    for (int q = 1; q < segments; ++q) {
      Fragment fragment;
      fragment.circuit.n = aut.inputs();
      GadgetInfo info;
      auto wires = build_gadget_a(fragment, aut, q, std::nullopt, &info, "A");
      fragment.circuit.output = wires[0];
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << aut.inputs()); ++mask) {
        bits x = bits_from_counter(mask, aut.inputs());
        auto values = eval_all_gates(fragment.circuit, x);
        PhiTable got = decode_wires(values, wires, aut.max_cut());
        PhiTable want = compute_phi(aut, q, x);
        CHECK(got.rows == want.rows);
      }
    }
  }
}

TEST_CASE("gadget A of a rule-free segment is a constant bottom encoding") {
  Automaton aut(Alphabet("abc"), 2, 2, 3, "abcabcabc", {}, 9);
  Fragment fragment;
  fragment.circuit.n = 2;
  GadgetInfo info;
  auto wires = build_gadget_a(fragment, aut, 1, std::nullopt, &info, "A");
  CHECK(info.relevant_vars.empty());
  for (const Gate& gate : fragment.circuit.gates) CHECK(gate.kind == GateKind::Const);
  auto values = eval_all_gates(fragment.circuit, {0, 0});
  PhiTable got = decode_wires(values, wires, 3);
  for (int row : got.rows) CHECK(row == got.bottom());
}

TEST_CASE("gadget A warns when a segment reads more variables than its width") {
  // Same-distance rules for three variables on one sticky end are
  // deterministic, yet the relevant set exceeds the cutting range of 2.
  std::vector<CuttingRule> rules;
  for (int var = 1; var <= 3; ++var) {
    rules.push_back({var, 0, "a", 1});
    rules.push_back({var, 1, "a", 1});
  }
  Automaton aut(Alphabet("abc"), 3, 1, 2, "aaaaaa", rules, 6);
  REQUIRE(is_deterministic(aut));
  Fragment fragment;
  fragment.circuit.n = 3;
  GadgetInfo info;
  auto wires = build_gadget_a(fragment, aut, 1, std::nullopt, &info, "A");
  CHECK(info.over_budget);
  CHECK(info.relevant_vars.size() == 3);
  // The oversized selector still matches the oracle.
  fragment.circuit.output = wires[0];
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    bits x = bits_from_counter(mask, 3);
    auto values = eval_all_gates(fragment.circuit, x);
    CHECK(decode_wires(values, wires, 2).rows == compute_phi(aut, 1, x).rows);
  }
  auto extracted = extract_circuit(aut);
  CHECK_FALSE(extracted.info.over_budget_segments.empty());
}

TEST_CASE("gadget B composes encoded tables") {
  for (int range : {3, 4, 6}) {
    int W = row_bits(range);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      PhiTable f = random_table(seed, range);
      PhiTable g = random_table(seed + 500, range);
      Fragment fragment;
      fragment.circuit.n = 2 * range * W;
      std::vector<int> first, second;
      for (int i = 0; i < range * W; ++i) {
        fragment.circuit.gates.push_back({GateKind::Input, i + 1, 0});
        first.push_back(static_cast<int>(fragment.circuit.gates.size()) - 1);
      }
      for (int i = 0; i < range * W; ++i) {
        fragment.circuit.gates.push_back({GateKind::Input, range * W + i + 1, 0});
        second.push_back(static_cast<int>(fragment.circuit.gates.size()) - 1);
      }
      fragment.circuit.names.assign(fragment.circuit.gates.size(), "");
      auto out = build_gadget_b(fragment, range, first, second, "B");
      bits x;
      for (auto b : encode_table(f)) x.push_back(b);
      for (auto b : encode_table(g)) x.push_back(b);
      auto values = eval_all_gates(fragment.circuit, x);
      PhiTable got = decode_wires(values, out, range);
      CHECK(got.rows == compose_tables(f, g).rows);
    }
  }
}

TEST_CASE("gadget C checks the first row against a constant") {
  int range = 5;
  int W = row_bits(range);
  for (int target = 0; target <= range; ++target) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      PhiTable f = random_table(seed, range);
      Fragment fragment;
      fragment.circuit.n = range * W;
      std::vector<int> wires;
      for (int i = 0; i < range * W; ++i) {
        fragment.circuit.gates.push_back({GateKind::Input, i + 1, 0});
        wires.push_back(static_cast<int>(fragment.circuit.gates.size()) - 1);
      }
      fragment.circuit.names.assign(fragment.circuit.gates.size(), "");
      auto out = build_gadget_c(fragment, range, wires, target, "C");
      bits x;
      for (auto b : encode_table(f)) x.push_back(b);
      auto values = eval_all_gates(fragment.circuit, x);
      CHECK(values[static_cast<std::size_t>(out[0])] == (f.rows[0] == target ? 1 : 0));
    }
  }
  // Identity table holds 0 in row 0.
  PhiTable id = identity_table(range);
  CHECK(id.rows[0] == 0);
}

TEST_CASE("extraction of the toy automaton gives back the projection") {
  auto result = extract_circuit(toy_automaton());
  CHECK(result.circuit.n == 1);
  CHECK(eval_circuit(result.circuit, {0}) == 0);
  CHECK(eval_circuit(result.circuit, {1}) == 1);
  CHECK(result.info.q_star == 2);
  CHECK(result.info.j_star == 2);
  CHECK(result.info.b_levels == 0);
}

TEST_CASE("accept position zero extracts to a constant-one circuit") {
  Automaton aut(Alphabet("abc"), 2, 1, 2, "aab", {{1, 1, "a", 1}}, 0);
  auto result = extract_circuit(aut);
  CHECK(eval_circuit(result.circuit, {0, 0}) == 1);
  CHECK(eval_circuit(result.circuit, {1, 1}) == 1);
}

TEST_CASE("extraction refuses nondeterministic automata") {
  Automaton aut(Alphabet("abc"), 2, 1, 2, "aab",
                {{1, 1, "a", 1}, {2, 1, "a", 2}}, 3);
  CHECK_THROWS_AS(extract_circuit(aut), precondition_error);
}

TEST_CASE("extraction matches runs on random deterministic automata") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Automaton aut = random_deterministic_automaton(seed);
    auto result = extract_circuit(aut);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << aut.inputs()); ++mask) {
      bits x = bits_from_counter(mask, aut.inputs());
      CHECK(eval_circuit(result.circuit, x) == (run(aut, x).accepted ? 1 : 0));
    }
  }
}

TEST_CASE("extraction round-trips compiled permutation programs") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    LayeredBp bp = normalized_pbp(seed, 3, 3, 4, 1 + static_cast<int>(seed % 3));
    auto compiled = compile_permutation(bp, Alphabet("ACGT"));
    auto extracted = extract_circuit(compiled.automaton);
    std::int64_t tables = extracted.info.table_count;
    std::int64_t padded = extracted.info.padded_count;
    CHECK(padded >= tables);
    CHECK((padded & (padded - 1)) == 0);
    int levels = 0;
    while ((std::int64_t{1} << levels) < padded) ++levels;
    CHECK(extracted.info.b_levels == levels);
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
      bits x = bits_from_counter(mask, 3);
      CHECK(eval_circuit(extracted.circuit, x) == (run(compiled.automaton, x).accepted ? 1 : 0));
    }
  }
}

TEST_CASE("extraction handles a circuit-compiled automaton end to end") {
  Circuit c = random_circuit_max_depth(5, 3, 4, 2);
  LayeredBp pbp = normalize_goto0_identity(barrington_compile(c));
  auto compiled = compile_sparse1(pbp, Alphabet("ACGT"));
  auto extracted = extract_circuit(compiled.automaton);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    bits x = bits_from_counter(mask, 3);
    CHECK(eval_circuit(extracted.circuit, x) == eval_circuit(c, x));
  }
}

TEST_CASE("extracted gates carry gadget-name prefixes") {
  LayeredBp bp = normalized_pbp(9, 2, 3, 3, 2);
  auto compiled = compile_permutation(bp, Alphabet("ACGT"));
  auto extracted = extract_circuit(compiled.automaton);
  std::string text = serialize_circuit(extracted.circuit);
  CHECK(text.find("A1_") != std::string::npos);
  CHECK(text.find("B1_0_") != std::string::npos);
  CHECK(text.find("C_") != std::string::npos);
  // The emitted text parses back to an equivalent circuit.
  Circuit again = parse_circuit(text);
  for (std::uint64_t mask = 0; mask < 4; ++mask) {
    bits x = bits_from_counter(mask, 2);
    CHECK(eval_circuit(again, x) == eval_circuit(extracted.circuit, x));
  }
}
