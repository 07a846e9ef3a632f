#include "doctest.h"

#include <algorithm>

#include "compiler/compiler.hpp"
#include "test_util.hpp"

using namespace benenson;
using namespace benenson::testutil;

namespace {

void check_exhaustive(const Automaton& aut, const LayeredBp& bp) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bp.n); ++mask) {
    bits x = bits_from_counter(mask, bp.n);
    REQUIRE(run(aut, x).accepted == (eval_layered(bp, x) == 1));
  }
}

void check_exhaustive(const Automaton& aut, const GeneralBp& bp) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bp.n); ++mask) {
    bits x = bits_from_counter(mask, bp.n);
    REQUIRE(run(aut, x).accepted == (eval_general(bp, x) == 1));
  }
}

GeneralBp sample_general9() {
  GeneralBp bp;
  bp.n = 4;
  bp.start = 1;
  auto var = [](int i, int g0, int g1) {
    BpNode node;
    node.kind = BpNodeKind::Variable;
    node.var = i;
    node.goto0 = g0;
    node.goto1 = g1;
    return node;
  };
  BpNode accept;
  accept.kind = BpNodeKind::Accept;
  BpNode reject;
  reject.kind = BpNodeKind::Reject;
  bp.nodes = {var(1, 2, 3), var(2, 5, 6), var(3, 5, 6), var(4, 7, 8),
              var(2, 8, 9), var(4, 9, 7), reject, accept, reject};
  return bp;
}

}  // namespace

TEST_CASE("segment codec invariants") {
  SegmentCodec codec(Alphabet("ACGT"), 4, 10);
  CHECK(codec.marker() == 'A');
  CHECK(codec.capacity() == 27);
  std::vector<std::string> seen;
  for (int i = 0; i < 27; ++i) {
    std::string code = codec.code(i);
    CHECK(code.size() == 4);
    CHECK(code[0] == 'A');
    CHECK(code.substr(1).find('A') == std::string::npos);
    CHECK(std::find(seen.begin(), seen.end(), code) == seen.end());
    seen.push_back(code);
    std::string seg = codec.segment(i);
    CHECK(seg.size() == 10);
    CHECK(seg.substr(1).find('A') == std::string::npos);
  }
  CHECK_THROWS_AS(codec.code(27), invariant_error);
  CHECK_THROWS_AS(SegmentCodec(Alphabet("AC"), 4, 10), precondition_error);
}

TEST_CASE("general compilation instantiates the size formulas") {
  GeneralBp bp = sample_general9();
  auto result = compile_general(bp, Alphabet("ACGT"));
  CHECK(result.report.sticky_size == 2);
  CHECK(result.report.max_cut == 16);
  CHECK(result.report.length == 18);
  CHECK(result.automaton.length() == 18);
  CHECK(result.report.accept_relocated);  // accept was node 8 of 9
  CHECK(is_deterministic(result.automaton));
  check_exhaustive(result.automaton, bp);
}

TEST_CASE("general compilation accepts everything for a one-node program") {
  GeneralBp bp;
  bp.n = 1;
  bp.start = 1;
  BpNode accept;
  accept.kind = BpNodeKind::Accept;
  bp.nodes = {accept};
  auto result = compile_general(bp, Alphabet("ACGT"));
  CHECK(result.automaton.length() == 0);
  CHECK(result.automaton.accept_pos() == 0);
  CHECK(run(result.automaton, {0}).accepted);
  CHECK(run(result.automaton, {1}).accepted);
}

TEST_CASE("general compilation enforces its preconditions") {
  GeneralBp bp = sample_general9();
  bp.start = 2;
  CHECK_THROWS_AS(compile_general(bp, Alphabet("ACGT")), precondition_error);
  GeneralBp two_accepts = sample_general9();
  two_accepts.nodes[6].kind = BpNodeKind::Accept;
  CHECK_THROWS_AS(compile_general(two_accepts, Alphabet("ACGT")), precondition_error);
}

TEST_CASE("general compilation of random programs matches the walk") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    LayeredBp layered = random_layered(seed, 4, 3, 4);
    GeneralBp bp = to_general(layered);
    auto result = compile_general(bp, Alphabet("ACGT"));
    CHECK(is_deterministic(result.automaton));
    check_exhaustive(result.automaton, bp);
    CHECK(result.report.length ==
          static_cast<std::int64_t>(bp.nodes.size()) * result.report.sticky_size);
  }
}

TEST_CASE("fixed-width compilation instantiates the size formulas") {
  LayeredBp bp = random_layered(3, 4, 3, 5);
  auto result = compile_fixed_width(bp, Alphabet("ACGT"));
  // n(2J-1)^2 = 100 combinations force S = 4 over a 4-symbol alphabet.
  CHECK(result.report.sticky_size == 4);
  CHECK(result.report.max_cut == 20);
  CHECK(result.report.length == 5 * 3 * 4);
  CHECK(result.report.sparseness_bound == 25);
  CHECK(result.report.measured_sparseness <= 25);
}

TEST_CASE("fixed-width compilation matches the walk exhaustively") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    int width = 2 + static_cast<int>(seed % 2);
    LayeredBp bp = random_layered(seed, 4, width, 3 + static_cast<int>(seed % 4));
    auto result = compile_fixed_width(bp, Alphabet("ACGT"));
    CHECK(is_deterministic(result.automaton));
    check_exhaustive(result.automaton, bp);
  }
}

TEST_CASE("fixed-width compilation of a sink-only program") {
  LayeredBp bp;
  bp.n = 2;
  bp.width = 3;
  bp.layers = 1;
  bp.accept = {false, true, false};
  auto constant0 = compile_fixed_width(bp, Alphabet("ACGT"));
  CHECK_FALSE(run(constant0.automaton, {0, 0}).accepted);
  bp.accept = {true, false, false};
  auto constant1 = compile_fixed_width(bp, Alphabet("ACGT"));
  CHECK(constant1.automaton.accept_pos() == 0);
  CHECK(run(constant1.automaton, {1, 0}).accepted);
}

TEST_CASE("constant-range compilation instantiates the size formulas") {
  LayeredBp bp = random_layered(5, 4, 3, 4);
  auto result = compile_fixed_width_constd(bp, Alphabet("ACGT"));
  CHECK(result.report.sticky_size == 6);  // 1 + ceil(log3(100))
  CHECK(result.report.max_cut == 5);
  CHECK(result.report.seg_len == 6);  // smallest D*k+1 >= S
  CHECK(result.report.length == 4 * 3 * 6);
  CHECK(result.report.nominal_length == 4 * 3 * 6);
  CHECK(is_deterministic(result.automaton));
  check_exhaustive(result.automaton, bp);
}

TEST_CASE("constant-range compilation matches the walk for many programs") {
  for (std::uint64_t seed = 1; seed <= 16; ++seed) {
    int width = 2 + static_cast<int>(seed % 2);
    LayeredBp bp = random_layered(seed, 3, width, 3 + static_cast<int>(seed % 3));
    auto result = compile_fixed_width_constd(bp, Alphabet("ACGT"));
    CHECK(is_deterministic(result.automaton));
    check_exhaustive(result.automaton, bp);
  }
}

TEST_CASE("segment cuts chain through skip rules at the documented offsets") {
  // Width 3 gives cutting range 5; doubling the segment length gives m = 11.
  // The walk below reaches a node whose 0-branch cuts two symbols, which the
  // skip rules then carry across two whole segments.
  LayeredBp bp;
  bp.n = 2;
  bp.width = 3;
  bp.layers = 4;
  bp.steps = {
      {{1, 2, 2}, {1, 1, 1}, {1, 3, 3}},
      {{2, 1, 3}, {2, 1, 3}, {2, 2, 2}},
      {{1, 3, 3}, {1, 1, 2}, {1, 2, 1}},
  };
  bp.accept = {false, false, true};
  CompileOptions options;
  options.seg_multiplier = 2;
  auto result = compile_fixed_width_constd(bp, Alphabet("ACGT"), options);
  REQUIRE(result.report.max_cut == 5);
  REQUIRE(result.report.seg_len == 11);

  // Walk x = 00: layer-1 node 1 jumps to node 2 of layer 2 (4 segments in),
  // whose 0-branch targets node 1 of layer 3 two segments ahead.
  bits x{0, 0};
  std::int64_t node22 = 4 * 11;  // slot 5, 0-based offset
  auto reach = reachable_offsets(result.automaton, x);
  auto has = [&](std::int64_t offset) {
    return std::find(reach.begin(), reach.end(), offset) != reach.end();
  };
  REQUIRE(has(node22));
  for (std::int64_t delta : {2, 7, 12, 17, 22}) CHECK(has(node22 + delta));
  // Only the final chain offset is segment-aligned and marker-initial.
  for (std::int64_t delta : {2, 7, 12, 17}) {
    auto window = sticky_end(result.automaton, node22 + delta);
    REQUIRE(window.has_value());
    CHECK((*window)[0] != 'A');
  }
  auto landing = sticky_end(result.automaton, node22 + 22);
  REQUIRE(landing.has_value());
  CHECK((*landing)[0] == 'A');
  CHECK(result.automaton.rules_for(*landing) != nullptr);
  check_exhaustive(result.automaton, bp);
}

TEST_CASE("skip invariant: any in-segment cut resynchronizes d segments later") {
  LayeredBp bp = random_layered(9, 3, 3, 3);
  auto result = compile_fixed_width_constd(bp, Alphabet("ACGT"));
  const Automaton& aut = result.automaton;
  int m = result.report.seg_len;
  int D = aut.max_cut();
  int segments = static_cast<int>(aut.length()) / m;
  bits x{0, 0, 0};
  for (int q = 0; q + 1 < segments; ++q) {
    for (int d = 1; d <= D; ++d) {
      if (q + d >= segments) continue;
      // Pretend a segment rule cut d symbols at the start of segment q and
      // follow skip rules only.
      std::int64_t at = static_cast<std::int64_t>(q) * m + d;
      std::int64_t target = static_cast<std::int64_t>(q + d) * m;
      int guard = 0;
      while (at < target && guard++ < 1000) {
        auto window = sticky_end(aut, at);
        REQUIRE(window.has_value());
        REQUIRE((*window)[0] != 'A');
        at += D;
      }
      CHECK(at == target);
    }
  }
}

TEST_CASE("exhaustive skip windows keep the compilation equivalent") {
  LayeredBp bp = random_layered(11, 2, 2, 3);
  CompileOptions exhaustive;
  exhaustive.exhaustive_skip_windows = true;
  auto lazy = compile_fixed_width_constd(bp, Alphabet("ACGT"));
  auto full = compile_fixed_width_constd(bp, Alphabet("ACGT"), exhaustive);
  CHECK(full.automaton.rules().size() > lazy.automaton.rules().size());
  CHECK(is_deterministic(full.automaton));
  check_exhaustive(full.automaton, bp);
}

TEST_CASE("permutation compilation instantiates the size formulas") {
  LayeredBp bp = normalized_pbp(2, 3, 5, 4, 2);
  auto result = compile_permutation(bp, Alphabet("ACGT"));
  CHECK(result.report.sticky_size == 4);  // 1 + ceil(log3(27))
  CHECK(result.report.max_cut == 9);
  CHECK(result.report.seg_len == 10);
  CHECK(result.report.sparseness_bound == 9);
  CHECK_FALSE(result.report.alignment_pad);
  CHECK(result.report.length == 4 * 5 * 10);
  CHECK(is_deterministic(result.automaton));
  check_exhaustive(result.automaton, bp);
}

TEST_CASE("permutation compilation requires identity goto0") {
  LayeredBp bp = random_permutation_bp(4, 3, 3, 4);
  if (!goto0_is_identity(bp))
    CHECK_THROWS_AS(compile_permutation(bp, Alphabet("ACGT")), precondition_error);
  LayeredBp normal = normalize_goto0_identity(bp);
  auto result = compile_permutation(normal, Alphabet("ACGT"));
  check_exhaustive(result.automaton, normal);
}

TEST_CASE("permutation compilation handles an accepting start node with a pad") {
  // accept == start slot forces the alignment segment.
  LayeredBp bp = normalized_pbp(6, 3, 3, 4, 1);
  REQUIRE(eval_layered(bp, {0, 0, 0}) == 1);
  auto result = compile_permutation(bp, Alphabet("ACGT"));
  CHECK(result.report.alignment_pad);
  CHECK(result.report.length == (4 * 3 + 1) * static_cast<std::int64_t>(result.report.seg_len));
  CHECK(is_deterministic(result.automaton));
  check_exhaustive(result.automaton, bp);
}

TEST_CASE("the alignment segment gets its own rules when no key jumps a full layer") {
  // goto1 cycles every layer, so no (variable, full-layer) key exists and
  // the alignment segment cannot piggyback on an existing code.
  LayeredBp bp;
  bp.n = 2;
  bp.width = 3;
  bp.layers = 3;
  bp.steps = {
      {{1, 1, 2}, {1, 2, 3}, {1, 3, 1}},
      {{2, 1, 2}, {2, 2, 3}, {2, 3, 1}},
  };
  bp.accept = {true, false, false};  // forces the pad
  REQUIRE(goto0_is_identity(bp));
  auto result = compile_permutation(bp, Alphabet("ACGT"));
  REQUIRE(result.report.alignment_pad);
  bool has_full_layer_key = false;
  for (const auto& seg : result.report.segments)
    if (seg.label.rfind("node", 0) == 0 && seg.offset == 0) has_full_layer_key = true;
  CHECK_FALSE(has_full_layer_key);
  check_exhaustive(result.automaton, bp);
  // The alignment segment's sticky end jumps one full layer on both bits.
  auto window = sticky_end(result.automaton, 0);
  REQUIRE(window.has_value());
  const auto* pad_rules = result.automaton.rules_for(*window);
  REQUIRE(pad_rules != nullptr);
  REQUIRE(pad_rules->size() == 2);
  for (std::size_t idx : *pad_rules)
    CHECK(result.automaton.rules()[idx].dist == bp.width);
}

TEST_CASE("permutation compilation across random programs and accept nodes") {
  for (std::uint64_t seed = 1; seed <= 18; ++seed) {
    int width = 2 + static_cast<int>(seed % 3);
    int accept = 1 + static_cast<int>(seed % width);
    LayeredBp bp = normalized_pbp(seed, 3, width, 3 + static_cast<int>(seed % 3), accept);
    auto result = compile_permutation(bp, Alphabet("ACGT"));
    CHECK(is_deterministic(result.automaton));
    CHECK(result.report.measured_sparseness <= result.report.sparseness_bound);
    check_exhaustive(result.automaton, bp);
  }
}

TEST_CASE("1-sparse compilation instantiates the size formulas") {
  LayeredBp bp = normalized_pbp(7, 22, 3, 5, 3);
  auto result = compile_sparse1(bp, Alphabet("ACGT"));
  CHECK(result.report.sticky_size == 4);  // 1 + ceil(log3(22 + 5))
  CHECK(result.report.max_cut == 9);
  CHECK(result.report.seg_len == 10);
  CHECK(result.report.sparseness_bound == 1);
  CHECK(result.report.measured_sparseness == 1);
  CHECK(result.report.length == 2 * 5 * 3 * 10);
}

TEST_CASE("a seven-symbol sticky end covers eighty-one inputs at width five") {
  auto sticky_for = [](int n) {
    LayeredBp bp = normalized_pbp(14, n, 5, 2, 2);
    return compile_permutation(bp, Alphabet("ACGT")).report.sticky_size;
  };
  CHECK(sticky_for(81) == 7);
  CHECK(sticky_for(82) == 8);
}

TEST_CASE("1-sparse compilation matches the walk exhaustively") {
  for (std::uint64_t seed = 1; seed <= 18; ++seed) {
    int width = 2 + static_cast<int>(seed % 3);
    int accept = 1 + static_cast<int>(seed % width);
    LayeredBp bp = normalized_pbp(seed + 100, 3, width, 3 + static_cast<int>(seed % 3), accept);
    auto result = compile_sparse1(bp, Alphabet("ACGT"));
    CHECK(is_deterministic(result.automaton));
    CHECK(result.report.measured_sparseness == 1);
    check_exhaustive(result.automaton, bp);
    if (accept == 1) CHECK(result.report.alignment_pad);
  }
}

TEST_CASE("single-layer permutation programs compile to constants") {
  // Accept at the start node accepts everything at offset zero.
  LayeredBp all = normalized_pbp(5, 2, 3, 1, 1);
  auto yes = compile_permutation(all, Alphabet("ACGT"));
  CHECK(yes.automaton.accept_pos() == 0);
  CHECK_FALSE(yes.report.alignment_pad);
  CHECK(run(yes.automaton, {0, 0}).accepted);
  // Accept elsewhere is never reached.
  LayeredBp none = normalized_pbp(5, 2, 3, 1, 2);
  auto no = compile_permutation(none, Alphabet("ACGT"));
  CHECK(no.automaton.accept_pos() > 0);
  CHECK_FALSE(run(no.automaton, {1, 1}).accepted);
  auto no_sparse = compile_sparse1(none, Alphabet("ACGT"));
  CHECK_FALSE(run(no_sparse.automaton, {1, 1}).accepted);
}

TEST_CASE("1-sparse compilation needs width at least two") {
  LayeredBp bp = normalized_pbp(3, 2, 1, 3, 1);
  CHECK_THROWS_AS(compile_sparse1(bp, Alphabet("ACGT")), precondition_error);
}

TEST_CASE("constant-range constructions refuse binary alphabets") {
  LayeredBp bp = normalized_pbp(3, 2, 2, 3, 2);
  CHECK_THROWS_AS(compile_fixed_width_constd(bp, Alphabet("ab")), precondition_error);
  CHECK_THROWS_AS(compile_permutation(bp, Alphabet("ab")), precondition_error);
  CHECK_THROWS_AS(compile_sparse1(bp, Alphabet("ab")), precondition_error);
}

TEST_CASE("three-symbol alphabets compile correctly") {
  for (std::uint64_t seed = 40; seed <= 46; ++seed) {
    LayeredBp bp = normalized_pbp(seed, 3, 3, 4, 1 + static_cast<int>(seed % 3));
    auto result = compile_sparse1(bp, Alphabet("abc"));
    check_exhaustive(result.automaton, bp);
    auto perm = compile_permutation(bp, Alphabet("abc"));
    check_exhaustive(perm.automaton, bp);
  }
}

TEST_CASE("compilation reports carry an audited segment map") {
  LayeredBp bp = normalized_pbp(8, 3, 3, 3, 2);
  auto result = compile_sparse1(bp, Alphabet("ACGT"));
  // Offsets line up with segment boundaries and cover the whole state.
  std::int64_t expected = 0;
  for (const auto& seg : result.report.segments) {
    CHECK(seg.offset == expected);
    expected += static_cast<std::int64_t>(seg.code.size());
  }
  CHECK(expected == result.automaton.length());
  std::string text = report_text(result.report);
  CHECK(text.find("construction sparse1") != std::string::npos);
  CHECK(text.find("sparseness-bound 1") != std::string::npos);
}

TEST_CASE("the toy single-variable function compiles under every construction") {
  // f(x) = x1 as a width-2 program.
  LayeredBp bp;
  bp.n = 1;
  bp.width = 2;
  bp.layers = 2;
  bp.steps = {{{1, 1, 2}, {1, 2, 1}}};
  bp.accept = {false, true};
  auto fixed = compile_fixed_width(bp, Alphabet("ACGT"));
  auto constd = compile_fixed_width_constd(bp, Alphabet("ACGT"));
  auto perm = compile_permutation(bp, Alphabet("ACGT"));
  auto sparse = compile_sparse1(bp, Alphabet("ACGT"));
  for (const auto* result : {&fixed, &constd, &perm, &sparse}) {
    CHECK(run(result->automaton, {1}).accepted);
    CHECK_FALSE(run(result->automaton, {0}).accepted);
  }
  GeneralBp general = to_general(bp);
  auto gen = compile_general(general, Alphabet("ACGT"));
  CHECK(run(gen.automaton, {1}).accepted);
  CHECK_FALSE(run(gen.automaton, {0}).accepted);
}
