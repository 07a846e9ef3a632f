#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "benenson.h"

namespace {

const char* kToy =
    "benenson v1\n"
    "sigma abc\n"
    "n 1\nS 2\nD 4\np 6\n"
    "state abacbc\n"
    "rule 1 1 ab 2\n"
    "rule 1 1 ac 4\n";

const char* kAndCircuit =
    "circuit v1\n"
    "inputs 2\n"
    "let a = INPUT 1\n"
    "let b = INPUT 2\n"
    "let out = AND a b\n"
    "output out\n";

const char* kPermBp =
    "bp v1 permutation\n"
    "inputs 1\n"
    "width 2\n"
    "length 2\n"
    "node 1 1 var 1 goto0 1 goto1 2\n"
    "node 1 2 var 1 goto0 2 goto1 1\n"
    "accept 2 2\n";

const char* kFokI =
    "name FokI\n"
    "recognition GGATG\n"
    "top_cut 9\n"
    "bottom_cut 13\n";

std::string take(char* s) {
  std::string out = s ? s : "";
  ben_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("automaton lifecycle through the C interface") {
  ben_automaton* aut = nullptr;
  REQUIRE(ben_automaton_parse(kToy, &aut) == BEN_OK);
  int32_t n = 0, S = 0, D = 0;
  int64_t L = 0, p = 0;
  CHECK(ben_automaton_params(aut, &n, &S, &D, &L, &p) == BEN_OK);
  CHECK(n == 1);
  CHECK(S == 2);
  CHECK(D == 4);
  CHECK(L == 6);
  CHECK(p == 6);

  int deterministic = 0;
  CHECK(ben_automaton_is_deterministic(aut, &deterministic) == BEN_OK);
  CHECK(deterministic == 1);
  int32_t sparse = -1;
  CHECK(ben_automaton_sparseness(aut, &sparse) == BEN_OK);
  CHECK(sparse == 0);

  int accepted = 0;
  int64_t* offsets = nullptr;
  size_t count = 0;
  REQUIRE(ben_automaton_run(aut, "1", &accepted, &offsets, &count) == BEN_OK);
  CHECK(accepted == 1);
  REQUIRE(count == 3);
  CHECK(offsets[0] == 0);
  CHECK(offsets[1] == 2);
  CHECK(offsets[2] == 6);
  ben_i64_array_free(offsets);

  REQUIRE(ben_automaton_run(aut, "0", &accepted, nullptr, nullptr) == BEN_OK);
  CHECK(accepted == 0);
  CHECK(ben_automaton_run(aut, "01", &accepted, nullptr, nullptr) == BEN_ERR_PRECONDITION);

  char* text = nullptr;
  REQUIRE(ben_automaton_serialize(aut, &text) == BEN_OK);
  ben_automaton* again = nullptr;
  REQUIRE(ben_automaton_parse(text, &again) == BEN_OK);
  ben_string_free(text);

  int defined = 0, exhaustive = 0;
  int64_t margin = 0;
  REQUIRE(ben_automaton_stem_margin(aut, 16, 1, 64, &defined, &exhaustive, &margin) == BEN_OK);
  CHECK(defined == 1);
  CHECK(margin == 6);

  ben_automaton_free(aut);
  ben_automaton_free(again);
}

TEST_CASE("parse failures set an error message") {
  ben_automaton* aut = nullptr;
  CHECK(ben_automaton_parse("garbage", &aut) == BEN_ERR_PARSE);
  CHECK(std::string(ben_last_error()).size() > 0);
  CHECK(ben_automaton_parse(nullptr, &aut) == BEN_ERR_ARGUMENT);
}

TEST_CASE("circuit compilation and verification through the C interface") {
  ben_circuit* c = nullptr;
  REQUIRE(ben_circuit_parse(kAndCircuit, &c) == BEN_OK);
  int32_t depth = 0, and_or = 0;
  CHECK(ben_circuit_depth(c, &depth, &and_or) == BEN_OK);
  CHECK(depth == 1);
  CHECK(and_or == 1);

  ben_automaton* aut = nullptr;
  char* report = nullptr;
  REQUIRE(ben_compile_circuit(c, "perm", "ACGT", &aut, &report) == BEN_OK);
  std::string report_text = take(report);
  CHECK(report_text.find("construction perm") != std::string::npos);

  int32_t S = 0, D = 0;
  REQUIRE(ben_automaton_params(aut, nullptr, &S, &D, nullptr, nullptr) == BEN_OK);
  CHECK(S == 4);  // two inputs over a four-symbol alphabet
  CHECK(D == 9);

  ben_evaluator* ea = nullptr;
  ben_evaluator* eb = nullptr;
  REQUIRE(ben_evaluator_from_circuit(c, &ea) == BEN_OK);
  REQUIRE(ben_evaluator_from_automaton(aut, &eb) == BEN_OK);
  char* line = nullptr;
  CHECK(ben_verify_exhaustive(ea, eb, 20, 1, &line) == BEN_OK);
  CHECK(take(line) == "PASS");

  ben_circuit* extracted = nullptr;
  char* info = nullptr;
  REQUIRE(ben_extract_circuit(aut, &extracted, &info) == BEN_OK);
  CHECK(take(info).find("levels") != std::string::npos);
  ben_evaluator* ec = nullptr;
  REQUIRE(ben_evaluator_from_circuit(extracted, &ec) == BEN_OK);
  char* line2 = nullptr;
  CHECK(ben_verify_exhaustive(ea, ec, 20, 1, &line2) == BEN_OK);
  CHECK(take(line2) == "PASS");

  ben_evaluator_free(ea);
  ben_evaluator_free(eb);
  ben_evaluator_free(ec);
  ben_circuit_free(extracted);
  ben_automaton_free(aut);
  ben_circuit_free(c);
}

TEST_CASE("branching program compilation through the C interface") {
  ben_bp* bp = nullptr;
  REQUIRE(ben_bp_parse(kPermBp, &bp) == BEN_OK);
  int out = -1;
  CHECK(ben_bp_eval(bp, "1", &out) == BEN_OK);
  CHECK(out == 1);
  CHECK(ben_bp_eval(bp, "0", &out) == BEN_OK);
  CHECK(out == 0);

  for (const char* construction : {"general", "fixed", "fixed-constd", "perm", "sparse1"}) {
    ben_automaton* aut = nullptr;
    REQUIRE(ben_compile_bp(bp, construction, "ACGT", 0, &aut, nullptr) == BEN_OK);
    int accepted = -1;
    REQUIRE(ben_automaton_run(aut, "1", &accepted, nullptr, nullptr) == BEN_OK);
    CHECK(accepted == 1);
    REQUIRE(ben_automaton_run(aut, "0", &accepted, nullptr, nullptr) == BEN_OK);
    CHECK(accepted == 0);
    ben_automaton_free(aut);
  }

  ben_automaton* aut = nullptr;
  CHECK(ben_compile_bp(bp, "nonsense", "ACGT", 0, &aut, nullptr) == BEN_ERR_PRECONDITION);
  ben_bp_free(bp);
}

TEST_CASE("verification failure reports the counterexample") {
  ben_circuit* c = nullptr;
  REQUIRE(ben_circuit_parse(kAndCircuit, &c) == BEN_OK);
  ben_circuit* zero = nullptr;
  REQUIRE(ben_circuit_parse("circuit v1\ninputs 2\nlet z = CONST 0\noutput z\n", &zero) == BEN_OK);
  ben_evaluator* ea = nullptr;
  ben_evaluator* eb = nullptr;
  REQUIRE(ben_evaluator_from_circuit(c, &ea) == BEN_OK);
  REQUIRE(ben_evaluator_from_circuit(zero, &eb) == BEN_OK);
  char* line = nullptr;
  CHECK(ben_verify_exhaustive(ea, eb, 20, 1, &line) == BEN_ERR_VERIFY);
  CHECK(take(line) == "FAIL x=11 a=1 b=0");
  char* random_line = nullptr;
  ben_status status = ben_verify_random(ea, eb, 64, 5, &random_line);
  CHECK(status == BEN_ERR_VERIFY);
  take(random_line);
  ben_evaluator_free(ea);
  ben_evaluator_free(eb);
  ben_circuit_free(c);
  ben_circuit_free(zero);
}

TEST_CASE("molecule emission round-trips through the C interface") {
  ben_bp* wide = nullptr;
  {
    // Width-5 program so the sticky end size matches the enzyme.
    ben_circuit* c = nullptr;
    REQUIRE(ben_circuit_parse(kAndCircuit, &c) == BEN_OK);
    REQUIRE(ben_circuit_to_bp(c, &wide) == BEN_OK);
    ben_circuit_free(c);
  }
  ben_automaton* aut = nullptr;
  REQUIRE(ben_compile_bp(wide, "perm", "ACGT", 0, &aut, nullptr) == BEN_OK);

  ben_profile* profile = nullptr;
  REQUIRE(ben_profile_parse(kFokI, &profile) == BEN_OK);
  char* bundle = nullptr;
  REQUIRE(ben_emit_molecules(aut, profile, &bundle) == BEN_OK);
  std::string bundle_text = take(bundle);
  CHECK(bundle_text.find(">state_top") != std::string::npos);

  ben_automaton* parsed = nullptr;
  REQUIRE(ben_parse_molecules(bundle_text.c_str(), &parsed) == BEN_OK);
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(ben_automaton_serialize(aut, &a) == BEN_OK);
  REQUIRE(ben_automaton_serialize(parsed, &b) == BEN_OK);
  CHECK(take(a) == take(b));

  int clean = -1;
  char* flags = nullptr;
  REQUIRE(ben_plausibility(aut, profile, &clean, &flags) == BEN_OK);
  take(flags);

  ben_automaton_free(parsed);
  ben_automaton_free(aut);
  ben_profile_free(profile);
  ben_bp_free(wide);
}

TEST_CASE("version string is present") {
  CHECK(std::string(ben_version()).size() > 0);
}
