#include "benenson.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "barrington/barrington.hpp"
#include "compiler/compiler.hpp"
#include "core/automaton.hpp"
#include "extractor/extractor.hpp"
#include "machines/branching.hpp"
#include "machines/circuit.hpp"
#include "verify/verify.hpp"
#include "wetlab/wetlab.hpp"

using namespace benenson;

struct ben_automaton {
  Automaton value;
};
struct ben_circuit {
  Circuit value;
};
struct ben_bp {
  BpFile value;
};
struct ben_profile {
  EnzymeProfile value;
};
struct ben_evaluator {
  Evaluator value;
};

namespace {

thread_local std::string g_last_error;

ben_status fail(ben_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
ben_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const parse_error& e) {
    return fail(BEN_ERR_PARSE, e.what());
  } catch (const precondition_error& e) {
    return fail(BEN_ERR_PRECONDITION, e.what());
  } catch (const invariant_error& e) {
    return fail(BEN_ERR_PRECONDITION, e.what());
  } catch (const std::exception& e) {
    return fail(BEN_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ben_status need(bool ok, const char* what) {
  if (ok) return BEN_OK;
  return fail(BEN_ERR_ARGUMENT, std::string("null or invalid argument: ") + what);
}

bits parse_input_bits(const char* input, int n) {
  if (!input) throw precondition_error("input bit string is null");
  bits x = bits_from_string(input);
  if (static_cast<int>(x.size()) != n)
    throw precondition_error("input bit string length must equal n");
  return x;
}

// The permutation constructions expect identity goto0; normalize on behalf
// of file-level callers.
LayeredBp normalized_for(const LayeredBp& bp) {
  if (goto0_is_identity(bp)) return bp;
  return normalize_goto0_identity(bp);
}

CompileResult compile_dispatch(const BpFile& file, const std::string& construction,
                               const Alphabet& sigma, int seg_multiplier) {
  CompileOptions options;
  options.seg_multiplier = seg_multiplier;
  if (construction == "general") {
    GeneralBp bp = file.is_general() ? file.general() : to_general(file.layered());
    bp = normalize_single_accept(bp);
    bp = topo_index(bp);
    return compile_general(bp, sigma);
  }
  if (!file.is_general()) {
    const LayeredBp& bp = file.layered();
    if (construction == "fixed") return compile_fixed_width(bp, sigma);
    if (construction == "fixed-constd") return compile_fixed_width_constd(bp, sigma, options);
    if (construction == "perm") return compile_permutation(normalized_for(bp), sigma, options);
    if (construction == "sparse1") return compile_sparse1(normalized_for(bp), sigma, options);
  } else {
    if (construction == "fixed" || construction == "fixed-constd" || construction == "perm" ||
        construction == "sparse1")
      throw precondition_error("construction '" + construction +
                               "' needs a layered branching program");
  }
  throw precondition_error("unknown construction '" + construction + "'");
}

}  // namespace

extern "C" {

const char* ben_version(void) { return "1.0.0"; }

const char* ben_last_error(void) { return g_last_error.c_str(); }

void ben_string_free(char* s) { std::free(s); }
void ben_i64_array_free(int64_t* a) { std::free(a); }

/* -------- automata -------- */

ben_status ben_automaton_parse(const char* text, ben_automaton** out) {
  if (need(text && out, "ben_automaton_parse") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_automaton{parse_automaton(text)};
    return BEN_OK;
  });
}

ben_status ben_automaton_parse_file(const char* path, ben_automaton** out) {
  if (need(path && out, "ben_automaton_parse_file") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_automaton{parse_automaton_file(path)};
    return BEN_OK;
  });
}

ben_status ben_automaton_serialize(const ben_automaton* aut, char** out) {
  if (need(aut && out, "ben_automaton_serialize") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = dup_string(serialize_automaton(aut->value));
    return BEN_OK;
  });
}

void ben_automaton_free(ben_automaton* aut) { delete aut; }

ben_status ben_automaton_params(const ben_automaton* aut, int32_t* n, int32_t* sticky_size,
                                int32_t* max_cut, int64_t* length, int64_t* accept_pos) {
  if (need(aut != nullptr, "ben_automaton_params") != BEN_OK) return BEN_ERR_ARGUMENT;
  if (n) *n = aut->value.inputs();
  if (sticky_size) *sticky_size = aut->value.sticky_size();
  if (max_cut) *max_cut = aut->value.max_cut();
  if (length) *length = aut->value.length();
  if (accept_pos) *accept_pos = aut->value.accept_pos();
  return BEN_OK;
}

ben_status ben_automaton_is_deterministic(const ben_automaton* aut, int* out) {
  if (need(aut && out, "ben_automaton_is_deterministic") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = is_deterministic(aut->value) ? 1 : 0;
    return BEN_OK;
  });
}

ben_status ben_automaton_sparseness(const ben_automaton* aut, int32_t* out) {
  if (need(aut && out, "ben_automaton_sparseness") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = sparseness(aut->value);
    return BEN_OK;
  });
}

namespace {

int64_t* dup_offsets(const std::vector<std::int64_t>& offsets) {
  auto* out = static_cast<int64_t*>(std::malloc(sizeof(int64_t) * std::max<std::size_t>(1, offsets.size())));
  for (std::size_t i = 0; i < offsets.size(); ++i) out[i] = offsets[i];
  return out;
}

}  // namespace

ben_status ben_automaton_run(const ben_automaton* aut, const char* input, int* accepted,
                             int64_t** offsets, size_t* offset_count) {
  if (need(aut && input && accepted, "ben_automaton_run") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    CutTrace trace = run(aut->value, parse_input_bits(input, aut->value.inputs()));
    *accepted = trace.accepted ? 1 : 0;
    if (offsets && offset_count) {
      *offsets = dup_offsets(trace.offsets);
      *offset_count = trace.offsets.size();
    }
    return BEN_OK;
  });
}

ben_status ben_automaton_reachable(const ben_automaton* aut, const char* input,
                                   int64_t** offsets, size_t* offset_count) {
  if (need(aut && input && offsets && offset_count, "ben_automaton_reachable") != BEN_OK)
    return BEN_ERR_ARGUMENT;
  return guarded([&] {
    auto reach = reachable_offsets(aut->value, parse_input_bits(input, aut->value.inputs()));
    *offsets = dup_offsets(reach);
    *offset_count = reach.size();
    return BEN_OK;
  });
}

ben_status ben_automaton_stem_margin(const ben_automaton* aut, int32_t exhaustive_limit,
                                     uint64_t seed, int64_t samples, int* margin_defined,
                                     int* exhaustive, int64_t* margin) {
  if (need(aut && margin_defined && margin, "ben_automaton_stem_margin") != BEN_OK)
    return BEN_ERR_ARGUMENT;
  return guarded([&] {
    StemMargin result = stem_margin(aut->value, exhaustive_limit, seed, samples);
    *margin_defined = result.defined ? 1 : 0;
    if (exhaustive) *exhaustive = result.exhaustive ? 1 : 0;
    *margin = result.value;
    return BEN_OK;
  });
}

/* -------- circuits -------- */

ben_status ben_circuit_parse(const char* text, ben_circuit** out) {
  if (need(text && out, "ben_circuit_parse") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_circuit{parse_circuit(text)};
    return BEN_OK;
  });
}

ben_status ben_circuit_parse_file(const char* path, ben_circuit** out) {
  if (need(path && out, "ben_circuit_parse_file") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_circuit{parse_circuit_file(path)};
    return BEN_OK;
  });
}

ben_status ben_circuit_serialize(const ben_circuit* c, char** out) {
  if (need(c && out, "ben_circuit_serialize") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = dup_string(serialize_circuit(c->value));
    return BEN_OK;
  });
}

void ben_circuit_free(ben_circuit* c) { delete c; }

ben_status ben_circuit_inputs(const ben_circuit* c, int32_t* n) {
  if (need(c && n, "ben_circuit_inputs") != BEN_OK) return BEN_ERR_ARGUMENT;
  *n = c->value.n;
  return BEN_OK;
}

ben_status ben_circuit_eval(const ben_circuit* c, const char* input, int* out) {
  if (need(c && input && out, "ben_circuit_eval") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = eval_circuit(c->value, parse_input_bits(input, c->value.n));
    return BEN_OK;
  });
}

ben_status ben_circuit_depth(const ben_circuit* c, int32_t* all_gates, int32_t* and_or_only) {
  if (need(c != nullptr, "ben_circuit_depth") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    if (all_gates) *all_gates = circuit_depth(c->value);
    if (and_or_only) *and_or_only = and_or_depth(c->value);
    return BEN_OK;
  });
}

/* -------- branching programs -------- */

ben_status ben_bp_parse(const char* text, ben_bp** out) {
  if (need(text && out, "ben_bp_parse") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_bp{parse_bp(text)};
    return BEN_OK;
  });
}

ben_status ben_bp_parse_file(const char* path, ben_bp** out) {
  if (need(path && out, "ben_bp_parse_file") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_bp{parse_bp_file(path)};
    return BEN_OK;
  });
}

ben_status ben_bp_serialize(const ben_bp* bp, char** out) {
  if (need(bp && out, "ben_bp_serialize") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    if (bp->value.is_general())
      *out = dup_string(serialize_bp(bp->value.general()));
    else
      *out = dup_string(serialize_bp(bp->value.layered(), bp->value.permutation_tag));
    return BEN_OK;
  });
}

void ben_bp_free(ben_bp* bp) { delete bp; }

ben_status ben_bp_inputs(const ben_bp* bp, int32_t* n) {
  if (need(bp && n, "ben_bp_inputs") != BEN_OK) return BEN_ERR_ARGUMENT;
  *n = bp->value.is_general() ? bp->value.general().n : bp->value.layered().n;
  return BEN_OK;
}

ben_status ben_bp_eval(const ben_bp* bp, const char* input, int* out) {
  if (need(bp && input && out, "ben_bp_eval") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    if (bp->value.is_general()) {
      const GeneralBp& g = bp->value.general();
      *out = eval_general(g, parse_input_bits(input, g.n));
    } else {
      const LayeredBp& l = bp->value.layered();
      *out = eval_layered(l, parse_input_bits(input, l.n));
    }
    return BEN_OK;
  });
}

/* -------- compilation -------- */

ben_status ben_compile_bp(const ben_bp* bp, const char* construction, const char* sigma,
                          int32_t seg_multiplier, ben_automaton** out, char** report) {
  if (need(bp && construction && sigma && out, "ben_compile_bp") != BEN_OK)
    return BEN_ERR_ARGUMENT;
  return guarded([&] {
    CompileResult result =
        compile_dispatch(bp->value, construction, Alphabet(sigma), seg_multiplier);
    *out = new ben_automaton{std::move(result.automaton)};
    if (report) *report = dup_string(report_text(result.report));
    return BEN_OK;
  });
}

ben_status ben_compile_circuit(const ben_circuit* c, const char* construction,
                               const char* sigma, ben_automaton** out, char** report) {
  if (need(c && construction && sigma && out, "ben_compile_circuit") != BEN_OK)
    return BEN_ERR_ARGUMENT;
  return guarded([&] {
    std::string kind = construction;
    if (kind != "perm" && kind != "sparse1")
      throw precondition_error("circuit compilation supports 'perm' and 'sparse1'");
    LayeredBp pbp = normalize_goto0_identity(barrington_compile(c->value));
    CompileResult result = kind == "perm" ? compile_permutation(pbp, Alphabet(sigma))
                                          : compile_sparse1(pbp, Alphabet(sigma));
    std::ostringstream extra;
    extra << "circuit depth " << circuit_depth(c->value) << " (and/or depth "
          << and_or_depth(c->value) << ")\n";
    extra << "program layers " << pbp.layers << " width " << pbp.width << "\n";
    *out = new ben_automaton{std::move(result.automaton)};
    if (report) *report = dup_string(extra.str() + report_text(result.report));
    return BEN_OK;
  });
}

ben_status ben_circuit_to_bp(const ben_circuit* c, ben_bp** out) {
  if (need(c && out, "ben_circuit_to_bp") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    BpFile file;
    file.program = normalize_goto0_identity(barrington_compile(c->value));
    file.permutation_tag = true;
    *out = new ben_bp{std::move(file)};
    return BEN_OK;
  });
}

/* -------- extraction -------- */

ben_status ben_extract_circuit(const ben_automaton* aut, ben_circuit** out, char** info) {
  if (need(aut && out, "ben_extract_circuit") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    ExtractResult result = extract_circuit(aut->value);
    *out = new ben_circuit{std::move(result.circuit)};
    if (info) {
      std::ostringstream text;
      text << "segments " << result.info.table_count << " padded " << result.info.padded_count
           << " levels " << result.info.b_levels << " gates " << result.info.gate_count << "\n";
      for (int q : result.info.over_budget_segments)
        text << "warning: segment " << q << " reads more variables than its width\n";
      *info = dup_string(text.str());
    }
    return BEN_OK;
  });
}

/* -------- verification -------- */

ben_status ben_evaluator_from_automaton(const ben_automaton* aut, ben_evaluator** out) {
  if (need(aut && out, "ben_evaluator_from_automaton") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_evaluator{evaluator_from(aut->value)};
    return BEN_OK;
  });
}

ben_status ben_evaluator_from_circuit(const ben_circuit* c, ben_evaluator** out) {
  if (need(c && out, "ben_evaluator_from_circuit") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_evaluator{evaluator_from(c->value)};
    return BEN_OK;
  });
}

ben_status ben_evaluator_from_bp(const ben_bp* bp, ben_evaluator** out) {
  if (need(bp && out, "ben_evaluator_from_bp") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    if (bp->value.is_general())
      *out = new ben_evaluator{evaluator_from(bp->value.general())};
    else
      *out = new ben_evaluator{evaluator_from(bp->value.layered())};
    return BEN_OK;
  });
}

void ben_evaluator_free(ben_evaluator* e) { delete e; }

ben_status ben_verify_exhaustive(const ben_evaluator* a, const ben_evaluator* b, int32_t limit,
                                 int32_t jobs, char** report) {
  if (need(a && b, "ben_verify_exhaustive") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    EquivalenceResult result = equivalence_exhaustive(a->value, b->value, limit, jobs);
    if (report) *report = dup_string(result.line());
    if (result.equal) return BEN_OK;
    return fail(BEN_ERR_VERIFY, result.line());
  });
}

ben_status ben_verify_random(const ben_evaluator* a, const ben_evaluator* b, uint64_t trials,
                             uint64_t seed, char** report) {
  if (need(a && b, "ben_verify_random") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    EquivalenceResult result = equivalence_random(a->value, b->value, trials, seed);
    if (report) *report = dup_string(result.line());
    if (result.equal) return BEN_OK;
    return fail(BEN_ERR_VERIFY, result.line());
  });
}

/* -------- wet-lab grounding -------- */

ben_status ben_profile_parse(const char* text, ben_profile** out) {
  if (need(text && out, "ben_profile_parse") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_profile{parse_profile(text)};
    return BEN_OK;
  });
}

ben_status ben_profile_parse_file(const char* path, ben_profile** out) {
  if (need(path && out, "ben_profile_parse_file") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_profile{parse_profile_file(path)};
    return BEN_OK;
  });
}

void ben_profile_free(ben_profile* p) { delete p; }

ben_status ben_emit_molecules(const ben_automaton* aut, const ben_profile* profile,
                              char** bundle) {
  if (need(aut && profile && bundle, "ben_emit_molecules") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *bundle = dup_string(emit_molecules(aut->value, profile->value));
    return BEN_OK;
  });
}

ben_status ben_parse_molecules(const char* bundle, ben_automaton** out) {
  if (need(bundle && out, "ben_parse_molecules") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ben_automaton{parse_molecules(bundle)};
    return BEN_OK;
  });
}

ben_status ben_plausibility(const ben_automaton* aut, const ben_profile* profile, int* clean,
                            char** report) {
  if (need(aut && profile && clean, "ben_plausibility") != BEN_OK) return BEN_ERR_ARGUMENT;
  return guarded([&] {
    PlausibilityReport result = plausibility_check(aut->value, profile->value);
    *clean = result.clean() ? 1 : 0;
    if (report) {
      std::ostringstream text;
      for (const auto& rule : result.adjacent_nick_cuts)
        text << "flag adjacent-nick cut: rule " << rule.var << " " << rule.bit << " "
             << rule.sticky << " " << rule.dist << "\n";
      for (const auto& rule : result.out_of_reach_cuts)
        text << "flag out-of-reach cut: rule " << rule.var << " " << rule.bit << " "
             << rule.sticky << " " << rule.dist << "\n";
      for (const auto& sticky : result.self_complementary)
        text << "flag self-complementary sticky end: " << sticky << "\n";
      for (const auto& skipped : result.skipped_checks)
        text << "not checked: " << skipped << "\n";
      if (result.clean()) text << "clean\n";
      *report = dup_string(text.str());
    }
    return BEN_OK;
  });
}

}  // extern "C"
