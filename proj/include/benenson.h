/* C interface to the benenson toolchain: string-cutting automata, branching
 * programs, circuit compilation, simulation, extraction, and molecule
 * emission. All objects are opaque handles; every function returns a status
 * code and writes results through out-parameters. Strings returned through
 * char** are heap-allocated and must be released with ben_string_free.
 */
#ifndef BENENSON_H
#define BENENSON_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ben_status {
  BEN_OK = 0,
  BEN_ERR_VERIFY = 1,       /* verification found a counterexample */
  BEN_ERR_PARSE = 2,        /* malformed input text or file */
  BEN_ERR_PRECONDITION = 3, /* operation preconditions not met */
  BEN_ERR_ARGUMENT = 4,     /* bad argument (null handle, unknown name) */
  BEN_ERR_INTERNAL = 5
} ben_status;

typedef struct ben_automaton ben_automaton;
typedef struct ben_circuit ben_circuit;
typedef struct ben_bp ben_bp;
typedef struct ben_profile ben_profile;
typedef struct ben_evaluator ben_evaluator;

const char* ben_version(void);

/* Message describing the most recent failure on this thread. */
const char* ben_last_error(void);

void ben_string_free(char* s);
void ben_i64_array_free(int64_t* a);

/* -------- automata -------- */

ben_status ben_automaton_parse(const char* text, ben_automaton** out);
ben_status ben_automaton_parse_file(const char* path, ben_automaton** out);
ben_status ben_automaton_serialize(const ben_automaton* aut, char** out);
void ben_automaton_free(ben_automaton* aut);

ben_status ben_automaton_params(const ben_automaton* aut, int32_t* n, int32_t* sticky_size,
                                int32_t* max_cut, int64_t* length, int64_t* accept_pos);
ben_status ben_automaton_is_deterministic(const ben_automaton* aut, int* out);
ben_status ben_automaton_sparseness(const ben_automaton* aut, int32_t* out);

/* input is a string of '0'/'1' of length n. offsets/applied may be NULL. */
ben_status ben_automaton_run(const ben_automaton* aut, const char* input, int* accepted,
                             int64_t** offsets, size_t* offset_count);
ben_status ben_automaton_reachable(const ben_automaton* aut, const char* input,
                                   int64_t** offsets, size_t* offset_count);

/* margin_defined is 0 when every input accepts. */
ben_status ben_automaton_stem_margin(const ben_automaton* aut, int32_t exhaustive_limit,
                                     uint64_t seed, int64_t samples, int* margin_defined,
                                     int* exhaustive, int64_t* margin);

/* -------- circuits -------- */

ben_status ben_circuit_parse(const char* text, ben_circuit** out);
ben_status ben_circuit_parse_file(const char* path, ben_circuit** out);
ben_status ben_circuit_serialize(const ben_circuit* c, char** out);
void ben_circuit_free(ben_circuit* c);

ben_status ben_circuit_inputs(const ben_circuit* c, int32_t* n);
ben_status ben_circuit_eval(const ben_circuit* c, const char* input, int* out);
ben_status ben_circuit_depth(const ben_circuit* c, int32_t* all_gates, int32_t* and_or_only);

/* -------- branching programs -------- */

ben_status ben_bp_parse(const char* text, ben_bp** out);
ben_status ben_bp_parse_file(const char* path, ben_bp** out);
ben_status ben_bp_serialize(const ben_bp* bp, char** out);
void ben_bp_free(ben_bp* bp);

ben_status ben_bp_inputs(const ben_bp* bp, int32_t* n);
ben_status ben_bp_eval(const ben_bp* bp, const char* input, int* out);

/* -------- compilation -------- */

/* construction: one of "general", "fixed", "fixed-constd", "perm", "sparse1".
 * sigma: alphabet symbols, e.g. "ACGT". seg_multiplier 0 picks the smallest
 * legal segment length for the constant-range constructions. Permutation
 * constructions normalize the program first when needed. report may be NULL.
 */
ben_status ben_compile_bp(const ben_bp* bp, const char* construction, const char* sigma,
                          int32_t seg_multiplier, ben_automaton** out, char** report);

/* construction: "perm" or "sparse1"; the circuit goes through the width-5
 * permutation program first. */
ben_status ben_compile_circuit(const ben_circuit* c, const char* construction,
                               const char* sigma, ben_automaton** out, char** report);

/* Width-5 permutation program for a circuit, goto0 normalized. */
ben_status ben_circuit_to_bp(const ben_circuit* c, ben_bp** out);

/* -------- extraction -------- */

ben_status ben_extract_circuit(const ben_automaton* aut, ben_circuit** out, char** info);

/* -------- verification -------- */

ben_status ben_evaluator_from_automaton(const ben_automaton* aut, ben_evaluator** out);
ben_status ben_evaluator_from_circuit(const ben_circuit* c, ben_evaluator** out);
ben_status ben_evaluator_from_bp(const ben_bp* bp, ben_evaluator** out);
void ben_evaluator_free(ben_evaluator* e);

/* BEN_OK when equal; BEN_ERR_VERIFY plus a report line when a counterexample
 * exists. report holds the PASS/FAIL line either way when non-NULL. */
ben_status ben_verify_exhaustive(const ben_evaluator* a, const ben_evaluator* b, int32_t limit,
                                 int32_t jobs, char** report);
ben_status ben_verify_random(const ben_evaluator* a, const ben_evaluator* b, uint64_t trials,
                             uint64_t seed, char** report);

/* -------- wet-lab grounding -------- */

ben_status ben_profile_parse(const char* text, ben_profile** out);
ben_status ben_profile_parse_file(const char* path, ben_profile** out);
void ben_profile_free(ben_profile* p);

ben_status ben_emit_molecules(const ben_automaton* aut, const ben_profile* profile,
                              char** bundle);
ben_status ben_parse_molecules(const char* bundle, ben_automaton** out);
/* clean is 1 when no rule is flagged. */
ben_status ben_plausibility(const ben_automaton* aut, const ben_profile* profile, int* clean,
                            char** report);

#ifdef __cplusplus
}
#endif

#endif /* BENENSON_H */
