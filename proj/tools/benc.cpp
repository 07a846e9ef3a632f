// benc: command-line front end for the benenson shared library. Only the C
// API from benenson.h is used here; exit codes mirror ben_status for the
// first four values (0 ok, 1 counterexample, 2 malformed input, 3 broken
// precondition).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "benenson.h"

namespace {

int exit_code(ben_status status) {
  switch (status) {
    case BEN_OK: return 0;
    case BEN_ERR_VERIFY: return 1;
    case BEN_ERR_PARSE: return 2;
    case BEN_ERR_PRECONDITION: return 3;
    default: return 4;
  }
}

int bail(ben_status status) {
  std::cerr << "error: " << ben_last_error() << "\n";
  return exit_code(status);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(4);
  }
  out << content;
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  ben_string_free(s);
  return out;
}

constexpr std::size_t kTraceCap = 10000;

struct AutomatonHandle {
  ben_automaton* ptr = nullptr;
  ~AutomatonHandle() { ben_automaton_free(ptr); }
};
struct CircuitHandle {
  ben_circuit* ptr = nullptr;
  ~CircuitHandle() { ben_circuit_free(ptr); }
};
struct BpHandle {
  ben_bp* ptr = nullptr;
  ~BpHandle() { ben_bp_free(ptr); }
};
struct EvaluatorHandle {
  ben_evaluator* ptr = nullptr;
  ~EvaluatorHandle() { ben_evaluator_free(ptr); }
};
struct ProfileHandle {
  ben_profile* ptr = nullptr;
  ~ProfileHandle() { ben_profile_free(ptr); }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// verify accepts any mix of the three file kinds; pick by extension.
ben_status evaluator_for_path(const std::string& path, EvaluatorHandle& out) {
  if (ends_with(path, ".ben")) {
    AutomatonHandle aut;
    ben_status status = ben_automaton_parse_file(path.c_str(), &aut.ptr);
    if (status != BEN_OK) return status;
    return ben_evaluator_from_automaton(aut.ptr, &out.ptr);
  }
  if (ends_with(path, ".circ")) {
    CircuitHandle c;
    ben_status status = ben_circuit_parse_file(path.c_str(), &c.ptr);
    if (status != BEN_OK) return status;
    return ben_evaluator_from_circuit(c.ptr, &out.ptr);
  }
  if (ends_with(path, ".bp")) {
    BpHandle bp;
    ben_status status = ben_bp_parse_file(path.c_str(), &bp.ptr);
    if (status != BEN_OK) return status;
    return ben_evaluator_from_bp(bp.ptr, &out.ptr);
  }
  std::cerr << "error: cannot tell what '" << path << "' is; expected .ben/.circ/.bp\n";
  std::exit(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benenson automaton toolchain"};
  app.require_subcommand(1);

  // ---- compile-circuit ----
  std::string cc_input, cc_output, cc_construction = "perm", cc_sigma = "ACGT";
  auto* cc = app.add_subcommand("compile-circuit", "compile a circuit into an automaton");
  cc->add_option("file", cc_input, "circuit file (.circ)")->required();
  cc->add_option("--construction", cc_construction, "perm|sparse1")
      ->check(CLI::IsMember({"perm", "sparse1"}));
  cc->add_option("--sigma", cc_sigma, "alphabet symbols (default ACGT)");
  cc->add_option("-o,--output", cc_output, "output automaton file (.ben)");

  // ---- compile-bp ----
  std::string cb_input, cb_output, cb_construction, cb_sigma = "ACGT";
  int cb_multiplier = 0;
  auto* cb = app.add_subcommand("compile-bp", "compile a branching program into an automaton");
  cb->add_option("file", cb_input, "branching program file (.bp)")->required();
  cb->add_option("--construction", cb_construction,
                 "general|fixed|fixed-constd|perm|sparse1")
      ->required()
      ->check(CLI::IsMember({"general", "fixed", "fixed-constd", "perm", "sparse1"}));
  cb->add_option("--sigma", cb_sigma, "alphabet symbols (default ACGT)");
  cb->add_option("--segment-multiplier", cb_multiplier,
                 "segment length multiplier k (m = D*k+1); 0 = smallest");
  cb->add_option("-o,--output", cb_output, "output automaton file (.ben)");

  // ---- simulate ----
  std::string sim_input, sim_bits;
  bool sim_trace = false;
  auto* sim = app.add_subcommand("simulate", "run an automaton on one input");
  sim->add_option("file", sim_input, "automaton file (.ben)")->required();
  sim->add_option("--input", sim_bits, "input bits, e.g. 0101")->required();
  sim->add_flag("--trace", sim_trace, "print the offset trace");

  // ---- extract ----
  std::string ex_input, ex_output;
  auto* ex = app.add_subcommand("extract", "extract an equivalent circuit from an automaton");
  ex->add_option("file", ex_input, "automaton file (.ben)")->required();
  ex->add_option("-o,--output", ex_output, "output circuit file (.circ)");

  // ---- verify ----
  std::string v_a, v_b;
  bool v_exhaustive = false;
  std::uint64_t v_random = 0, v_seed = 1;
  int v_jobs = 1, v_limit = 20;
  auto* ver = app.add_subcommand("verify", "check two evaluators for equivalence");
  ver->add_option("a", v_a, "first file (.ben/.circ/.bp)")->required();
  ver->add_option("b", v_b, "second file (.ben/.circ/.bp)")->required();
  ver->add_flag("--exhaustive", v_exhaustive, "scan all inputs (default)");
  ver->add_option("--random", v_random, "number of random trials instead");
  ver->add_option("--seed", v_seed, "seed for --random");
  ver->add_option("--jobs", v_jobs, "worker threads for --exhaustive");
  ver->add_option("--limit", v_limit, "max n for exhaustive scans");

  // ---- emit ----
  std::string em_input, em_profile, em_output;
  auto* em = app.add_subcommand("emit", "render state and rule molecules");
  em->add_option("file", em_input, "automaton file (.ben)")->required();
  em->add_option("--enzyme", em_profile, "enzyme profile file")->required();
  em->add_option("-o,--output", em_output, "output bundle file (.fa)");

  // ---- stats ----
  std::string st_input;
  auto* st = app.add_subcommand("stats", "print automaton parameters and analyses");
  st->add_option("file", st_input, "automaton file (.ben)")->required();

  CLI11_PARSE(app, argc, argv);

  if (cc->parsed()) {
    CircuitHandle c;
    ben_status status = ben_circuit_parse_file(cc_input.c_str(), &c.ptr);
    if (status != BEN_OK) return bail(status);
    AutomatonHandle aut;
    char* report = nullptr;
    status = ben_compile_circuit(c.ptr, cc_construction.c_str(), cc_sigma.c_str(), &aut.ptr,
                                 &report);
    if (status != BEN_OK) return bail(status);
    std::string report_str = take_string(report);
    std::cout << report_str;
    char* text = nullptr;
    status = ben_automaton_serialize(aut.ptr, &text);
    if (status != BEN_OK) return bail(status);
    std::string serialized = take_string(text);
    if (!cc_output.empty()) {
      std::ostringstream contents;
      std::istringstream lines(report_str);
      std::string line;
      while (std::getline(lines, line)) contents << "# " << line << "\n";
      contents << serialized;
      write_file(cc_output, contents.str());
      std::cout << "wrote " << cc_output << "\n";
    }
    return 0;
  }

  if (cb->parsed()) {
    BpHandle bp;
    ben_status status = ben_bp_parse_file(cb_input.c_str(), &bp.ptr);
    if (status != BEN_OK) return bail(status);
    AutomatonHandle aut;
    char* report = nullptr;
    status = ben_compile_bp(bp.ptr, cb_construction.c_str(), cb_sigma.c_str(), cb_multiplier,
                            &aut.ptr, &report);
    if (status != BEN_OK) return bail(status);
    std::string report_str = take_string(report);
    std::cout << report_str;
    char* text = nullptr;
    status = ben_automaton_serialize(aut.ptr, &text);
    if (status != BEN_OK) return bail(status);
    std::string serialized = take_string(text);
    if (!cb_output.empty()) {
      std::ostringstream contents;
      std::istringstream lines(report_str);
      std::string line;
      while (std::getline(lines, line)) contents << "# " << line << "\n";
      contents << serialized;
      write_file(cb_output, contents.str());
      std::cout << "wrote " << cb_output << "\n";
    }
    return 0;
  }

  if (sim->parsed()) {
    AutomatonHandle aut;
    ben_status status = ben_automaton_parse_file(sim_input.c_str(), &aut.ptr);
    if (status != BEN_OK) return bail(status);
    int accepted = 0;
    int64_t* offsets = nullptr;
    size_t count = 0;
    status = ben_automaton_run(aut.ptr, sim_bits.c_str(), &accepted, &offsets, &count);
    if (status != BEN_OK) return bail(status);
    std::cout << (accepted ? "ACCEPTED" : "REJECTED");
    if (sim_trace) {
      std::cout << " offsets=";
      for (size_t i = 0; i < count && i < kTraceCap; ++i)
        std::cout << (i ? "," : "") << offsets[i];
      if (count > kTraceCap) std::cout << ",...(truncated)";
    }
    std::cout << "\n";
    ben_i64_array_free(offsets);
    return 0;
  }

  if (ex->parsed()) {
    AutomatonHandle aut;
    ben_status status = ben_automaton_parse_file(ex_input.c_str(), &aut.ptr);
    if (status != BEN_OK) return bail(status);
    CircuitHandle c;
    char* info = nullptr;
    status = ben_extract_circuit(aut.ptr, &c.ptr, &info);
    if (status != BEN_OK) return bail(status);
    std::cout << take_string(info);
    char* text = nullptr;
    status = ben_circuit_serialize(c.ptr, &text);
    if (status != BEN_OK) return bail(status);
    std::string serialized = take_string(text);
    if (!ex_output.empty()) {
      write_file(ex_output, serialized);
      std::cout << "wrote " << ex_output << "\n";
    } else {
      std::cout << serialized;
    }
    return 0;
  }

  if (ver->parsed()) {
    EvaluatorHandle a, b;
    ben_status status = evaluator_for_path(v_a, a);
    if (status != BEN_OK) return bail(status);
    status = evaluator_for_path(v_b, b);
    if (status != BEN_OK) return bail(status);
    char* report = nullptr;
    if (v_random > 0)
      status = ben_verify_random(a.ptr, b.ptr, v_random, v_seed, &report);
    else
      status = ben_verify_exhaustive(a.ptr, b.ptr, v_limit, v_jobs, &report);
    std::cout << take_string(report) << "\n";
    if (status == BEN_OK || status == BEN_ERR_VERIFY) return exit_code(status);
    return bail(status);
  }

  if (em->parsed()) {
    AutomatonHandle aut;
    ben_status status = ben_automaton_parse_file(em_input.c_str(), &aut.ptr);
    if (status != BEN_OK) return bail(status);
    ProfileHandle profile;
    status = ben_profile_parse_file(em_profile.c_str(), &profile.ptr);
    if (status != BEN_OK) return bail(status);
    char* bundle = nullptr;
    status = ben_emit_molecules(aut.ptr, profile.ptr, &bundle);
    if (status != BEN_OK) return bail(status);
    std::string text = take_string(bundle);
    int clean = 0;
    char* flags = nullptr;
    status = ben_plausibility(aut.ptr, profile.ptr, &clean, &flags);
    if (status != BEN_OK) return bail(status);
    std::cout << take_string(flags);
    if (!em_output.empty()) {
      write_file(em_output, text);
      std::cout << "wrote " << em_output << "\n";
    } else {
      std::cout << text;
    }
    return 0;
  }

  if (st->parsed()) {
    AutomatonHandle aut;
    ben_status status = ben_automaton_parse_file(st_input.c_str(), &aut.ptr);
    if (status != BEN_OK) return bail(status);
    int32_t n = 0, S = 0, D = 0;
    int64_t L = 0, p = 0;
    ben_automaton_params(aut.ptr, &n, &S, &D, &L, &p);
    std::cout << "n " << n << "\nS " << S << "\nD " << D << "\nL " << L << "\np " << p << "\n";
    int deterministic = 0;
    status = ben_automaton_is_deterministic(aut.ptr, &deterministic);
    if (status != BEN_OK) return bail(status);
    std::cout << "deterministic " << (deterministic ? "yes" : "no") << "\n";
    int32_t sparse = 0;
    status = ben_automaton_sparseness(aut.ptr, &sparse);
    if (status != BEN_OK) return bail(status);
    std::cout << "sparseness " << sparse << "\n";
    if (deterministic) {
      int defined = 0, exhaustive = 0;
      int64_t margin = 0;
      status = ben_automaton_stem_margin(aut.ptr, 16, 1, 4096, &defined, &exhaustive, &margin);
      if (status != BEN_OK) return bail(status);
      if (!defined)
        std::cout << "stem-margin undefined (every input accepts)\n";
      else
        std::cout << "stem-margin " << margin << (exhaustive ? " (exhaustive)" : " (sampled)")
                  << "\n";
    }
    return 0;
  }

  return 0;
}
