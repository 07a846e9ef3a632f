#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace benenson {

class Alphabet {
 public:
  Alphabet() : Alphabet("ACGT") {}
  explicit Alphabet(std::string symbols);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbols() const { return symbols_; }
  char symbol(int index) const { return symbols_.at(static_cast<std::size_t>(index)); }
  bool contains(char c) const { return index_of(c) >= 0; }
  // -1 when the character is not part of the alphabet.
  int index_of(char c) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::string symbols_;
};

// One input-dependent cutting rule (var, bit, sticky, dist): when the revealed
// sticky end equals `sticky` and input bit `var` has value `bit`, cut `dist`
// symbols off the front of the state string.
struct CuttingRule {
  int var = 1;
  int bit = 0;
  std::string sticky;
  int dist = 1;

  bool operator==(const CuttingRule& o) const {
    return var == o.var && bit == o.bit && sticky == o.sticky && dist == o.dist;
  }
};

// Canonical order used for serialization and dedup: (sticky, var, bit, dist).
bool rule_less(const CuttingRule& a, const CuttingRule& b);

struct DeterminismViolation {
  CuttingRule first;
  CuttingRule second;
};

// Trace of a deterministic run: offsets visited (starting at 0) and the rule
// applied at each step. accepted <=> some offset equals the accept position.
struct CutTrace {
  std::vector<std::int64_t> offsets;
  std::vector<CuttingRule> applied;
  bool accepted = false;
};

class Automaton {
 public:
  // Rules are deduplicated and stored in canonical order. Throws
  // invariant_error when a field violates the model constraints.
  Automaton(Alphabet alphabet, int n, int sticky_size, int max_cut, std::string state,
            std::vector<CuttingRule> rules, std::int64_t accept_pos);

  const Alphabet& alphabet() const { return alphabet_; }
  int inputs() const { return n_; }
  int sticky_size() const { return sticky_size_; }
  int max_cut() const { return max_cut_; }
  const std::string& state() const { return state_; }
  std::int64_t length() const { return static_cast<std::int64_t>(state_.size()); }
  const std::vector<CuttingRule>& rules() const { return rules_; }
  std::int64_t accept_pos() const { return accept_pos_; }

  // Indices into rules() of every rule whose sticky end equals `sticky`.
  const std::vector<std::size_t>* rules_for(std::string_view sticky) const;

  bool operator==(const Automaton& o) const;

 private:
  Alphabet alphabet_;
  int n_;
  int sticky_size_;
  int max_cut_;
  std::string state_;
  std::vector<CuttingRule> rules_;
  std::int64_t accept_pos_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_sticky_;
};

// First sticky_size symbols of state[j..), or nullopt when fewer than
// sticky_size symbols remain. Offsets outside [0, L] are an error.
std::optional<std::string_view> sticky_end(const Automaton& aut, std::int64_t offset);

// All offsets one cut away from `offset` under input x. Empty when no sticky
// end exists or no rule matches; sorted, no duplicates.
std::vector<std::int64_t> step(const Automaton& aut, const bits& x, std::int64_t offset);

// Deterministic run from offset 0; stops when stuck or once the accept
// position is reached or passed. Throws determinism_error if two applicable
// rules disagree on distance at some offset.
CutTrace run(const Automaton& aut, const bits& x);

// Least set of offsets containing 0 and closed under step(). Works for
// nondeterministic automata; the brute-force oracle behind run().
std::vector<std::int64_t> reachable_offsets(const Automaton& aut, const bits& x);

// Every rule pair that can disagree on cut distance (same sticky end,
// different distance, not an opposite-bit pair on one variable).
std::vector<DeterminismViolation> check_determinism(const Automaton& aut);
bool is_deterministic(const Automaton& aut);

// Max over variables of the number of sticky ends carrying an opposing-bit
// rule pair with differing distances.
int sparseness(const Automaton& aut);

// Line-oriented text format:
//   benenson v1
//   sigma ACGT
//   n/S/D/p lines, state line, rule/irule lines.
Automaton parse_automaton(const std::string& text);
Automaton parse_automaton_file(const std::string& path);
std::string serialize_automaton(const Automaton& aut);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace benenson
