#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/automaton.hpp"

namespace benenson {

// Geometry of a type IIS enzyme: where it cuts relative to its recognition
// site on each strand. The sticky end left behind spans the two cut depths.
struct EnzymeProfile {
  std::string name;
  std::string recognition;
  int top_cut = 0;
  int bottom_cut = 0;

  int sticky_size() const { return bottom_cut - top_cut; }
};

void validate_profile(const EnzymeProfile& profile);

// Key-value text file: name/recognition/top_cut/bottom_cut lines.
EnzymeProfile parse_profile(const std::string& text);
EnzymeProfile parse_profile_file(const std::string& path);
std::string serialize_profile(const EnzymeProfile& profile);

EnzymeProfile foki_profile();

// Base mapping from alphabet symbols to DNA bases, in symbol order.
std::string base_map(const Alphabet& alphabet);
char wc_complement(char base);
std::string reverse_complement(const std::string& seq);

// FASTA-like bundle: state duplex plus one two-strand record per rule. The
// header comment block carries everything needed to reconstruct the
// automaton, and each rule molecule re-derives (sticky, dist) from geometry.
std::string emit_molecules(const Automaton& aut, const EnzymeProfile& profile);
Automaton parse_molecules(const std::string& bundle);

struct PlausibilityReport {
  std::vector<CuttingRule> adjacent_nick_cuts;     // dist == 1
  std::vector<CuttingRule> out_of_reach_cuts;      // dist > top_cut
  std::vector<std::string> self_complementary;     // sticky ends equal to their
                                                   // own reverse complement
  std::vector<std::string> skipped_checks;         // analyses this scan does not do

  bool clean() const {
    return adjacent_nick_cuts.empty() && out_of_reach_cuts.empty() &&
           self_complementary.empty();
  }
};

PlausibilityReport plausibility_check(const Automaton& aut, const EnzymeProfile& profile);

struct StemMargin {
  bool defined = false;     // false when no rejecting input exists
  bool exhaustive = false;  // scanned all inputs vs sampled
  std::int64_t value = 0;
};

// Smallest gap between the accept position and the furthest cut any
// rejecting input can make. Exhaustive up to `exhaustive_limit` inputs,
// seeded sampling beyond.
StemMargin stem_margin(const Automaton& aut, int exhaustive_limit = 16,
                       std::uint64_t seed = 1, std::int64_t samples = 4096);

}  // namespace benenson
