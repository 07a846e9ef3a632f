#include "wetlab/wetlab.hpp"

#include <algorithm>
#include <sstream>

namespace benenson {

void validate_profile(const EnzymeProfile& profile) {
  if (profile.name.empty()) throw invariant_error("enzyme profile needs a name");
  if (profile.recognition.empty()) throw invariant_error("enzyme profile needs a recognition sequence");
  for (char c : profile.recognition)
    if (std::string("ACGT").find(c) == std::string::npos)
      throw invariant_error("recognition sequence must be over ACGT");
  if (profile.top_cut < 1) throw invariant_error("top-strand cut distance must be >= 1");
  if (profile.sticky_size() < 1) throw invariant_error("sticky end size must be >= 1");
}

EnzymeProfile parse_profile(const std::string& text) {
  EnzymeProfile profile;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    std::string value;
    if (!(ls >> value)) throw parse_error("profile line needs a value: " + line);
    if (key == "name")
      profile.name = value;
    else if (key == "recognition")
      profile.recognition = value;
    else if (key == "top_cut")
      profile.top_cut = std::stoi(value);
    else if (key == "bottom_cut")
      profile.bottom_cut = std::stoi(value);
    else
      throw parse_error("unknown profile key '" + key + "'");
  }
  try {
    validate_profile(profile);
  } catch (const invariant_error& e) {
    throw parse_error(std::string("invalid profile: ") + e.what());
  }
  return profile;
}

EnzymeProfile parse_profile_file(const std::string& path) {
  return parse_profile(read_text_file(path));
}

std::string serialize_profile(const EnzymeProfile& profile) {
  std::ostringstream out;
  out << "name " << profile.name << "\n";
  out << "recognition " << profile.recognition << "\n";
  out << "top_cut " << profile.top_cut << "\n";
  out << "bottom_cut " << profile.bottom_cut << "\n";
  return out.str();
}

EnzymeProfile foki_profile() {
  EnzymeProfile p;
  p.name = "FokI";
  p.recognition = "GGATG";
  p.top_cut = 9;
  p.bottom_cut = 13;
  return p;
}

std::string base_map(const Alphabet& alphabet) {
  static const std::string bases = "ACGT";
  if (alphabet.size() != 4)
    throw precondition_error("molecule emission needs a 4-symbol alphabet");
  return bases;
}

char wc_complement(char base) {
  switch (base) {
    case 'A': return 'T';
    case 'T': return 'A';
    case 'C': return 'G';
    case 'G': return 'C';
  }
  throw invariant_error("not a DNA base");
}

std::string reverse_complement(const std::string& seq) {
  std::string out(seq.rbegin(), seq.rend());
  for (char& c : out) c = wc_complement(c);
  return out;
}

namespace {

std::string map_symbols(const Automaton& aut, const std::string& text) {
  std::string bases = base_map(aut.alphabet());
  std::string out;
  out.reserve(text.size());
  for (char c : text) out.push_back(bases[static_cast<std::size_t>(aut.alphabet().index_of(c))]);
  return out;
}

const char* kSpacerBase = "A";

}  // namespace

std::string emit_molecules(const Automaton& aut, const EnzymeProfile& profile) {
  validate_profile(profile);
  if (aut.sticky_size() != profile.sticky_size())
    throw precondition_error("sticky end size does not match the enzyme profile");
  if (aut.max_cut() > profile.top_cut)
    throw precondition_error("cutting range exceeds what the enzyme can reach");
  std::string bases = base_map(aut.alphabet());

  std::ostringstream out;
  out << "# benenson molecule bundle\n";
  out << "# enzyme " << profile.name << " recognition " << profile.recognition << " top_cut "
      << profile.top_cut << " bottom_cut " << profile.bottom_cut << "\n";
  out << "# sigma " << aut.alphabet().symbols() << " bases " << bases << "\n";
  out << "# n " << aut.inputs() << " S " << aut.sticky_size() << " D " << aut.max_cut() << " p "
      << aut.accept_pos() << "\n";
  out << "# accept position annotated only; the output loop is biochemistry\n";

  std::string state_top = map_symbols(aut, aut.state());
  out << ">state_top\n" << state_top << "\n";
  // Bottom strand written 5'->3'; the first S bases of the top strand stay
  // single-stranded as the initial overhang.
  std::string duplex = state_top.substr(static_cast<std::size_t>(aut.sticky_size()));
  out << ">state_bottom\n" << reverse_complement(duplex) << "\n";

  for (const auto& rule : aut.rules()) {
    if (rule.dist > profile.top_cut)
      throw precondition_error("rule cuts deeper than the enzyme reaches");
    int spacer = profile.top_cut - rule.dist;
    std::string top = profile.recognition + std::string(static_cast<std::size_t>(spacer), *kSpacerBase);
    std::string overhang = map_symbols(aut, rule.sticky);
    std::string bottom = reverse_complement(top + overhang);
    out << ">rule_" << rule.var << "_" << rule.bit << "_" << rule.sticky << "_" << rule.dist
        << "\n";
    out << top << "\n" << bottom << "\n";
  }
  return out.str();
}

Automaton parse_molecules(const std::string& bundle) {
  std::istringstream in(bundle);
  std::string line;
  std::string sigma, bases, recognition;
  int n = 0, S = -1, D = -1, top_cut = 0, bottom_cut = 0;
  std::int64_t p = -1;
  std::string state_top;
  struct RawRule {
    int var, bit, dist;
    std::string top, bottom;
  };
  std::vector<RawRule> raw;
  std::string pending_record;
  std::vector<std::string> pending_lines;

  auto flush_record = [&]() {
    if (pending_record.empty()) return;
    if (pending_record == "state_top") {
      if (pending_lines.size() != 1) throw parse_error("state_top record needs one sequence line");
      state_top = pending_lines[0];
    } else if (pending_record == "state_bottom") {
      // Redundant with state_top; checked for complementarity below.
      if (pending_lines.size() != 1) throw parse_error("state_bottom record needs one sequence line");
      if (state_top.empty()) throw parse_error("state_bottom before state_top");
      if (S < 0) throw parse_error("missing S header before records");
      std::string expected = reverse_complement(state_top.substr(static_cast<std::size_t>(S)));
      if (pending_lines[0] != expected)
        throw parse_error("state_bottom is not the complement of the duplex region");
    } else if (pending_record.rfind("rule_", 0) == 0) {
      if (pending_lines.size() != 2) throw parse_error("rule record needs two sequence lines");
      RawRule r;
      std::string rest = pending_record.substr(5);
      std::vector<std::string> parts;
      std::size_t pos = 0;
      while (pos != std::string::npos) {
        std::size_t next = rest.find('_', pos);
        parts.push_back(rest.substr(pos, next == std::string::npos ? next : next - pos));
        pos = next == std::string::npos ? next : next + 1;
      }
      if (parts.size() != 4) throw parse_error("bad rule record name: " + pending_record);
      r.var = std::stoi(parts[0]);
      r.bit = std::stoi(parts[1]);
      r.dist = std::stoi(parts[3]);
      r.top = pending_lines[0];
      r.bottom = pending_lines[1];
      raw.push_back(std::move(r));
    } else {
      throw parse_error("unknown record '" + pending_record + "'");
    }
    pending_record.clear();
    pending_lines.clear();
  };

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key, skip;
      while (hs >> key) {
        if (key == "enzyme") hs >> skip;  // enzyme name; geometry keys follow
        else if (key == "recognition") hs >> recognition;
        else if (key == "top_cut") hs >> top_cut;
        else if (key == "bottom_cut") hs >> bottom_cut;
        else if (key == "sigma") hs >> sigma;
        else if (key == "bases") hs >> bases;
        else if (key == "n") hs >> n;
        else if (key == "S") hs >> S;
        else if (key == "D") hs >> D;
        else if (key == "p") hs >> p;
      }
      continue;
    }
    if (line[0] == '>') {
      flush_record();
      pending_record = line.substr(1);
      continue;
    }
    pending_lines.push_back(line);
  }
  flush_record();

  if (sigma.empty() || bases.empty() || n <= 0 || S < 0 || D < 0 || p < 0 || top_cut <= 0)
    throw parse_error("molecule bundle header incomplete");
  Alphabet alphabet(sigma);
  if (alphabet.size() != 4 || bases.size() != 4)
    throw parse_error("molecule bundle needs a 4-symbol alphabet");

  auto unmap = [&](const std::string& seq) {
    std::string out;
    out.reserve(seq.size());
    for (char c : seq) {
      std::size_t idx = bases.find(c);
      if (idx == std::string::npos) throw parse_error("sequence uses a non-base character");
      out.push_back(alphabet.symbol(static_cast<int>(idx)));
    }
    return out;
  };

  std::string state = unmap(state_top);
  std::vector<CuttingRule> rules;
  for (const auto& r : raw) {
    if (r.top.size() < recognition.size())
      throw parse_error("rule molecule shorter than the recognition site");
    if (r.top.substr(0, recognition.size()) != recognition)
      throw parse_error("rule molecule lacks the recognition site");
    int spacer = static_cast<int>(r.top.size() - recognition.size());
    int dist = top_cut - spacer;
    if (dist != r.dist) throw parse_error("rule record distance disagrees with its geometry");
    if (r.bottom.size() != r.top.size() + static_cast<std::size_t>(S))
      throw parse_error("rule molecule overhang has the wrong length");
    std::string overhang = r.bottom.substr(0, static_cast<std::size_t>(S));
    // The overhang pairs with the state's sticky end; undo the complement.
    std::string sticky_bases = reverse_complement(overhang);
    if (reverse_complement(r.top + sticky_bases) != r.bottom)
      throw parse_error("rule molecule strands are not complementary");
    rules.push_back({r.var, r.bit, unmap(sticky_bases), dist});
  }
  return Automaton(alphabet, n, S, D, state, std::move(rules), p);
}

PlausibilityReport plausibility_check(const Automaton& aut, const EnzymeProfile& profile) {
  PlausibilityReport report;
  // TODO: scan the state duplex for stray recognition-site occurrences; an
  // embedded site would let the enzyme cut without any rule molecule bound.
  report.skipped_checks.push_back("off-target recognition sites inside the state molecule");
  for (const auto& rule : aut.rules()) {
    if (rule.dist == 1) report.adjacent_nick_cuts.push_back(rule);
    if (rule.dist > profile.top_cut) report.out_of_reach_cuts.push_back(rule);
  }
  if (aut.alphabet().size() == 4) {
    std::string bases = base_map(aut.alphabet());
    std::vector<std::string> seen;
    for (const auto& rule : aut.rules()) {
      std::string mapped;
      for (char c : rule.sticky)
        mapped.push_back(bases[static_cast<std::size_t>(aut.alphabet().index_of(c))]);
      if (mapped == reverse_complement(mapped) &&
          std::find(seen.begin(), seen.end(), rule.sticky) == seen.end()) {
        seen.push_back(rule.sticky);
        report.self_complementary.push_back(rule.sticky);
      }
    }
  }
  return report;
}

StemMargin stem_margin(const Automaton& aut, int exhaustive_limit, std::uint64_t seed,
                       std::int64_t samples) {
  StemMargin result;
  int n = aut.inputs();
  auto consider = [&](const bits& x) {
    auto reach = reachable_offsets(aut, x);
    if (std::find(reach.begin(), reach.end(), aut.accept_pos()) != reach.end()) return;
    std::int64_t margin = aut.accept_pos() - reach.back();
    if (!result.defined || margin < result.value) {
      result.defined = true;
      result.value = margin;
    }
  };
  if (n <= exhaustive_limit) {
    result.exhaustive = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
      consider(bits_from_counter(mask, n));
  } else {
    for (std::int64_t t = 0; t < samples; ++t) consider(rng::input_bits(seed, static_cast<std::uint64_t>(t), n));
  }
  return result;
}

}  // namespace benenson
