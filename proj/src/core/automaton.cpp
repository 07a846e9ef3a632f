#include "core/automaton.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace benenson {

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) throw invariant_error("alphabet needs at least 2 symbols");
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    for (std::size_t j = i + 1; j < symbols_.size(); ++j)
      if (symbols_[i] == symbols_[j]) throw invariant_error("alphabet has duplicate symbols");
}

int Alphabet::index_of(char c) const {
  auto pos = symbols_.find(c);
  return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

bool rule_less(const CuttingRule& a, const CuttingRule& b) {
  if (a.sticky != b.sticky) return a.sticky < b.sticky;
  if (a.var != b.var) return a.var < b.var;
  if (a.bit != b.bit) return a.bit < b.bit;
  return a.dist < b.dist;
}

Automaton::Automaton(Alphabet alphabet, int n, int sticky_size, int max_cut, std::string state,
                     std::vector<CuttingRule> rules, std::int64_t accept_pos)
    : alphabet_(std::move(alphabet)),
      n_(n),
      sticky_size_(sticky_size),
      max_cut_(max_cut),
      state_(std::move(state)),
      rules_(std::move(rules)),
      accept_pos_(accept_pos) {
  if (n_ < 1) throw invariant_error("automaton needs at least one input");
  if (sticky_size_ < 0) throw invariant_error("sticky size must be >= 0");
  if (max_cut_ < 0) throw invariant_error("cutting range must be >= 0");
  for (char c : state_)
    if (!alphabet_.contains(c)) throw invariant_error("state symbol outside alphabet");
  if (accept_pos_ < 0 || accept_pos_ > length())
    throw invariant_error("accept position outside [0, L]");
  for (const auto& r : rules_) {
    if (r.var < 1 || r.var > n_) throw invariant_error("rule variable index outside [1, n]");
    if (r.bit != 0 && r.bit != 1) throw invariant_error("rule bit must be 0 or 1");
    if (static_cast<int>(r.sticky.size()) != sticky_size_)
      throw invariant_error("rule sticky end length must equal S");
    if (r.dist < 1 || r.dist > max_cut_) throw invariant_error("rule distance outside [1, D]");
    for (char c : r.sticky)
      if (!alphabet_.contains(c)) throw invariant_error("rule sticky symbol outside alphabet");
  }
  std::sort(rules_.begin(), rules_.end(), rule_less);
  rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());
  for (std::size_t i = 0; i < rules_.size(); ++i) by_sticky_[rules_[i].sticky].push_back(i);
}

const std::vector<std::size_t>* Automaton::rules_for(std::string_view sticky) const {
  auto it = by_sticky_.find(std::string(sticky));
  return it == by_sticky_.end() ? nullptr : &it->second;
}

bool Automaton::operator==(const Automaton& o) const {
  return alphabet_ == o.alphabet_ && n_ == o.n_ && sticky_size_ == o.sticky_size_ &&
         max_cut_ == o.max_cut_ && state_ == o.state_ && rules_ == o.rules_ &&
         accept_pos_ == o.accept_pos_;
}

std::optional<std::string_view> sticky_end(const Automaton& aut, std::int64_t offset) {
  if (offset < 0 || offset > aut.length())
    throw precondition_error("offset outside [0, L]");
  if (aut.length() - offset < aut.sticky_size()) return std::nullopt;
  return std::string_view(aut.state()).substr(static_cast<std::size_t>(offset),
                                              static_cast<std::size_t>(aut.sticky_size()));
}

std::vector<std::int64_t> step(const Automaton& aut, const bits& x, std::int64_t offset) {
  if (static_cast<int>(x.size()) != aut.inputs())
    throw precondition_error("input length must equal n");
  std::vector<std::int64_t> next;
  auto sticky = sticky_end(aut, offset);
  if (!sticky) return next;
  const auto* idx = aut.rules_for(*sticky);
  if (!idx) return next;
  for (std::size_t i : *idx) {
    const auto& r = aut.rules()[i];
    if (x[static_cast<std::size_t>(r.var - 1)] != r.bit) continue;
    std::int64_t target = offset + r.dist;
    if (target <= aut.length()) next.push_back(target);
  }
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return next;
}

CutTrace run(const Automaton& aut, const bits& x) {
  CutTrace trace;
  std::int64_t offset = 0;
  trace.offsets.push_back(offset);
  while (offset < aut.accept_pos()) {
    auto next = step(aut, x, offset);
    if (next.empty()) break;
    if (next.size() > 1) throw determinism_error("conflicting cutting rules apply at offset " +
                                                 std::to_string(offset));
    // Record the rule that produced the move (unique by determinism).
    auto sticky = sticky_end(aut, offset);
    for (std::size_t i : *aut.rules_for(*sticky)) {
      const auto& r = aut.rules()[i];
      if (x[static_cast<std::size_t>(r.var - 1)] == r.bit && offset + r.dist == next[0]) {
        trace.applied.push_back(r);
        break;
      }
    }
    offset = next[0];
    trace.offsets.push_back(offset);
  }
  trace.accepted = offset == aut.accept_pos();
  return trace;
}

std::vector<std::int64_t> reachable_offsets(const Automaton& aut, const bits& x) {
  std::vector<char> seen(static_cast<std::size_t>(aut.length()) + 1, 0);
  std::vector<std::int64_t> frontier{0};
  seen[0] = 1;
  while (!frontier.empty()) {
    std::int64_t at = frontier.back();
    frontier.pop_back();
    for (std::int64_t next : step(aut, x, at)) {
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = 1;
        frontier.push_back(next);
      }
    }
  }
  std::vector<std::int64_t> out;
  for (std::int64_t j = 0; j <= aut.length(); ++j)
    if (seen[static_cast<std::size_t>(j)]) out.push_back(j);
  return out;
}

std::vector<DeterminismViolation> check_determinism(const Automaton& aut) {
  std::vector<DeterminismViolation> violations;
  const auto& rules = aut.rules();
  // Rules are sorted by sticky end, so conflicting pairs are adjacent runs.
  std::size_t lo = 0;
  while (lo < rules.size()) {
    std::size_t hi = lo;
    while (hi < rules.size() && rules[hi].sticky == rules[lo].sticky) ++hi;
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = i + 1; j < hi; ++j) {
        if (rules[i].dist == rules[j].dist) continue;
        bool allowed = rules[i].var == rules[j].var && rules[i].bit != rules[j].bit;
        if (!allowed) violations.push_back({rules[i], rules[j]});
      }
    lo = hi;
  }
  return violations;
}

bool is_deterministic(const Automaton& aut) { return check_determinism(aut).empty(); }

int sparseness(const Automaton& aut) {
  const auto& rules = aut.rules();
  int best = 0;
  for (int var = 1; var <= aut.inputs(); ++var) {
    int count = 0;
    std::size_t lo = 0;
    while (lo < rules.size()) {
      std::size_t hi = lo;
      while (hi < rules.size() && rules[hi].sticky == rules[lo].sticky) ++hi;
      bool reads = false;
      for (std::size_t i = lo; i < hi && !reads; ++i)
        for (std::size_t j = lo; j < hi && !reads; ++j)
          if (rules[i].var == var && rules[j].var == var && rules[i].bit == 0 &&
              rules[j].bit == 1 && rules[i].dist != rules[j].dist)
            reads = true;
      if (reads) ++count;
      lo = hi;
    }
    best = std::max(best, count);
  }
  return best;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

int parse_int(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw parse_error(std::string("bad integer for ") + what + ": '" + tok + "'");
  }
}

}  // namespace

Automaton parse_automaton(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::optional<std::string> sigma;
  std::optional<int> n, S, D;
  std::optional<std::int64_t> p;
  std::optional<std::string> state;
  struct PendingRule {
    int var, bit, dist;
    std::string sticky;
  };
  std::vector<PendingRule> pending;
  while (std::getline(in, line)) {
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (!header) {
      if (tokens.size() != 2 || tokens[0] != "benenson" || tokens[1] != "v1")
        throw parse_error("expected header 'benenson v1'");
      header = true;
      continue;
    }
    const std::string& key = tokens[0];
    if (key == "sigma") {
      if (tokens.size() != 2) throw parse_error("sigma line needs one token");
      sigma = tokens[1];
    } else if (key == "n") {
      if (tokens.size() != 2) throw parse_error("n line needs one integer");
      n = parse_int(tokens[1], "n");
    } else if (key == "S") {
      if (tokens.size() != 2) throw parse_error("S line needs one integer");
      S = parse_int(tokens[1], "S");
    } else if (key == "D") {
      if (tokens.size() != 2) throw parse_error("D line needs one integer");
      D = parse_int(tokens[1], "D");
    } else if (key == "p") {
      if (tokens.size() != 2) throw parse_error("p line needs one integer");
      p = parse_int(tokens[1], "p");
    } else if (key == "state") {
      if (tokens.size() > 2) throw parse_error("state line needs at most one token");
      state = tokens.size() == 2 ? tokens[1] : std::string();
    } else if (key == "rule") {
      if (tokens.size() != 5) throw parse_error("rule line needs: rule <i> <0|1> <omega> <d>");
      PendingRule r;
      r.var = parse_int(tokens[1], "rule variable");
      r.bit = parse_int(tokens[2], "rule bit");
      r.sticky = tokens[3];
      r.dist = parse_int(tokens[4], "rule distance");
      pending.push_back(r);
    } else if (key == "irule") {
      if (tokens.size() != 3) throw parse_error("irule line needs: irule <omega> <d>");
      int dist = parse_int(tokens[2], "irule distance");
      pending.push_back({1, 0, dist, tokens[1]});
      pending.push_back({1, 1, dist, tokens[1]});
    } else {
      throw parse_error("unknown directive '" + key + "'");
    }
  }
  if (!header) throw parse_error("missing 'benenson v1' header");
  if (!sigma) throw parse_error("missing sigma line");
  if (!n || !S || !D || !p) throw parse_error("missing one of n/S/D/p lines");
  if (!state) throw parse_error("missing state line");
  std::vector<CuttingRule> rules;
  rules.reserve(pending.size());
  for (const auto& r : pending) rules.push_back({r.var, r.bit, r.sticky, r.dist});
  try {
    return Automaton(Alphabet(*sigma), *n, *S, *D, *state, std::move(rules), *p);
  } catch (const invariant_error& e) {
    throw parse_error(std::string("invalid automaton: ") + e.what());
  }
}

Automaton parse_automaton_file(const std::string& path) {
  return parse_automaton(read_text_file(path));
}

std::string serialize_automaton(const Automaton& aut) {
  std::ostringstream out;
  out << "benenson v1\n";
  out << "sigma " << aut.alphabet().symbols() << "\n";
  out << "n " << aut.inputs() << "\n";
  out << "S " << aut.sticky_size() << "\n";
  out << "D " << aut.max_cut() << "\n";
  out << "p " << aut.accept_pos() << "\n";
  out << "state";
  if (!aut.state().empty()) out << " " << aut.state();
  out << "\n";
  const auto& rules = aut.rules();
  // Input-independent pairs (var 1, both bits, same distance) collapse to the
  // irule shorthand; rules are already in canonical order.
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (i + 1 < rules.size() && rules[i].var == 1 && rules[i].bit == 0 &&
        rules[i + 1].var == 1 && rules[i + 1].bit == 1 &&
        rules[i].sticky == rules[i + 1].sticky && rules[i].dist == rules[i + 1].dist) {
      out << "irule " << rules[i].sticky << " " << rules[i].dist << "\n";
      ++i;
      continue;
    }
    out << "rule " << rules[i].var << " " << rules[i].bit << " " << rules[i].sticky << " "
        << rules[i].dist << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write file: " + path);
  out << content;
}

}  // namespace benenson
