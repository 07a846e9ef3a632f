#include "machines/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "core/automaton.hpp"

namespace benenson {

void validate_circuit(const Circuit& c) {
  if (c.n < 1) throw invariant_error("circuit needs at least one input");
  if (c.gates.empty()) throw invariant_error("circuit has no gates");
  if (!c.names.empty() && c.names.size() != c.gates.size())
    throw invariant_error("circuit name table size mismatch");
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::Input:
        if (g.arg0 < 1 || g.arg0 > c.n) throw invariant_error("input index outside [1, n]");
        break;
      case GateKind::Const:
        if (g.arg0 != 0 && g.arg0 != 1) throw invariant_error("const value must be 0 or 1");
        break;
      case GateKind::Not:
        if (g.arg0 < 0 || g.arg0 >= static_cast<int>(i))
          throw invariant_error("gate operand must reference an earlier gate");
        break;
      case GateKind::And:
      case GateKind::Or:
        if (g.arg0 < 0 || g.arg0 >= static_cast<int>(i) || g.arg1 < 0 ||
            g.arg1 >= static_cast<int>(i))
          throw invariant_error("gate operand must reference an earlier gate");
        break;
    }
  }
  if (c.output < 0 || c.output >= static_cast<int>(c.gates.size()))
    throw invariant_error("output references a missing gate");
}

std::vector<std::uint8_t> eval_all_gates(const Circuit& c, const bits& x) {
  if (static_cast<int>(x.size()) != c.n) throw precondition_error("input length must equal n");
  std::vector<std::uint8_t> v(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::Input:
        v[i] = x[static_cast<std::size_t>(g.arg0 - 1)];
        break;
      case GateKind::Const:
        v[i] = static_cast<std::uint8_t>(g.arg0);
        break;
      case GateKind::Not:
        v[i] = v[static_cast<std::size_t>(g.arg0)] ? 0 : 1;
        break;
      case GateKind::And:
        v[i] = v[static_cast<std::size_t>(g.arg0)] & v[static_cast<std::size_t>(g.arg1)];
        break;
      case GateKind::Or:
        v[i] = v[static_cast<std::size_t>(g.arg0)] | v[static_cast<std::size_t>(g.arg1)];
        break;
    }
  }
  return v;
}

int eval_circuit(const Circuit& c, const bits& x) {
  return eval_all_gates(c, x)[static_cast<std::size_t>(c.output)];
}

namespace {

int depth_of(const Circuit& c, bool count_not) {
  std::vector<int> d(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::Input:
      case GateKind::Const:
        d[i] = 0;
        break;
      case GateKind::Not:
        d[i] = d[static_cast<std::size_t>(g.arg0)] + (count_not ? 1 : 0);
        break;
      case GateKind::And:
      case GateKind::Or:
        d[i] = std::max(d[static_cast<std::size_t>(g.arg0)],
                        d[static_cast<std::size_t>(g.arg1)]) +
               1;
        break;
    }
  }
  return d[static_cast<std::size_t>(c.output)];
}

std::vector<std::string> tokenize_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

}  // namespace

int circuit_depth(const Circuit& c) { return depth_of(c, true); }
int and_or_depth(const Circuit& c) { return depth_of(c, false); }

Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  Circuit c;
  c.n = 0;
  bool have_inputs = false;
  bool have_output = false;
  std::unordered_map<std::string, int> by_name;
  auto resolve = [&](const std::string& name) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw parse_error("reference to undefined gate '" + name + "'");
    return it->second;
  };
  while (std::getline(in, line)) {
    auto tokens = tokenize_line(line);
    if (tokens.empty()) continue;
    if (!header) {
      if (tokens.size() != 2 || tokens[0] != "circuit" || tokens[1] != "v1")
        throw parse_error("expected header 'circuit v1'");
      header = true;
      continue;
    }
    if (tokens[0] == "inputs") {
      if (tokens.size() != 2) throw parse_error("inputs line needs one integer");
      c.n = std::stoi(tokens[1]);
      have_inputs = true;
    } else if (tokens[0] == "let") {
      if (!have_inputs) throw parse_error("gate line before inputs line");
      if (tokens.size() < 4 || tokens[2] != "=") throw parse_error("bad gate line");
      const std::string& name = tokens[1];
      if (by_name.count(name)) throw parse_error("duplicate gate name '" + name + "'");
      const std::string& op = tokens[3];
      Gate g;
      if (op == "INPUT") {
        if (tokens.size() != 5) throw parse_error("INPUT needs one index");
        g.kind = GateKind::Input;
        g.arg0 = std::stoi(tokens[4]);
      } else if (op == "CONST") {
        if (tokens.size() != 5) throw parse_error("CONST needs 0 or 1");
        g.kind = GateKind::Const;
        g.arg0 = std::stoi(tokens[4]);
      } else if (op == "NOT") {
        if (tokens.size() != 5) throw parse_error("NOT needs one operand");
        g.kind = GateKind::Not;
        g.arg0 = resolve(tokens[4]);
      } else if (op == "AND" || op == "OR") {
        if (tokens.size() != 6) throw parse_error(op + " needs two operands");
        g.kind = op == "AND" ? GateKind::And : GateKind::Or;
        g.arg0 = resolve(tokens[4]);
        g.arg1 = resolve(tokens[5]);
      } else {
        throw parse_error("unknown gate op '" + op + "'");
      }
      by_name[name] = static_cast<int>(c.gates.size());
      c.gates.push_back(g);
      c.names.push_back(name);
    } else if (tokens[0] == "output") {
      if (tokens.size() != 2) throw parse_error("output line needs one gate name");
      c.output = resolve(tokens[1]);
      have_output = true;
    } else {
      throw parse_error("unknown directive '" + tokens[0] + "'");
    }
  }
  if (!header) throw parse_error("missing 'circuit v1' header");
  if (!have_inputs) throw parse_error("missing inputs line");
  if (!have_output) throw parse_error("missing output line");
  try {
    validate_circuit(c);
  } catch (const invariant_error& e) {
    throw parse_error(std::string("invalid circuit: ") + e.what());
  }
  return c;
}

Circuit parse_circuit_file(const std::string& path) {
  return parse_circuit(read_text_file(path));
}

std::string serialize_circuit(const Circuit& c) {
  validate_circuit(c);
  std::ostringstream out;
  out << "circuit v1\n";
  out << "inputs " << c.n << "\n";
  auto name_of = [&](int idx) {
    if (!c.names.empty() && !c.names[static_cast<std::size_t>(idx)].empty())
      return c.names[static_cast<std::size_t>(idx)];
    return "g" + std::to_string(idx);
  };
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    out << "let " << name_of(static_cast<int>(i)) << " = ";
    switch (g.kind) {
      case GateKind::Input:
        out << "INPUT " << g.arg0;
        break;
      case GateKind::Const:
        out << "CONST " << g.arg0;
        break;
      case GateKind::Not:
        out << "NOT " << name_of(g.arg0);
        break;
      case GateKind::And:
        out << "AND " << name_of(g.arg0) << " " << name_of(g.arg1);
        break;
      case GateKind::Or:
        out << "OR " << name_of(g.arg0) << " " << name_of(g.arg1);
        break;
    }
    out << "\n";
  }
  out << "output " << name_of(c.output) << "\n";
  return out.str();
}

}  // namespace benenson
