#include "barrington/barrington.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace benenson {

Perm commutator(const Perm& a, const Perm& b) {
  return then(then(then(a, b), a.inverse()), b.inverse());
}

CyclePair select_cycles() {
  Perm beta = Perm::from_cycle(5, {0, 1, 2, 3, 4});
  Perm gamma = Perm::from_cycle(5, {0, 2, 4, 3, 1});
  Perm alpha = commutator(beta, gamma);
  // Shipped constants are re-checked here; tests verify the same facts by
  // brute-force search over 5-cycle pairs.
  if (!is_single_cycle(alpha) || alpha.apply(0) == 0)
    throw invariant_error("cycle pair constants are broken");
  return {alpha, beta, gamma};
}

Perm smallest_conjugator(const Perm& from, const Perm& to) {
  std::vector<int> img(static_cast<std::size_t>(from.degree()));
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<int>(i);
  do {
    Perm r{std::vector<int>(img)};
    if (conjugate(from, r) == to) return r;
  } while (std::next_permutation(img.begin(), img.end()));
  throw invariant_error("permutations are not conjugate");
}

namespace {

// One instruction: read variable `var`, apply f1 if set, f0 otherwise.
struct Instruction {
  int var;
  Perm f0;
  Perm f1;
};

using Program = std::vector<Instruction>;

std::int64_t pow4(int e) {
  std::int64_t v = 1;
  while (e-- > 0) v *= 4;
  return v;
}

void pad_to(Program& prog, std::int64_t len) {
  Perm id = Perm::identity(5);
  while (static_cast<std::int64_t>(prog.size()) < len) prog.push_back({1, id, id});
}

Program inverted(const Program& prog) {
  Program out;
  out.reserve(prog.size());
  for (auto it = prog.rbegin(); it != prog.rend(); ++it)
    out.push_back({it->var, it->f0.inverse(), it->f1.inverse()});
  return out;
}

void append(Program& dst, const Program& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

class Compiler {
 public:
  Compiler(const Circuit& circuit, const CyclePair& cycles)
      : circuit_(circuit), cycles_(cycles) {
    depth_.resize(circuit.gates.size());
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
      const Gate& g = circuit.gates[i];
      switch (g.kind) {
        case GateKind::Input:
        case GateKind::Const:
          depth_[i] = 0;
          break;
        case GateKind::Not:
          depth_[i] = depth_[static_cast<std::size_t>(g.arg0)];
          break;
        case GateKind::And:
        case GateKind::Or:
          depth_[i] = 1 + std::max(depth_[static_cast<std::size_t>(g.arg0)],
                                   depth_[static_cast<std::size_t>(g.arg1)]);
          break;
      }
    }
  }

  // Program of exactly 4^depth(gate) instructions whose product is `target`
  // when the gate evaluates to 1 and identity otherwise.
  Program compile(int gate, const Perm& target) {
    const Gate& g = circuit_.gates[static_cast<std::size_t>(gate)];
    Perm id = Perm::identity(5);
    switch (g.kind) {
      case GateKind::Input:
        return {{g.arg0, id, target}};
      case GateKind::Const:
        return {{1, g.arg0 ? target : id, g.arg0 ? target : id}};
      case GateKind::Not:
        return compile_negated(g.arg0, target);
      case GateKind::And:
        return compile_and(g.arg0, false, g.arg1, false, target,
                           depth_[static_cast<std::size_t>(gate)]);
      case GateKind::Or: {
        // a | b == !(!a & !b): build the inner conjunction against the
        // inverse target, then fold the final constant into the last layer.
        Program prog = compile_and(g.arg0, true, g.arg1, true, target.inverse(),
                                   depth_[static_cast<std::size_t>(gate)]);
        Instruction& last = prog.back();
        last.f0 = then(last.f0, target);
        last.f1 = then(last.f1, target);
        return prog;
      }
    }
    throw invariant_error("unreachable gate kind");
  }

 private:
  Program compile_negated(int gate, const Perm& target) {
    Program prog = compile(gate, target.inverse());
    Instruction& last = prog.back();
    last.f0 = then(last.f0, target);
    last.f1 = then(last.f1, target);
    return prog;
  }

  Program compile_and(int left, bool negate_left, int right, bool negate_right,
                      const Perm& target, int depth) {
    Perm r = conjugator_for(target);
    Perm beta = conjugate(cycles_.beta, r);
    Perm gamma = conjugate(cycles_.gamma, r);
    std::int64_t half = pow4(depth - 1);
    Program p = negate_left ? compile_negated(left, beta) : compile(left, beta);
    Program q = negate_right ? compile_negated(right, gamma) : compile(right, gamma);
    pad_to(p, half);
    pad_to(q, half);
    Program prog;
    prog.reserve(static_cast<std::size_t>(4 * half));
    append(prog, p);
    append(prog, q);
    append(prog, inverted(p));
    append(prog, inverted(q));
    return prog;
  }

  const Perm& conjugator_for(const Perm& target) {
    auto it = conjugators_.find(target);
    if (it == conjugators_.end())
      it = conjugators_.emplace(target, smallest_conjugator(cycles_.alpha, target)).first;
    return it->second;
  }

  const Circuit& circuit_;
  CyclePair cycles_;
  std::vector<int> depth_;
  std::map<Perm, Perm> conjugators_;
};

}  // namespace

LayeredBp barrington_compile(const Circuit& c) {
  validate_circuit(c);
  CyclePair cycles = select_cycles();
  Compiler compiler(c, cycles);
  Program prog = compiler.compile(c.output, cycles.alpha);
  LayeredBp bp;
  bp.n = c.n;
  bp.width = 5;
  bp.layers = static_cast<int>(prog.size()) + 1;
  bp.steps.reserve(prog.size());
  for (const auto& instr : prog) {
    std::vector<LayeredNode> layer(5);
    for (int j = 0; j < 5; ++j) {
      layer[static_cast<std::size_t>(j)].var = instr.var;
      layer[static_cast<std::size_t>(j)].goto0 = instr.f0.apply(j) + 1;
      layer[static_cast<std::size_t>(j)].goto1 = instr.f1.apply(j) + 1;
    }
    bp.steps.push_back(std::move(layer));
  }
  bp.accept.assign(5, false);
  bp.accept[static_cast<std::size_t>(cycles.alpha.apply(0))] = true;
  return bp;
}

Perm program_permutation(const LayeredBp& bp, const bits& x) {
  Perm acc = Perm::identity(bp.width);
  for (const auto& layer : bp.steps) {
    std::vector<int> img(static_cast<std::size_t>(bp.width));
    for (int j = 0; j < bp.width; ++j) {
      const LayeredNode& node = layer[static_cast<std::size_t>(j)];
      img[static_cast<std::size_t>(j)] =
          (x[static_cast<std::size_t>(node.var - 1)] ? node.goto1 : node.goto0) - 1;
    }
    acc = then(acc, Perm(std::move(img)));
  }
  return acc;
}

}  // namespace benenson
