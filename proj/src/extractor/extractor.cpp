#include "extractor/extractor.hpp"

#include <algorithm>
#include <set>

namespace benenson {

PhiTable identity_table(int range) {
  PhiTable t;
  t.range = range;
  t.rows.resize(static_cast<std::size_t>(range));
  for (int j = 0; j < range; ++j) t.rows[static_cast<std::size_t>(j)] = j;
  return t;
}

PhiTable compute_phi(const Automaton& aut, int q, const bits& x,
                     std::optional<std::int64_t> stop_at) {
  std::int64_t D = aut.max_cut();
  std::int64_t L = aut.length();
  if (D < 1) throw precondition_error("cut-forwarding tables need D >= 1");
  if (q < 1 || static_cast<std::int64_t>(q - 1) * D >= L)
    throw precondition_error("segment index out of range");
  std::int64_t base = static_cast<std::int64_t>(q - 1) * D;
  std::int64_t next_base = base + D;
  std::int64_t limit = std::min(next_base + D - 1, L);  // last offset of segment q+1

  PhiTable table;
  table.range = static_cast<int>(D);
  table.rows.assign(static_cast<std::size_t>(D), table.bottom());
  for (int j = 0; j < D; ++j) {
    std::int64_t start = base + j;
    if (start > L) break;
    // Reachability inside the two-segment window; offsets never decrease so
    // anything cut past the window is irrelevant to this table.
    std::vector<char> seen(static_cast<std::size_t>(limit - start + 1), 0);
    std::vector<std::int64_t> frontier{start};
    seen[0] = 1;
    int best = table.bottom();
    if (start >= next_base) continue;  // entry outside segment q (short state)
    while (!frontier.empty()) {
      std::int64_t at = frontier.back();
      frontier.pop_back();
      if (at >= next_base && at - next_base < D) {
        int h = static_cast<int>(at - next_base);
        if (best == table.bottom() || h > best) best = h;
      }
      if (stop_at && at == *stop_at) continue;
      for (std::int64_t to : step(aut, x, at)) {
        if (to > limit) continue;
        if (!seen[static_cast<std::size_t>(to - start)]) {
          seen[static_cast<std::size_t>(to - start)] = 1;
          frontier.push_back(to);
        }
      }
    }
    table.rows[static_cast<std::size_t>(j)] = best;
  }
  return table;
}

PhiTable compose_tables(const PhiTable& first, const PhiTable& second) {
  if (first.range != second.range)
    throw precondition_error("cannot compose tables of different ranges");
  PhiTable out;
  out.range = first.range;
  out.rows.resize(static_cast<std::size_t>(first.range));
  for (int j = 0; j < first.range; ++j) {
    int h = first.rows[static_cast<std::size_t>(j)];
    out.rows[static_cast<std::size_t>(j)] =
        h == first.bottom() ? out.bottom() : second.rows[static_cast<std::size_t>(h)];
  }
  return out;
}

int row_bits(int range) {
  return ceil_log(static_cast<std::uint64_t>(range) + 1, 2);
}

namespace {

int add_gate(Fragment& f, GateKind kind, int a0, int a1, const std::string& prefix) {
  Gate g;
  g.kind = kind;
  g.arg0 = a0;
  g.arg1 = a1;
  f.circuit.gates.push_back(g);
  f.circuit.names.push_back(prefix + "_" + std::to_string(f.circuit.gates.size() - 1));
  return static_cast<int>(f.circuit.gates.size() - 1);
}

int const_wire(Fragment& f, int value, const std::string& prefix) {
  return add_gate(f, GateKind::Const, value, 0, prefix);
}

int or_tree(Fragment& f, std::vector<int> wires, const std::string& prefix) {
  if (wires.empty()) return const_wire(f, 0, prefix);
  while (wires.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i + 1 < wires.size(); i += 2)
      next.push_back(add_gate(f, GateKind::Or, wires[i], wires[i + 1], prefix));
    if (wires.size() % 2 == 1) next.push_back(wires.back());
    wires = std::move(next);
  }
  return wires[0];
}

int and_tree(Fragment& f, std::vector<int> wires, const std::string& prefix) {
  if (wires.empty()) return const_wire(f, 1, prefix);
  while (wires.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i + 1 < wires.size(); i += 2)
      next.push_back(add_gate(f, GateKind::And, wires[i], wires[i + 1], prefix));
    if (wires.size() % 2 == 1) next.push_back(wires.back());
    wires = std::move(next);
  }
  return wires[0];
}

// Wire testing `bundle == value` over `width` bits, LSB first.
int equals_const(Fragment& f, const std::vector<int>& bundle, int value,
                 const std::string& prefix) {
  std::vector<int> matched;
  for (std::size_t w = 0; w < bundle.size(); ++w) {
    int bit = (value >> w) & 1;
    matched.push_back(bit ? bundle[w] : add_gate(f, GateKind::Not, bundle[w], 0, prefix));
  }
  return and_tree(f, std::move(matched), prefix);
}

std::vector<int> input_wires_for(Fragment& f, const std::vector<int>& vars,
                                 const std::string& prefix) {
  std::vector<int> wires;
  wires.reserve(vars.size());
  for (int v : vars) wires.push_back(add_gate(f, GateKind::Input, v, 0, prefix));
  return wires;
}

}  // namespace

std::vector<int> build_gadget_a(Fragment& fragment, const Automaton& aut, int q,
                                std::optional<std::int64_t> stop_at, GadgetInfo* info,
                                const std::string& prefix) {
  std::int64_t D = aut.max_cut();
  std::int64_t L = aut.length();
  int S = aut.sticky_size();
  // Variables whose rules can fire anywhere a walk inside the two-segment
  // window may stand; sticky ends may reach past the window's end.
  std::set<int> vars;
  std::int64_t first_anchor = (static_cast<std::int64_t>(q) - 1) * D;
  std::int64_t last_anchor = std::min(first_anchor + 2 * D - 1, L - S);
  for (std::int64_t o = first_anchor; o <= last_anchor; ++o) {
    auto window = sticky_end(aut, o);
    if (!window) break;
    const auto* idx = aut.rules_for(*window);
    if (!idx) continue;
    for (std::size_t i : *idx) vars.insert(aut.rules()[i].var);
  }
  std::vector<int> relevant(vars.begin(), vars.end());
  if (info) {
    info->relevant_vars = relevant;
    info->over_budget = static_cast<std::int64_t>(relevant.size()) > D;
  }

  int W = row_bits(static_cast<int>(D));
  std::vector<int> inputs = input_wires_for(fragment, relevant, prefix);
  std::size_t v_count = relevant.size();
  std::vector<std::vector<std::uint8_t>> rows_bits;  // per assignment, D*W bits
  rows_bits.reserve(std::size_t{1} << v_count);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << v_count); ++mask) {
    bits x(static_cast<std::size_t>(aut.inputs()), 0);
    for (std::size_t vi = 0; vi < v_count; ++vi)
      x[static_cast<std::size_t>(relevant[vi] - 1)] = (mask >> vi) & 1u;
    PhiTable table = compute_phi(aut, q, x, stop_at);
    std::vector<std::uint8_t> encoded(static_cast<std::size_t>(D) * W, 0);
    for (int j = 0; j < D; ++j)
      for (int w = 0; w < W; ++w)
        encoded[static_cast<std::size_t>(j * W + w)] =
            static_cast<std::uint8_t>((table.rows[static_cast<std::size_t>(j)] >> w) & 1);
    rows_bits.push_back(std::move(encoded));
  }

  // Plain selector: every output bit is an OR of assignment minterms.
  std::vector<int> minterms;
  if (v_count > 0) {
    minterms.reserve(rows_bits.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << v_count); ++mask) {
      std::vector<int> lits;
      for (std::size_t vi = 0; vi < v_count; ++vi)
        lits.push_back((mask >> vi) & 1u
                           ? inputs[vi]
                           : add_gate(fragment, GateKind::Not, inputs[vi], 0, prefix));
      minterms.push_back(and_tree(fragment, std::move(lits), prefix));
    }
  }
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(D) * W);
  for (int bit = 0; bit < static_cast<int>(D) * W; ++bit) {
    bool all_one = true, all_zero = true;
    for (const auto& enc : rows_bits) {
      if (enc[static_cast<std::size_t>(bit)])
        all_zero = false;
      else
        all_one = false;
    }
    if (all_one || v_count == 0) {
      out.push_back(const_wire(fragment, all_one ? 1 : 0, prefix));
      continue;
    }
    if (all_zero) {
      out.push_back(const_wire(fragment, 0, prefix));
      continue;
    }
    std::vector<int> selected;
    for (std::size_t a = 0; a < rows_bits.size(); ++a)
      if (rows_bits[a][static_cast<std::size_t>(bit)]) selected.push_back(minterms[a]);
    out.push_back(or_tree(fragment, std::move(selected), prefix));
  }
  return out;
}

std::vector<int> build_gadget_b(Fragment& fragment, int range, const std::vector<int>& first,
                                const std::vector<int>& second, const std::string& prefix) {
  int W = row_bits(range);
  if (first.size() != static_cast<std::size_t>(range) * W ||
      second.size() != static_cast<std::size_t>(range) * W)
    throw precondition_error("table bundle width mismatch");
  std::vector<int> out;
  out.reserve(first.size());
  for (int j = 0; j < range; ++j) {
    std::vector<int> sel(first.begin() + static_cast<std::ptrdiff_t>(j) * W,
                         first.begin() + static_cast<std::ptrdiff_t>(j + 1) * W);
    // One comparator per candidate row value, shared across output bits.
    std::vector<int> eq(static_cast<std::size_t>(range) + 1);
    for (int h = 0; h <= range; ++h)
      eq[static_cast<std::size_t>(h)] = equals_const(fragment, sel, h, prefix);
    for (int w = 0; w < W; ++w) {
      std::vector<int> terms;
      for (int h = 0; h < range; ++h)
        terms.push_back(add_gate(fragment, GateKind::And, eq[static_cast<std::size_t>(h)],
                                 second[static_cast<std::size_t>(h * W + w)], prefix));
      if ((range >> w) & 1) terms.push_back(eq[static_cast<std::size_t>(range)]);
      out.push_back(or_tree(fragment, std::move(terms), prefix));
    }
  }
  return out;
}

std::vector<int> build_gadget_c(Fragment& fragment, int range, const std::vector<int>& table,
                                int target_row_value, const std::string& prefix) {
  int W = row_bits(range);
  if (table.size() < static_cast<std::size_t>(W))
    throw precondition_error("table bundle too narrow");
  std::vector<int> row0(table.begin(), table.begin() + W);
  return {equals_const(fragment, row0, target_row_value, prefix)};
}

ExtractResult extract_circuit(const Automaton& aut) {
  if (!is_deterministic(aut))
    throw precondition_error("extraction needs a deterministic automaton");
  ExtractResult result;
  result.circuit.n = aut.inputs();

  std::int64_t D = aut.max_cut();
  std::int64_t p = aut.accept_pos();
  Fragment fragment;
  fragment.circuit.n = aut.inputs();

  if (p == 0 || D == 0) {
    // Offset 0 is always reachable; without rules nothing else ever is.
    int wire = const_wire(fragment, p == 0 ? 1 : 0, "C");
    fragment.circuit.output = wire;
    result.circuit = fragment.circuit;
    result.info.q_star = 1;
    result.info.j_star = static_cast<int>(p);
    result.info.gate_count = static_cast<std::int64_t>(result.circuit.gates.size());
    return result;
  }

  int q_star = static_cast<int>(p / D) + 1;
  int j_star = static_cast<int>(p % D);
  result.info.q_star = q_star;
  result.info.j_star = j_star;

  if (q_star == 1) {
    // The accept position sits in the first segment; hardwire the walk's
    // outcome as a selector over the variables readable before p.
    std::set<int> vars;
    int S = aut.sticky_size();
    for (std::int64_t o = 0; o < p && o + S <= aut.length(); ++o) {
      auto window = sticky_end(aut, o);
      if (!window) break;
      const auto* idx = aut.rules_for(*window);
      if (!idx) continue;
      for (std::size_t i : *idx) vars.insert(aut.rules()[i].var);
    }
    std::vector<int> relevant(vars.begin(), vars.end());
    std::vector<int> inputs = input_wires_for(fragment, relevant, "C");
    std::vector<int> accepted_minterms;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << relevant.size()); ++mask) {
      bits x(static_cast<std::size_t>(aut.inputs()), 0);
      for (std::size_t vi = 0; vi < relevant.size(); ++vi)
        x[static_cast<std::size_t>(relevant[vi] - 1)] = (mask >> vi) & 1u;
      if (!run(aut, x).accepted) continue;
      std::vector<int> lits;
      for (std::size_t vi = 0; vi < relevant.size(); ++vi)
        lits.push_back((mask >> vi) & 1u ? inputs[vi]
                                         : add_gate(fragment, GateKind::Not, inputs[vi], 0, "C"));
      accepted_minterms.push_back(and_tree(fragment, std::move(lits), "C"));
    }
    fragment.circuit.output = or_tree(fragment, std::move(accepted_minterms), "C");
    result.circuit = fragment.circuit;
    result.info.table_count = 0;
    result.info.padded_count = 0;
    result.info.b_levels = 0;
    result.info.gate_count = static_cast<std::int64_t>(result.circuit.gates.size());
    return result;
  }

  std::int64_t tables = q_star - 1;
  std::int64_t padded = 1;
  int levels = 0;
  while (padded < tables) {
    padded <<= 1;
    ++levels;
  }
  result.info.table_count = tables;
  result.info.padded_count = padded;
  result.info.b_levels = levels;

  int W = row_bits(static_cast<int>(D));
  std::vector<std::vector<int>> bundles;
  bundles.reserve(static_cast<std::size_t>(padded));
  for (int q = 1; q <= tables; ++q) {
    GadgetInfo info;
    bundles.push_back(
        build_gadget_a(fragment, aut, q, p, &info, "A" + std::to_string(q)));
    if (info.over_budget) result.info.over_budget_segments.push_back(q);
  }
  if (tables < padded) {
    // Shared constant encoding of the identity table pads the right side.
    PhiTable id = identity_table(static_cast<int>(D));
    std::vector<int> id_bundle;
    int one = const_wire(fragment, 1, "PAD");
    int zero = const_wire(fragment, 0, "PAD");
    for (int j = 0; j < D; ++j)
      for (int w = 0; w < W; ++w)
        id_bundle.push_back(((id.rows[static_cast<std::size_t>(j)] >> w) & 1) ? one : zero);
    for (std::int64_t i = tables; i < padded; ++i) bundles.push_back(id_bundle);
  }

  int level = 0;
  while (bundles.size() > 1) {
    ++level;
    std::vector<std::vector<int>> next;
    next.reserve(bundles.size() / 2);
    for (std::size_t i = 0; i + 1 < bundles.size(); i += 2) {
      std::string prefix = "B" + std::to_string(level) + "_" + std::to_string(i / 2);
      next.push_back(
          build_gadget_b(fragment, static_cast<int>(D), bundles[i], bundles[i + 1], prefix));
    }
    bundles = std::move(next);
  }

  std::vector<int> final_wire =
      build_gadget_c(fragment, static_cast<int>(D), bundles[0], j_star, "C");
  fragment.circuit.output = final_wire[0];
  result.circuit = fragment.circuit;
  result.info.gate_count = static_cast<std::int64_t>(result.circuit.gates.size());
  return result;
}

}  // namespace benenson
