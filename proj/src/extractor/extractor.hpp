#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/automaton.hpp"
#include "machines/circuit.hpp"

namespace benenson {

// Per-segment cut-forwarding table: row j holds the last position reachable
// in the following segment when entering the current one j symbols in, or
// `bottom` when the walk dies first. Encoded rows use the value D for bottom.
struct PhiTable {
  int range = 1;  // D
  std::vector<int> rows;  // size == range, values in [0, range]

  int bottom() const { return range; }
};

PhiTable identity_table(int range);

// Largest-step semantics over the two-segment window starting at segment q
// (1-based; segments have length D, the last may be shorter). Offsets equal
// to stop_at are absorbing when given; extraction passes the accept position
// so walks that stop there are represented faithfully.
PhiTable compute_phi(const Automaton& aut, int q, const bits& x,
                     std::optional<std::int64_t> stop_at = std::nullopt);

// row j of the result = second[first[j]], with bottom absorbing.
PhiTable compose_tables(const PhiTable& first, const PhiTable& second);

// Multi-output circuit fragment: a gate list under construction plus the
// indices of the wires a gadget exposes.
struct Fragment {
  Circuit circuit;        // output field unset until finished
  std::vector<int> wires;
};

// Bits per table row.
int row_bits(int range);

// Selector over the variables the segment window can read; outputs the
// encoding of the segment's table as a function of x. Inputs must already
// exist in `fragment.circuit` as INPUT gates (one per circuit input).
struct GadgetInfo {
  std::vector<int> relevant_vars;
  bool over_budget = false;
};

// The three gadget builders append gates to `fragment.circuit` and return the
// wire bundle they produce. They are exposed for direct oracle testing.
std::vector<int> build_gadget_a(Fragment& fragment, const Automaton& aut, int q,
                                std::optional<std::int64_t> stop_at, GadgetInfo* info,
                                const std::string& prefix);
std::vector<int> build_gadget_b(Fragment& fragment, int range, const std::vector<int>& first,
                                const std::vector<int>& second, const std::string& prefix);
std::vector<int> build_gadget_c(Fragment& fragment, int range, const std::vector<int>& table,
                                int target_row_value, const std::string& prefix);

struct ExtractionInfo {
  int q_star = 0;
  int j_star = 0;
  std::int64_t table_count = 0;   // q_star - 1 before padding
  std::int64_t padded_count = 0;  // next power of two
  int b_levels = 0;
  std::int64_t gate_count = 0;
  std::vector<int> over_budget_segments;
};

struct ExtractResult {
  Circuit circuit;
  ExtractionInfo info;
};

// Equivalent shallow circuit for a deterministic automaton: selector gadgets
// per segment, a balanced composition tree, and a final row check.
ExtractResult extract_circuit(const Automaton& aut);

}  // namespace benenson
