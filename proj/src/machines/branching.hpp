#pragma once

#include <string>
#include <variant>
#include <vector>

#include "common.hpp"
#include "machines/perm.hpp"

namespace benenson {

// ---------------------------------------------------------------------------
// General branching programs: a DAG of variable nodes plus accept/reject
// sinks. Node indices are 1-based to match the text format.

enum class BpNodeKind { Variable, Accept, Reject };

struct BpNode {
  BpNodeKind kind = BpNodeKind::Reject;
  int var = 1;    // valid for Variable
  int goto0 = 0;  // 1-based target
  int goto1 = 0;
};

struct GeneralBp {
  int n = 1;
  std::vector<BpNode> nodes;  // nodes[0] is node 1
  int start = 1;
};

void validate_general(const GeneralBp& bp);

int eval_general(const GeneralBp& bp, const bits& x);

// True when every edge goes from a lower to a higher index and start == 1.
bool is_topo_indexed(const GeneralBp& bp);

// Reindex so the start node is 1 and edges only increase. Returns the input
// unchanged when it already qualifies. Throws invariant_error on cycles.
GeneralBp topo_index(const GeneralBp& bp);

// Rewrite so exactly one accept node remains; extra accept nodes become
// variable nodes routing both edges to the surviving accept. A program with
// no accept node gains an unreachable one at the end.
GeneralBp normalize_single_accept(const GeneralBp& bp);

// ---------------------------------------------------------------------------
// Layered (fixed-width) branching programs: `layers` columns of `width` nodes.
// Columns 1..layers-1 read a variable and route into the next column; the
// last column's nodes are plain sinks marked accepting or rejecting.

struct LayeredNode {
  int var = 1;
  int goto0 = 1;  // 1-based node index in the next layer
  int goto1 = 1;
};

struct LayeredBp {
  int n = 1;
  int width = 1;
  int layers = 1;
  // steps[k][j]: node j+1 of layer k+1, for k in [0, layers-2].
  std::vector<std::vector<LayeredNode>> steps;
  std::vector<bool> accept;  // size == width, marks on the last layer
};

void validate_layered(const LayeredBp& bp);

int eval_layered(const LayeredBp& bp, const bits& x);

// The node visited in each layer (1-based), starting with 1.
std::vector<int> eval_layered_path(const LayeredBp& bp, const bits& x);

// Permutation program checks: both edge maps of every step layer are
// bijections and exactly one accept mark exists.
bool is_permutation_bp(const LayeredBp& bp);
void require_permutation_bp(const LayeredBp& bp);

bool goto0_is_identity(const LayeredBp& bp);

// Equivalent program whose goto0 map is the identity in every layer,
// obtained by relabeling each layer with the accumulated composition of the
// preceding goto0 maps.
LayeredBp normalize_goto0_identity(const LayeredBp& bp);

// Flatten into the general form (layer-major node order).
GeneralBp to_general(const LayeredBp& bp);

// ---------------------------------------------------------------------------
// Text format. The header tag distinguishes general, layered, and
// permutation programs; permutation is layered plus validation.

struct BpFile {
  std::variant<GeneralBp, LayeredBp> program;
  bool permutation_tag = false;

  bool is_general() const { return std::holds_alternative<GeneralBp>(program); }
  const GeneralBp& general() const { return std::get<GeneralBp>(program); }
  const LayeredBp& layered() const { return std::get<LayeredBp>(program); }
};

BpFile parse_bp(const std::string& text);
BpFile parse_bp_file(const std::string& path);
std::string serialize_bp(const GeneralBp& bp);
std::string serialize_bp(const LayeredBp& bp, bool permutation_tag);

}  // namespace benenson
