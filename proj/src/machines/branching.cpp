#include "machines/branching.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "core/automaton.hpp"

namespace benenson {

void validate_general(const GeneralBp& bp) {
  if (bp.n < 1) throw invariant_error("branching program needs at least one input");
  if (bp.nodes.empty()) throw invariant_error("branching program has no nodes");
  int h = static_cast<int>(bp.nodes.size());
  if (bp.start < 1 || bp.start > h) throw invariant_error("start node out of range");
  for (const auto& node : bp.nodes) {
    if (node.kind != BpNodeKind::Variable) continue;
    if (node.var < 1 || node.var > bp.n) throw invariant_error("node variable out of range");
    if (node.goto0 < 1 || node.goto0 > h || node.goto1 < 1 || node.goto1 > h)
      throw invariant_error("node edge target out of range");
  }
}

int eval_general(const GeneralBp& bp, const bits& x) {
  if (static_cast<int>(x.size()) != bp.n) throw precondition_error("input length must equal n");
  int at = bp.start;
  for (std::size_t steps = 0; steps <= bp.nodes.size(); ++steps) {
    const BpNode& node = bp.nodes[static_cast<std::size_t>(at - 1)];
    if (node.kind == BpNodeKind::Accept) return 1;
    if (node.kind == BpNodeKind::Reject) return 0;
    at = x[static_cast<std::size_t>(node.var - 1)] ? node.goto1 : node.goto0;
  }
  throw invariant_error("walk exceeded node count; program has a cycle");
}

bool is_topo_indexed(const GeneralBp& bp) {
  if (bp.start != 1) return false;
  for (std::size_t i = 0; i < bp.nodes.size(); ++i) {
    const BpNode& node = bp.nodes[i];
    if (node.kind != BpNodeKind::Variable) continue;
    if (node.goto0 <= static_cast<int>(i + 1) || node.goto1 <= static_cast<int>(i + 1))
      return false;
  }
  return true;
}

GeneralBp topo_index(const GeneralBp& bp) {
  validate_general(bp);
  if (is_topo_indexed(bp)) return bp;
  int h = static_cast<int>(bp.nodes.size());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(h));
  std::vector<int> indegree(static_cast<std::size_t>(h), 0);
  for (int q = 1; q <= h; ++q) {
    const BpNode& node = bp.nodes[static_cast<std::size_t>(q - 1)];
    if (node.kind != BpNodeKind::Variable) continue;
    for (int target : {node.goto0, node.goto1}) {
      out[static_cast<std::size_t>(q - 1)].push_back(target);
      ++indegree[static_cast<std::size_t>(target - 1)];
    }
  }
  // Kahn's algorithm with the start node forced first and smallest index
  // first otherwise, so the result is deterministic.
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int q = 1; q <= h; ++q)
    if (indegree[static_cast<std::size_t>(q - 1)] == 0 && q != bp.start) ready.push(q);
  std::vector<int> order;
  order.push_back(bp.start);
  if (indegree[static_cast<std::size_t>(bp.start - 1)] != 0)
    throw invariant_error("start node has incoming edges");
  std::vector<int> position(static_cast<std::size_t>(h), 0);
  auto emit = [&](int q) {
    position[static_cast<std::size_t>(q - 1)] = static_cast<int>(order.size());
    for (int target : out[static_cast<std::size_t>(q - 1)])
      if (--indegree[static_cast<std::size_t>(target - 1)] == 0) ready.push(target);
  };
  position[static_cast<std::size_t>(bp.start - 1)] = 1;
  for (int target : out[static_cast<std::size_t>(bp.start - 1)])
    if (--indegree[static_cast<std::size_t>(target - 1)] == 0) ready.push(target);
  while (!ready.empty()) {
    int q = ready.top();
    ready.pop();
    order.push_back(q);
    emit(q);
  }
  if (static_cast<int>(order.size()) != h)
    throw invariant_error("cycle detected while indexing branching program");
  GeneralBp result;
  result.n = bp.n;
  result.start = 1;
  result.nodes.resize(static_cast<std::size_t>(h));
  for (int q = 1; q <= h; ++q) {
    BpNode node = bp.nodes[static_cast<std::size_t>(q - 1)];
    if (node.kind == BpNodeKind::Variable) {
      node.goto0 = position[static_cast<std::size_t>(node.goto0 - 1)];
      node.goto1 = position[static_cast<std::size_t>(node.goto1 - 1)];
    }
    result.nodes[static_cast<std::size_t>(position[static_cast<std::size_t>(q - 1)] - 1)] = node;
  }
  return result;
}

GeneralBp normalize_single_accept(const GeneralBp& bp) {
  validate_general(bp);
  std::vector<int> accepts;
  for (std::size_t i = 0; i < bp.nodes.size(); ++i)
    if (bp.nodes[i].kind == BpNodeKind::Accept) accepts.push_back(static_cast<int>(i + 1));
  GeneralBp result = bp;
  if (accepts.empty()) {
    BpNode sink;
    sink.kind = BpNodeKind::Accept;
    result.nodes.push_back(sink);  // unreachable; keeps the single-accept form
    return result;
  }
  if (accepts.size() == 1) return result;
  int keep = accepts.back();
  for (std::size_t idx = 0; idx + 1 < accepts.size(); ++idx) {
    BpNode& node = result.nodes[static_cast<std::size_t>(accepts[idx] - 1)];
    node.kind = BpNodeKind::Variable;
    node.var = 1;
    node.goto0 = keep;
    node.goto1 = keep;
  }
  return result;
}

void validate_layered(const LayeredBp& bp) {
  if (bp.n < 1) throw invariant_error("branching program needs at least one input");
  if (bp.width < 1) throw invariant_error("width must be >= 1");
  if (bp.layers < 1) throw invariant_error("length must be >= 1");
  if (static_cast<int>(bp.steps.size()) != bp.layers - 1)
    throw invariant_error("expected one goto layer per non-final layer");
  if (static_cast<int>(bp.accept.size()) != bp.width)
    throw invariant_error("accept mark table must cover the last layer");
  for (const auto& layer : bp.steps) {
    if (static_cast<int>(layer.size()) != bp.width)
      throw invariant_error("every layer needs exactly `width` nodes");
    for (const auto& node : layer) {
      if (node.var < 1 || node.var > bp.n) throw invariant_error("node variable out of range");
      if (node.goto0 < 1 || node.goto0 > bp.width || node.goto1 < 1 || node.goto1 > bp.width)
        throw invariant_error("node edge target outside the next layer");
    }
  }
}

std::vector<int> eval_layered_path(const LayeredBp& bp, const bits& x) {
  if (static_cast<int>(x.size()) != bp.n) throw precondition_error("input length must equal n");
  std::vector<int> path;
  path.reserve(static_cast<std::size_t>(bp.layers));
  int at = 1;
  path.push_back(at);
  for (const auto& layer : bp.steps) {
    const LayeredNode& node = layer[static_cast<std::size_t>(at - 1)];
    at = x[static_cast<std::size_t>(node.var - 1)] ? node.goto1 : node.goto0;
    path.push_back(at);
  }
  return path;
}

int eval_layered(const LayeredBp& bp, const bits& x) {
  return bp.accept[static_cast<std::size_t>(eval_layered_path(bp, x).back() - 1)] ? 1 : 0;
}

namespace {

bool column_is_permutation(const std::vector<LayeredNode>& layer, bool one_edge) {
  std::vector<char> seen(layer.size(), 0);
  for (const auto& node : layer) {
    int target = one_edge ? node.goto1 : node.goto0;
    if (seen[static_cast<std::size_t>(target - 1)]) return false;
    seen[static_cast<std::size_t>(target - 1)] = 1;
  }
  return true;
}

Perm column_perm(const std::vector<LayeredNode>& layer, bool one_edge) {
  std::vector<int> img(layer.size());
  for (std::size_t j = 0; j < layer.size(); ++j)
    img[j] = (one_edge ? layer[j].goto1 : layer[j].goto0) - 1;
  return Perm(std::move(img));
}

}  // namespace

bool is_permutation_bp(const LayeredBp& bp) {
  for (const auto& layer : bp.steps)
    if (!column_is_permutation(layer, false) || !column_is_permutation(layer, true)) return false;
  return std::count(bp.accept.begin(), bp.accept.end(), true) == 1;
}

void require_permutation_bp(const LayeredBp& bp) {
  validate_layered(bp);
  if (!is_permutation_bp(bp))
    throw precondition_error("not a permutation branching program");
}

bool goto0_is_identity(const LayeredBp& bp) {
  for (const auto& layer : bp.steps)
    for (std::size_t j = 0; j < layer.size(); ++j)
      if (layer[j].goto0 != static_cast<int>(j + 1)) return false;
  return true;
}

LayeredBp normalize_goto0_identity(const LayeredBp& bp) {
  require_permutation_bp(bp);
  LayeredBp result = bp;
  Perm relabel = Perm::identity(bp.width);  // relabeling of the current layer
  for (std::size_t k = 0; k < bp.steps.size(); ++k) {
    Perm g0 = column_perm(bp.steps[k], false);
    Perm g1 = column_perm(bp.steps[k], true);
    // Choose the next layer's relabeling so the rewritten goto0 is identity.
    Perm next = then(g0.inverse(), relabel);
    Perm unlabel = relabel.inverse();
    for (int j = 0; j < bp.width; ++j) {
      int old_j = unlabel.apply(j);
      LayeredNode& node = result.steps[k][static_cast<std::size_t>(j)];
      node.var = bp.steps[k][static_cast<std::size_t>(old_j)].var;
      node.goto0 = next.apply(g0.apply(old_j)) + 1;
      node.goto1 = next.apply(g1.apply(old_j)) + 1;
    }
    relabel = next;
  }
  std::vector<bool> accept(static_cast<std::size_t>(bp.width), false);
  for (int j = 0; j < bp.width; ++j)
    if (bp.accept[static_cast<std::size_t>(j)]) accept[static_cast<std::size_t>(relabel.apply(j))] = true;
  result.accept = accept;
  return result;
}

GeneralBp to_general(const LayeredBp& bp) {
  validate_layered(bp);
  GeneralBp result;
  result.n = bp.n;
  result.start = 1;
  auto index_of = [&](int layer, int j) { return (layer - 1) * bp.width + j; };
  for (int k = 1; k < bp.layers; ++k) {
    for (int j = 1; j <= bp.width; ++j) {
      const LayeredNode& node = bp.steps[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
      BpNode flat;
      flat.kind = BpNodeKind::Variable;
      flat.var = node.var;
      flat.goto0 = index_of(k + 1, node.goto0);
      flat.goto1 = index_of(k + 1, node.goto1);
      result.nodes.push_back(flat);
    }
  }
  for (int j = 1; j <= bp.width; ++j) {
    BpNode sink;
    sink.kind = bp.accept[static_cast<std::size_t>(j - 1)] ? BpNodeKind::Accept : BpNodeKind::Reject;
    result.nodes.push_back(sink);
  }
  return result;
}

namespace {

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

int to_int(const std::string& tok, const char* what) {
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw parse_error(std::string("bad integer for ") + what + ": '" + tok + "'");
  }
}

}  // namespace

BpFile parse_bp(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::string kind;
  int n = 0;
  bool have_n = false;

  // general form accumulators
  struct PendingNode {
    int q;
    BpNode node;
  };
  std::vector<PendingNode> gnodes;
  int start = 0;

  // layered form accumulators
  int width = 0, layers = 0;
  struct PendingLayered {
    int k, j;
    LayeredNode node;
  };
  std::vector<PendingLayered> lnodes;
  std::vector<std::pair<int, int>> accepts;

  while (std::getline(in, line)) {
    auto tokens = tokenize_line(line);
    if (tokens.empty()) continue;
    if (!header) {
      if (tokens.size() != 3 || tokens[0] != "bp" || tokens[1] != "v1" ||
          (tokens[2] != "general" && tokens[2] != "layered" && tokens[2] != "permutation"))
        throw parse_error("expected header 'bp v1 <general|layered|permutation>'");
      kind = tokens[2];
      header = true;
      continue;
    }
    const std::string& key = tokens[0];
    if (key == "inputs") {
      if (tokens.size() != 2) throw parse_error("inputs line needs one integer");
      n = to_int(tokens[1], "inputs");
      have_n = true;
    } else if (key == "width") {
      if (tokens.size() != 2) throw parse_error("width line needs one integer");
      width = to_int(tokens[1], "width");
    } else if (key == "length") {
      if (tokens.size() != 2) throw parse_error("length line needs one integer");
      layers = to_int(tokens[1], "length");
    } else if (key == "start") {
      if (tokens.size() != 2) throw parse_error("start line needs one integer");
      start = to_int(tokens[1], "start");
    } else if (key == "accept" && kind != "general") {
      if (tokens.size() != 3) throw parse_error("accept line needs: accept <k> <j>");
      accepts.emplace_back(to_int(tokens[1], "accept layer"), to_int(tokens[2], "accept node"));
    } else if (key == "node") {
      if (kind == "general") {
        if (tokens.size() == 3 && (tokens[2] == "accept" || tokens[2] == "reject")) {
          PendingNode pn;
          pn.q = to_int(tokens[1], "node index");
          pn.node.kind = tokens[2] == "accept" ? BpNodeKind::Accept : BpNodeKind::Reject;
          gnodes.push_back(pn);
        } else if (tokens.size() == 8 && tokens[2] == "var" && tokens[4] == "goto0" &&
                   tokens[6] == "goto1") {
          PendingNode pn;
          pn.q = to_int(tokens[1], "node index");
          pn.node.kind = BpNodeKind::Variable;
          pn.node.var = to_int(tokens[3], "node variable");
          pn.node.goto0 = to_int(tokens[5], "goto0 target");
          pn.node.goto1 = to_int(tokens[7], "goto1 target");
          gnodes.push_back(pn);
        } else {
          throw parse_error("bad general node line");
        }
      } else {
        if (tokens.size() != 9 || tokens[3] != "var" || tokens[5] != "goto0" ||
            tokens[7] != "goto1")
          throw parse_error("bad layered node line");
        PendingLayered pl;
        pl.k = to_int(tokens[1], "node layer");
        pl.j = to_int(tokens[2], "node index");
        pl.node.var = to_int(tokens[4], "node variable");
        pl.node.goto0 = to_int(tokens[6], "goto0 target");
        pl.node.goto1 = to_int(tokens[8], "goto1 target");
        lnodes.push_back(pl);
      }
    } else {
      throw parse_error("unknown directive '" + key + "'");
    }
  }
  if (!header) throw parse_error("missing 'bp v1' header");
  if (!have_n) throw parse_error("missing inputs line");

  BpFile file;
  if (kind == "general") {
    GeneralBp bp;
    bp.n = n;
    bp.nodes.resize(gnodes.size());
    std::vector<char> present(gnodes.size(), 0);
    for (const auto& pn : gnodes) {
      if (pn.q < 1 || pn.q > static_cast<int>(gnodes.size()))
        throw parse_error("node indices must be 1..H with no gaps");
      if (present[static_cast<std::size_t>(pn.q - 1)])
        throw parse_error("duplicate node index " + std::to_string(pn.q));
      present[static_cast<std::size_t>(pn.q - 1)] = 1;
      bp.nodes[static_cast<std::size_t>(pn.q - 1)] = pn.node;
    }
    if (start == 0) throw parse_error("missing start line");
    bp.start = start;
    try {
      validate_general(bp);
    } catch (const invariant_error& e) {
      throw parse_error(std::string("invalid branching program: ") + e.what());
    }
    file.program = bp;
  } else {
    if (width < 1 || layers < 1) throw parse_error("missing width/length lines");
    LayeredBp bp;
    bp.n = n;
    bp.width = width;
    bp.layers = layers;
    bp.steps.assign(static_cast<std::size_t>(layers - 1),
                    std::vector<LayeredNode>(static_cast<std::size_t>(width)));
    std::vector<std::vector<char>> present(
        static_cast<std::size_t>(layers - 1), std::vector<char>(static_cast<std::size_t>(width), 0));
    for (const auto& pl : lnodes) {
      if (pl.k < 1 || pl.k > layers - 1)
        throw parse_error("node layer must be in [1, length-1]");
      if (pl.j < 1 || pl.j > width) throw parse_error("node index must be in [1, width]");
      if (present[static_cast<std::size_t>(pl.k - 1)][static_cast<std::size_t>(pl.j - 1)])
        throw parse_error("duplicate layered node");
      present[static_cast<std::size_t>(pl.k - 1)][static_cast<std::size_t>(pl.j - 1)] = 1;
      bp.steps[static_cast<std::size_t>(pl.k - 1)][static_cast<std::size_t>(pl.j - 1)] = pl.node;
    }
    for (const auto& row : present)
      for (char c : row)
        if (!c) throw parse_error("missing layered node line");
    bp.accept.assign(static_cast<std::size_t>(width), false);
    for (auto [k, j] : accepts) {
      if (k != layers) throw parse_error("accept marks belong to the last layer");
      if (j < 1 || j > width) throw parse_error("accept node out of range");
      bp.accept[static_cast<std::size_t>(j - 1)] = true;
    }
    try {
      validate_layered(bp);
      if (kind == "permutation") require_permutation_bp(bp);
    } catch (const error& e) {
      throw parse_error(std::string("invalid branching program: ") + e.what());
    }
    file.program = bp;
    file.permutation_tag = kind == "permutation";
  }
  return file;
}

BpFile parse_bp_file(const std::string& path) { return parse_bp(read_text_file(path)); }

std::string serialize_bp(const GeneralBp& bp) {
  validate_general(bp);
  std::ostringstream out;
  out << "bp v1 general\n";
  out << "inputs " << bp.n << "\n";
  for (std::size_t i = 0; i < bp.nodes.size(); ++i) {
    const BpNode& node = bp.nodes[i];
    out << "node " << (i + 1);
    switch (node.kind) {
      case BpNodeKind::Accept:
        out << " accept";
        break;
      case BpNodeKind::Reject:
        out << " reject";
        break;
      case BpNodeKind::Variable:
        out << " var " << node.var << " goto0 " << node.goto0 << " goto1 " << node.goto1;
        break;
    }
    out << "\n";
  }
  out << "start " << bp.start << "\n";
  return out.str();
}

std::string serialize_bp(const LayeredBp& bp, bool permutation_tag) {
  validate_layered(bp);
  if (permutation_tag) require_permutation_bp(bp);
  std::ostringstream out;
  out << "bp v1 " << (permutation_tag ? "permutation" : "layered") << "\n";
  out << "inputs " << bp.n << "\n";
  out << "width " << bp.width << "\n";
  out << "length " << bp.layers << "\n";
  for (int k = 1; k < bp.layers; ++k)
    for (int j = 1; j <= bp.width; ++j) {
      const LayeredNode& node =
          bp.steps[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
      out << "node " << k << " " << j << " var " << node.var << " goto0 " << node.goto0
          << " goto1 " << node.goto1 << "\n";
    }
  for (int j = 1; j <= bp.width; ++j)
    if (bp.accept[static_cast<std::size_t>(j - 1)]) out << "accept " << bp.layers << " " << j << "\n";
  return out.str();
}

}  // namespace benenson
