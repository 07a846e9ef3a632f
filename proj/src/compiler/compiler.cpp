#include "compiler/compiler.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "machines/perm.hpp"

namespace benenson {

const char* construction_name(Construction c) {
  switch (c) {
    case Construction::General: return "general";
    case Construction::FixedWidth: return "fixed";
    case Construction::FixedWidthConstD: return "fixed-constd";
    case Construction::Permutation: return "perm";
    case Construction::Sparse1: return "sparse1";
  }
  return "?";
}

SegmentCodec::SegmentCodec(Alphabet alphabet, int sticky_size, int seg_len)
    : alphabet_(std::move(alphabet)), sticky_size_(sticky_size), seg_len_(seg_len) {
  if (alphabet_.size() < 3)
    throw precondition_error("constant-range constructions need an alphabet of size >= 3");
  if (sticky_size_ < 1) throw invariant_error("segment codec needs S >= 1");
  if (seg_len_ < sticky_size_) throw invariant_error("segments must be at least S long");
}

std::int64_t SegmentCodec::capacity() const {
  std::int64_t cap = 1;
  for (int i = 1; i < sticky_size_; ++i) {
    cap *= alphabet_.size() - 1;
    if (cap > (std::int64_t{1} << 40)) break;  // plenty; avoid overflow
  }
  return cap;
}

std::string SegmentCodec::code(std::int64_t index) const {
  if (index < 0 || index >= capacity()) throw invariant_error("segment code index overflow");
  std::string out(static_cast<std::size_t>(sticky_size_), marker());
  std::int64_t v = index;
  int base = alphabet_.size() - 1;
  for (int pos = sticky_size_ - 1; pos >= 1; --pos) {
    out[static_cast<std::size_t>(pos)] = alphabet_.symbol(1 + static_cast<int>(v % base));
    v /= base;
  }
  return out;
}

std::string SegmentCodec::segment(std::int64_t index) const {
  std::string seg = code(index);
  seg.resize(static_cast<std::size_t>(seg_len_), filler());
  return seg;
}

std::string SegmentCodec::blank_segment() const {
  return std::string(static_cast<std::size_t>(seg_len_), marker());
}

namespace {

// Base-|sigma| coding of width `width`, used where segments have no marker.
std::string plain_code(const Alphabet& sigma, int width, std::int64_t index) {
  std::string out(static_cast<std::size_t>(width), sigma.symbol(0));
  std::int64_t v = index;
  for (int pos = width - 1; pos >= 0; --pos) {
    out[static_cast<std::size_t>(pos)] = sigma.symbol(static_cast<int>(v % sigma.size()));
    v /= sigma.size();
  }
  if (v != 0) throw invariant_error("plain code index overflow");
  return out;
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t v = 1;
  while (exp-- > 0) {
    v *= base;
    if (v > (std::int64_t{1} << 40)) return v;
  }
  return v;
}

int single_accept_index(const std::vector<bool>& accept) {
  int found = 0, index = 0;
  for (std::size_t j = 0; j < accept.size(); ++j)
    if (accept[j]) {
      ++found;
      index = static_cast<int>(j + 1);
    }
  if (found != 1)
    throw precondition_error("construction needs exactly one accept node in the last layer");
  return index;
}

// Last-layer layout for the plain layered constructions: accept goes last,
// rejects keep their relative order. Layer 1 doubles as the last layer when
// there are no step layers; the start node must then stay first.
std::vector<int> last_layer_layout(int width, int accept, bool last_is_first) {
  std::vector<int> layout(static_cast<std::size_t>(width));
  if (last_is_first && accept == 1) {
    for (int j = 1; j <= width; ++j) layout[static_cast<std::size_t>(j - 1)] = j;
    return layout;
  }
  int next = 1;
  for (int j = 1; j <= width; ++j)
    layout[static_cast<std::size_t>(j - 1)] = j == accept ? width : next++;
  return layout;
}

// Uniform relabeling for the permutation constructions: the same permutation
// applies to every layer so identity goto0 maps stay identity. accept lands
// last; when accept is node 1 the start node cannot stay first and the
// layout reports that an alignment segment is required.
struct UniformLayout {
  std::vector<int> position;  // node j (1-based) -> slot within its layer
  bool pad = false;
};

UniformLayout uniform_layout(int width, int accept, bool trivial_start) {
  UniformLayout layout;
  layout.position.resize(static_cast<std::size_t>(width));
  for (int j = 1; j <= width; ++j) layout.position[static_cast<std::size_t>(j - 1)] = j;
  // A single-layer program whose accept node is the start node accepts
  // everything at offset 0; no relabeling wanted.
  if (!(trivial_start && accept == 1) && accept != width) {
    std::swap(layout.position[static_cast<std::size_t>(accept - 1)],
              layout.position[static_cast<std::size_t>(width - 1)]);
  }
  layout.pad = layout.position[0] != 1;
  return layout;
}

void append_window_skip_rules(const std::string& state, const SegmentCodec& codec, int max_cut,
                              bool exhaustive, std::vector<CuttingRule>& rules) {
  int S = codec.sticky_size();
  std::set<std::string> windows;
  if (exhaustive) {
    // Every non-marker-initial sticky end over the alphabet.
    const std::string& symbols = codec.alphabet_symbols();
    std::string tau(static_cast<std::size_t>(S), symbols[0]);
    std::vector<int> idx(static_cast<std::size_t>(S), 0);
    bool done = false;
    while (!done) {
      for (int i = 0; i < S; ++i) tau[static_cast<std::size_t>(i)] = symbols[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      if (tau[0] != codec.marker()) windows.insert(tau);
      int pos = S - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == static_cast<int>(symbols.size())) {
        idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      done = pos < 0;
    }
  } else {
    for (std::size_t o = 0; o + static_cast<std::size_t>(S) <= state.size(); ++o)
      if (state[o] != codec.marker()) windows.insert(state.substr(o, static_cast<std::size_t>(S)));
  }
  for (const auto& w : windows) {
    rules.push_back({1, 0, w, max_cut});
    rules.push_back({1, 1, w, max_cut});
  }
}

}  // namespace

std::string report_text(const CompilationReport& r) {
  std::ostringstream out;
  out << "construction " << construction_name(r.construction) << "\n";
  out << "sigma " << r.sigma << "\n";
  out << "inputs " << r.n << "\n";
  if (r.construction == Construction::General) {
    out << "nodes " << r.node_count << "\n";
  } else {
    out << "width " << r.width << "\n";
    out << "layers " << r.layers << "\n";
  }
  out << "S " << r.sticky_size << " (formula " << r.formula_sticky << ")\n";
  out << "D " << r.max_cut << " (formula " << r.formula_cut << ")\n";
  out << "L " << r.length << " (formula " << r.formula_length << ", with m identified with S: "
      << r.nominal_length << ")\n";
  out << "p " << r.accept_pos << "\n";
  if (r.seg_len > 0) out << "segment-length " << r.seg_len << " (multiplier " << r.seg_multiplier << ")\n";
  out << "sparseness-bound " << r.sparseness_bound << " (measured " << r.measured_sparseness
      << ")\n";
  if (r.accept_relocated) out << "note accept node relocated to the last index\n";
  if (r.alignment_pad) out << "note alignment segment prepended (accept was the start slot)\n";
  out << "margin-guaranteed " << (r.margin_guaranteed ? "yes" : "no") << "\n";
  for (const auto& note : r.notes) out << "note " << note << "\n";
  for (const auto& seg : r.segments)
    out << "segment " << seg.offset << " " << seg.label << (seg.code.empty() ? "" : " ")
        << seg.code << "\n";
  return out.str();
}

CompileResult compile_general(const GeneralBp& input, const Alphabet& sigma) {
  validate_general(input);
  if (!is_topo_indexed(input))
    throw precondition_error("general compilation needs a topo-indexed program");
  GeneralBp bp = input;
  int h = static_cast<int>(bp.nodes.size());
  int accept = 0;
  int accepts = 0;
  for (int q = 1; q <= h; ++q)
    if (bp.nodes[static_cast<std::size_t>(q - 1)].kind == BpNodeKind::Accept) {
      accept = q;
      ++accepts;
    }
  if (accepts != 1) throw precondition_error("general compilation needs a single accept node");

  CompilationReport report;
  report.construction = Construction::General;
  report.sigma = sigma.symbols();
  report.n = bp.n;
  report.node_count = h;

  if (accept != h) {
    // Move the accept node to the last index; sinks have no outgoing edges so
    // edges still point forward afterwards.
    report.accept_relocated = true;
    auto remap = [&](int q) { return q == accept ? h : (q > accept ? q - 1 : q); };
    GeneralBp moved;
    moved.n = bp.n;
    moved.start = 1;
    moved.nodes.resize(static_cast<std::size_t>(h));
    for (int q = 1; q <= h; ++q) {
      BpNode node = bp.nodes[static_cast<std::size_t>(q - 1)];
      if (node.kind == BpNodeKind::Variable) {
        node.goto0 = remap(node.goto0);
        node.goto1 = remap(node.goto1);
      }
      moved.nodes[static_cast<std::size_t>(remap(q) - 1)] = node;
    }
    bp = moved;
    accept = h;
    if (!is_topo_indexed(bp)) throw invariant_error("accept relocation broke the indexing");
  }

  int S = ceil_log(static_cast<std::uint64_t>(h), static_cast<std::uint64_t>(sigma.size()));
  int D = (h - 1) * S;
  std::int64_t L = static_cast<std::int64_t>(h) * S;
  report.sticky_size = report.formula_sticky = S;
  report.max_cut = report.formula_cut = D;
  report.formula_length = L;
  report.nominal_length = L;
  // Every node owns its sticky end, so per variable at most one pair per node.
  report.sparseness_bound = h;

  std::string state;
  std::vector<CuttingRule> rules;
  for (int q = 1; q <= h; ++q) {
    const BpNode& node = bp.nodes[static_cast<std::size_t>(q - 1)];
    std::string code = plain_code(sigma, S, q - 1);
    SegmentMapEntry entry;
    entry.offset = static_cast<std::int64_t>(q - 1) * S;
    entry.code = code;
    switch (node.kind) {
      case BpNodeKind::Variable:
        entry.label = "node " + std::to_string(q) + " var " + std::to_string(node.var);
        rules.push_back({node.var, 0, code, (node.goto0 - q) * S});
        rules.push_back({node.var, 1, code, (node.goto1 - q) * S});
        break;
      case BpNodeKind::Accept:
        entry.label = "accept";
        break;
      case BpNodeKind::Reject:
        entry.label = "reject";
        break;
    }
    report.segments.push_back(entry);
    state += code;
  }
  std::int64_t p = static_cast<std::int64_t>(accept - 1) * S;
  report.length = L;
  report.accept_pos = p;
  report.seg_len = S;
  report.margin_guaranteed = true;

  Automaton aut(sigma, bp.n, S, D, state, std::move(rules), p);
  report.measured_sparseness = sparseness(aut);
  return {std::move(aut), std::move(report)};
}

namespace {

struct LayeredKey {
  int var;
  int jump0;
  int jump1;
  bool operator<(const LayeredKey& o) const {
    if (var != o.var) return var < o.var;
    if (jump0 != o.jump0) return jump0 < o.jump0;
    return jump1 < o.jump1;
  }
};

}  // namespace

CompileResult compile_fixed_width(const LayeredBp& bp, const Alphabet& sigma) {
  validate_layered(bp);
  int accept = single_accept_index(bp.accept);
  int J = bp.width;
  int K = bp.layers;
  std::vector<int> layout = last_layer_layout(J, accept, K == 1);

  CompilationReport report;
  report.construction = Construction::FixedWidth;
  report.sigma = sigma.symbols();
  report.n = bp.n;
  report.width = J;
  report.layers = K;

  std::uint64_t key_space = static_cast<std::uint64_t>(bp.n) * (2 * J - 1) * (2 * J - 1);
  int S = std::max(1, ceil_log(key_space, static_cast<std::uint64_t>(sigma.size())));
  int D = (2 * J - 1) * S;
  std::int64_t L = static_cast<std::int64_t>(K) * J * S;
  report.sticky_size = report.formula_sticky = S;
  report.max_cut = report.formula_cut = D;
  report.formula_length = L;
  report.nominal_length = L;
  report.sparseness_bound = static_cast<std::int64_t>(2 * J - 1) * (2 * J - 1);

  // Collect the (variable, jump0, jump1) combinations actually used.
  std::map<LayeredKey, std::int64_t> keys;
  auto key_of = [&](int k, int j) {
    const LayeredNode& node =
        bp.steps[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
    int t0 = node.goto0, t1 = node.goto1;
    if (k == K - 1) {
      t0 = layout[static_cast<std::size_t>(t0 - 1)];
      t1 = layout[static_cast<std::size_t>(t1 - 1)];
    }
    return LayeredKey{node.var, J + t0 - j, J + t1 - j};
  };
  for (int k = 1; k < K; ++k)
    for (int j = 1; j <= J; ++j) keys.emplace(key_of(k, j), 0);
  std::int64_t next_code = 0;
  for (auto& [key, idx] : keys) idx = next_code++;
  std::int64_t capacity = ipow(sigma.size(), S);
  if (next_code + 2 > capacity)
    throw precondition_error("segment code space exhausted; no room for sink segments");
  std::int64_t reject_code = next_code;
  std::int64_t accept_code = next_code + 1;

  std::vector<CuttingRule> rules;
  for (const auto& [key, idx] : keys) {
    std::string code = plain_code(sigma, S, idx);
    rules.push_back({key.var, 0, code, key.jump0 * S});
    rules.push_back({key.var, 1, code, key.jump1 * S});
  }

  std::string state;
  for (int k = 1; k <= K; ++k)
    for (int slot = 1; slot <= J; ++slot) {
      SegmentMapEntry entry;
      entry.offset = static_cast<std::int64_t>((k - 1) * J + slot - 1) * S;
      if (k < K) {
        LayeredKey key = key_of(k, slot);
        entry.code = plain_code(sigma, S, keys.at(key));
        entry.label = "node " + std::to_string(k) + ":" + std::to_string(slot) + " var " +
                      std::to_string(key.var);
      } else {
        int j = 0;  // node laid out at this slot
        for (int cand = 1; cand <= J; ++cand)
          if (layout[static_cast<std::size_t>(cand - 1)] == slot) j = cand;
        bool is_accept = j == accept;
        entry.code = plain_code(sigma, S, is_accept ? accept_code : reject_code);
        entry.label = is_accept ? "accept" : "reject";
      }
      state += entry.code;
      report.segments.push_back(std::move(entry));
    }

  std::int64_t p = static_cast<std::int64_t>(
                       (K - 1) * J + layout[static_cast<std::size_t>(accept - 1)] - 1) *
                   S;
  report.length = L;
  report.accept_pos = p;
  report.seg_len = S;
  report.margin_guaranteed = true;

  Automaton aut(sigma, bp.n, S, D, state, std::move(rules), p);
  report.measured_sparseness = sparseness(aut);
  return {std::move(aut), std::move(report)};
}

namespace {

int pick_seg_multiplier(int S, int D, int requested) {
  int min_k = std::max(1, (S - 2 + D) / D);  // smallest k with D*k + 1 >= S
  if (requested == 0) return min_k;
  if (requested < min_k)
    throw precondition_error("segment multiplier too small for the sticky end size");
  return requested;
}

}  // namespace

CompileResult compile_fixed_width_constd(const LayeredBp& bp, const Alphabet& sigma,
                                         const CompileOptions& options) {
  validate_layered(bp);
  if (sigma.size() < 3)
    throw precondition_error("constant-range construction needs an alphabet of size >= 3");
  int accept = single_accept_index(bp.accept);
  int J = bp.width;
  int K = bp.layers;
  std::vector<int> layout = last_layer_layout(J, accept, K == 1);

  CompilationReport report;
  report.construction = Construction::FixedWidthConstD;
  report.sigma = sigma.symbols();
  report.n = bp.n;
  report.width = J;
  report.layers = K;

  std::uint64_t key_space = static_cast<std::uint64_t>(bp.n) * (2 * J - 1) * (2 * J - 1);
  int S = 1 + std::max(1, ceil_log(key_space, static_cast<std::uint64_t>(sigma.size() - 1)));
  int D = 2 * J - 1;
  int k_seg = pick_seg_multiplier(S, D, options.seg_multiplier);
  int m = D * k_seg + 1;
  SegmentCodec codec(sigma, S, m);

  report.sticky_size = report.formula_sticky = S;
  report.max_cut = report.formula_cut = D;
  report.seg_len = m;
  report.seg_multiplier = k_seg;
  report.formula_length = static_cast<std::int64_t>(K) * J * m;
  report.nominal_length = static_cast<std::int64_t>(K) * J * S;
  report.sparseness_bound = static_cast<std::int64_t>(2 * J - 1) * (2 * J - 1);

  std::map<LayeredKey, std::int64_t> keys;
  auto key_of = [&](int k, int j) {
    const LayeredNode& node =
        bp.steps[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
    int t0 = node.goto0, t1 = node.goto1;
    if (k == K - 1) {
      t0 = layout[static_cast<std::size_t>(t0 - 1)];
      t1 = layout[static_cast<std::size_t>(t1 - 1)];
    }
    return LayeredKey{node.var, J + t0 - j, J + t1 - j};
  };
  for (int k = 1; k < K; ++k)
    for (int j = 1; j <= J; ++j) keys.emplace(key_of(k, j), 0);
  std::int64_t next_code = 0;
  for (auto& [key, idx] : keys) idx = next_code++;

  bool have_reject_code = next_code < codec.capacity();
  std::int64_t reject_code = have_reject_code ? next_code : -1;
  if (!have_reject_code)
    report.notes.push_back("code space saturated; reject segments fall back to filler");

  std::vector<CuttingRule> rules;
  for (const auto& [key, idx] : keys) {
    std::string code = codec.code(idx);
    rules.push_back({key.var, 0, code, key.jump0});
    rules.push_back({key.var, 1, code, key.jump1});
  }

  std::string state;
  for (int k = 1; k <= K; ++k)
    for (int slot = 1; slot <= J; ++slot) {
      SegmentMapEntry entry;
      entry.offset = static_cast<std::int64_t>((k - 1) * J + slot - 1) * m;
      if (k < K) {
        LayeredKey key = key_of(k, slot);
        entry.code = codec.segment(keys.at(key));
        entry.label = "node " + std::to_string(k) + ":" + std::to_string(slot) + " var " +
                      std::to_string(key.var);
      } else {
        int j = 0;
        for (int cand = 1; cand <= J; ++cand)
          if (layout[static_cast<std::size_t>(cand - 1)] == slot) j = cand;
        if (j == accept) {
          entry.code = codec.blank_segment();
          entry.label = "accept";
        } else if (have_reject_code) {
          entry.code = codec.segment(reject_code);
          entry.label = "reject";
        } else {
          entry.code = std::string(static_cast<std::size_t>(m), codec.filler());
          entry.label = "reject (filler)";
        }
      }
      state += entry.code;
      report.segments.push_back(std::move(entry));
    }

  append_window_skip_rules(state, codec, D, options.exhaustive_skip_windows, rules);

  std::int64_t p = static_cast<std::int64_t>(
                       (K - 1) * J + layout[static_cast<std::size_t>(accept - 1)] - 1) *
                   m;
  report.length = static_cast<std::int64_t>(state.size());
  report.accept_pos = p;
  report.margin_guaranteed = have_reject_code;

  Automaton aut(sigma, bp.n, S, D, state, std::move(rules), p);
  report.measured_sparseness = sparseness(aut);
  return {std::move(aut), std::move(report)};
}

namespace {

void require_normalized_permutation(const LayeredBp& bp) {
  require_permutation_bp(bp);
  if (!goto0_is_identity(bp))
    throw precondition_error("permutation construction needs identity goto0; normalize first");
}

}  // namespace

CompileResult compile_permutation(const LayeredBp& bp, const Alphabet& sigma,
                                  const CompileOptions& options) {
  require_normalized_permutation(bp);
  if (sigma.size() < 3)
    throw precondition_error("constant-range construction needs an alphabet of size >= 3");
  int accept = single_accept_index(bp.accept);
  int J = bp.width;
  int K = bp.layers;
  UniformLayout layout = uniform_layout(J, accept, K == 1);
  auto pos = [&](int j) { return layout.position[static_cast<std::size_t>(j - 1)]; };

  CompilationReport report;
  report.construction = Construction::Permutation;
  report.sigma = sigma.symbols();
  report.n = bp.n;
  report.width = J;
  report.layers = K;
  report.alignment_pad = layout.pad;

  std::uint64_t key_space = static_cast<std::uint64_t>(bp.n) * (2 * J - 1);
  int S = 1 + std::max(1, ceil_log(key_space, static_cast<std::uint64_t>(sigma.size() - 1)));
  int D = 2 * J - 1;
  int k_seg = pick_seg_multiplier(S, D, options.seg_multiplier);
  int m = D * k_seg + 1;
  SegmentCodec codec(sigma, S, m);
  int pad = layout.pad ? 1 : 0;

  report.sticky_size = report.formula_sticky = S;
  report.max_cut = report.formula_cut = D;
  report.seg_len = m;
  report.seg_multiplier = k_seg;
  report.formula_length = static_cast<std::int64_t>(K * J + pad) * m;
  report.nominal_length = static_cast<std::int64_t>(K) * J * S;
  report.sparseness_bound = 2 * J - 1;

  // Segment types: (variable, jump1) pairs; jump0 is always a full layer.
  std::map<std::pair<int, int>, std::int64_t> keys;
  auto key_of = [&](int k, int j) {
    const LayeredNode& node =
        bp.steps[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
    return std::make_pair(node.var, J + pos(node.goto1) - pos(j));
  };
  for (int k = 1; k < K; ++k)
    for (int j = 1; j <= J; ++j) keys.emplace(key_of(k, j), 0);
  std::int64_t next_code = 0;
  for (auto& [key, idx] : keys) idx = next_code++;

  // The alignment segment jumps one full layer unconditionally, which is
  // exactly what any (i, J) key already does.
  std::int64_t pad_code = -1;
  bool pad_needs_rules = false;
  if (layout.pad) {
    for (const auto& [key, idx] : keys)
      if (key.second == J) {
        pad_code = idx;
        break;
      }
    if (pad_code < 0) {
      if (next_code >= codec.capacity())
        throw precondition_error("segment code space exhausted; no room for alignment segment");
      pad_code = next_code++;
      pad_needs_rules = true;
    }
  }
  bool have_reject_code = next_code < codec.capacity();
  std::int64_t reject_code = have_reject_code ? next_code : -1;
  if (!have_reject_code)
    report.notes.push_back("code space saturated; reject segments fall back to filler");

  std::vector<CuttingRule> rules;
  for (const auto& [key, idx] : keys) {
    std::string code = codec.code(idx);
    rules.push_back({key.first, 0, code, J});
    rules.push_back({key.first, 1, code, key.second});
  }
  if (pad_needs_rules) {
    std::string code = codec.code(pad_code);
    rules.push_back({1, 0, code, J});
    rules.push_back({1, 1, code, J});
  }

  std::string state;
  if (layout.pad) {
    SegmentMapEntry entry;
    entry.offset = 0;
    entry.label = "alignment";
    entry.code = codec.segment(pad_code);
    state += entry.code;
    report.segments.push_back(std::move(entry));
  }
  for (int k = 1; k <= K; ++k)
    for (int slot = 1; slot <= J; ++slot) {
      int j = 0;
      for (int cand = 1; cand <= J; ++cand)
        if (pos(cand) == slot) j = cand;
      SegmentMapEntry entry;
      entry.offset = static_cast<std::int64_t>(pad + (k - 1) * J + slot - 1) * m;
      if (k < K) {
        auto key = key_of(k, j);
        entry.code = codec.segment(keys.at(key));
        entry.label = "node " + std::to_string(k) + ":" + std::to_string(j) + " var " +
                      std::to_string(key.first);
      } else if (j == accept) {
        entry.code = codec.blank_segment();
        entry.label = "accept";
      } else if (have_reject_code) {
        entry.code = codec.segment(reject_code);
        entry.label = "reject";
      } else {
        entry.code = std::string(static_cast<std::size_t>(m), codec.filler());
        entry.label = "reject (filler)";
      }
      state += entry.code;
      report.segments.push_back(std::move(entry));
    }

  append_window_skip_rules(state, codec, D, options.exhaustive_skip_windows, rules);

  std::int64_t p = static_cast<std::int64_t>(pad + (K - 1) * J + pos(accept) - 1) * m;
  report.length = static_cast<std::int64_t>(state.size());
  report.accept_pos = p;
  report.margin_guaranteed = have_reject_code;

  Automaton aut(sigma, bp.n, S, D, state, std::move(rules), p);
  report.measured_sparseness = sparseness(aut);
  return {std::move(aut), std::move(report)};
}

CompileResult compile_sparse1(const LayeredBp& bp, const Alphabet& sigma,
                              const CompileOptions& options) {
  require_normalized_permutation(bp);
  if (sigma.size() < 3)
    throw precondition_error("constant-range construction needs an alphabet of size >= 3");
  if (bp.width < 2)
    throw precondition_error("1-sparse construction needs width >= 2");
  int accept = single_accept_index(bp.accept);
  int J = bp.width;
  int K = bp.layers;
  UniformLayout layout = uniform_layout(J, accept, K == 1);
  auto pos = [&](int j) { return layout.position[static_cast<std::size_t>(j - 1)]; };

  CompilationReport report;
  report.construction = Construction::Sparse1;
  report.sigma = sigma.symbols();
  report.n = bp.n;
  report.width = J;
  report.layers = K;
  report.alignment_pad = layout.pad;

  std::uint64_t key_space = static_cast<std::uint64_t>(bp.n) + (2 * J - 1);
  int S = 1 + std::max(1, ceil_log(key_space, static_cast<std::uint64_t>(sigma.size() - 1)));
  int D = 4 * J - 3;
  int k_seg = pick_seg_multiplier(S, D, options.seg_multiplier);
  int m = D * k_seg + 1;
  SegmentCodec codec(sigma, S, m);
  int pad = layout.pad ? 1 : 0;

  report.sticky_size = report.formula_sticky = S;
  report.max_cut = report.formula_cut = D;
  report.seg_len = m;
  report.seg_multiplier = k_seg;
  report.formula_length = static_cast<std::int64_t>(2 * K * J + pad) * m;
  report.nominal_length = static_cast<std::int64_t>(2 * K) * J * S;
  report.sparseness_bound = 1;

  // Reading codes per variable actually read; skip codes per jump used. The
  // alignment segment reuses the full-layer skip jump.
  std::set<int> vars_used;
  std::set<int> skips_used;  // values of jump1 in layers
  auto jump1_of = [&](int k, int j) {
    const LayeredNode& node =
        bp.steps[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
    return J + pos(node.goto1) - pos(j);
  };
  for (int k = 1; k < K; ++k)
    for (int j = 1; j <= J; ++j) {
      vars_used.insert(
          bp.steps[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)].var);
      skips_used.insert(jump1_of(k, j));
    }
  if (layout.pad) skips_used.insert(J);

  std::map<int, std::int64_t> reading_code;
  std::map<int, std::int64_t> skip_code;
  std::int64_t next_code = 0;
  for (int v : vars_used) reading_code[v] = next_code++;
  for (int d : skips_used) skip_code[d] = next_code++;
  bool have_reject_code = next_code < codec.capacity();
  std::int64_t reject_code = have_reject_code ? next_code : -1;
  if (!have_reject_code)
    report.notes.push_back("code space saturated; reject segments fall back to filler");

  std::vector<CuttingRule> rules;
  for (auto [v, idx] : reading_code) {
    std::string code = codec.code(idx);
    rules.push_back({v, 0, code, 2 * J});
    rules.push_back({v, 1, code, 1});
  }
  for (auto [d, idx] : skip_code) {
    std::string code = codec.code(idx);
    rules.push_back({1, 0, code, 2 * d - 1});
    rules.push_back({1, 1, code, 2 * d - 1});
  }

  std::string state;
  auto push_segment = [&](const std::string& label, const std::string& seg) {
    SegmentMapEntry entry;
    entry.offset = static_cast<std::int64_t>(state.size());
    entry.label = label;
    entry.code = seg;
    state += seg;
    report.segments.push_back(std::move(entry));
  };
  if (layout.pad) push_segment("alignment", codec.segment(skip_code.at(J)));
  std::string reject_segment = have_reject_code
                                   ? codec.segment(reject_code)
                                   : std::string(static_cast<std::size_t>(m), codec.filler());
  for (int k = 1; k <= K; ++k)
    for (int slot = 1; slot <= J; ++slot) {
      int j = 0;
      for (int cand = 1; cand <= J; ++cand)
        if (pos(cand) == slot) j = cand;
      std::string tag = std::to_string(k) + ":" + std::to_string(j);
      if (k < K) {
        const LayeredNode& node =
            bp.steps[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
        push_segment("reading " + tag + " var " + std::to_string(node.var),
                     codec.segment(reading_code.at(node.var)));
        push_segment("skip " + tag + " jump " + std::to_string(2 * jump1_of(k, j) - 1),
                     codec.segment(skip_code.at(jump1_of(k, j))));
      } else if (j == accept) {
        push_segment("accept", codec.blank_segment());
        push_segment("accept tail", codec.blank_segment());
      } else {
        push_segment("reject", reject_segment);
        push_segment("reject tail", reject_segment);
      }
    }

  append_window_skip_rules(state, codec, D, options.exhaustive_skip_windows, rules);

  std::int64_t accept_pair = static_cast<std::int64_t>(K - 1) * J + pos(accept);
  std::int64_t p = (pad + 2 * accept_pair - 2) * m;
  report.length = static_cast<std::int64_t>(state.size());
  report.accept_pos = p;
  report.margin_guaranteed = have_reject_code;

  Automaton aut(sigma, bp.n, S, D, state, std::move(rules), p);
  report.measured_sparseness = sparseness(aut);
  return {std::move(aut), std::move(report)};
}

}  // namespace benenson
