#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/automaton.hpp"
#include "machines/branching.hpp"

namespace benenson {

enum class Construction { General, FixedWidth, FixedWidthConstD, Permutation, Sparse1 };

const char* construction_name(Construction c);

// Marker-prefixed segment coding shared by the constant-cutting-range
// constructions: each code is the marker followed by sticky_size-1 symbols
// over the remaining alphabet; the rest of a segment is non-marker filler.
class SegmentCodec {
 public:
  SegmentCodec(Alphabet alphabet, int sticky_size, int seg_len);

  char marker() const { return alphabet_.symbol(0); }
  char filler() const { return alphabet_.symbol(1); }
  int sticky_size() const { return sticky_size_; }
  int seg_len() const { return seg_len_; }
  const std::string& alphabet_symbols() const { return alphabet_.symbols(); }
  std::int64_t capacity() const;

  // Length sticky_size, marker-initial, distinct per index.
  std::string code(std::int64_t index) const;
  // Full segment: code padded with filler to seg_len.
  std::string segment(std::int64_t index) const;
  // All-marker segment; inert because no rule carries an all-marker sticky end.
  std::string blank_segment() const;

 private:
  Alphabet alphabet_;
  int sticky_size_;
  int seg_len_;
};

struct SegmentMapEntry {
  std::int64_t offset = 0;
  std::string label;
  std::string code;
};

struct CompilationReport {
  Construction construction = Construction::General;
  std::string sigma;
  int n = 0;
  int width = 0;        // J, layered forms only
  int layers = 0;       // K, layered forms only
  std::int64_t node_count = 0;  // H, general form

  // Produced parameters.
  int sticky_size = 0;
  int max_cut = 0;
  std::int64_t length = 0;
  std::int64_t accept_pos = 0;
  int seg_len = 0;         // m; equals sticky_size for the plain forms
  int seg_multiplier = 0;  // k with m = D*k + 1 (constant-range forms)

  // Formula values the produced parameters must equal (audited).
  int formula_sticky = 0;
  int formula_cut = 0;
  std::int64_t formula_length = 0;
  // Length figure obtained when segment length is identified with S.
  std::int64_t nominal_length = 0;

  std::int64_t sparseness_bound = 0;
  int measured_sparseness = 0;

  bool accept_relocated = false;   // general form: accept moved to the last index
  bool alignment_pad = false;      // permutation forms: launch segment prepended
  bool margin_guaranteed = false;  // rejecting walks stall a full segment before p

  std::vector<SegmentMapEntry> segments;
  std::vector<std::string> notes;
};

std::string report_text(const CompilationReport& report);

struct CompileResult {
  Automaton automaton;
  CompilationReport report;
};

struct CompileOptions {
  // Segment-length multiplier k (m = D*k + 1) for the constant-range
  // constructions; 0 picks the smallest k with m >= S.
  int seg_multiplier = 0;
  // Emit a skip rule for every possible non-marker-initial window instead of
  // only the windows occurring in the state string.
  bool exhaustive_skip_windows = false;
};

// One segment per node, cut distances in whole segments. Requires a
// topo-indexed program with a single accept node.
CompileResult compile_general(const GeneralBp& bp, const Alphabet& sigma);

// Fixed-width layout: segments keyed by (variable, jump0, jump1).
CompileResult compile_fixed_width(const LayeredBp& bp, const Alphabet& sigma);

// Fixed width with constant cutting range: marker-prefixed segments of length
// m = D*k + 1 and input-independent skip rules carry cuts across segments.
CompileResult compile_fixed_width_constd(const LayeredBp& bp, const Alphabet& sigma,
                                         const CompileOptions& options = {});

// Permutation programs with identity goto0: segments keyed by (variable,
// jump1); bit 0 always skips a full layer.
CompileResult compile_permutation(const LayeredBp& bp, const Alphabet& sigma,
                                  const CompileOptions& options = {});

// One reading segment plus one input-independent skip segment per node; each
// variable is read through a single sticky end.
CompileResult compile_sparse1(const LayeredBp& bp, const Alphabet& sigma,
                              const CompileOptions& options = {});

}  // namespace benenson
