#include "verify/verify.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <thread>

namespace benenson {

Evaluator evaluator_from(const Circuit& c, std::string label) {
  validate_circuit(c);
  auto copy = std::make_shared<Circuit>(c);
  return {c.n, std::move(label), [copy](const bits& x) { return eval_circuit(*copy, x); }};
}

Evaluator evaluator_from(const GeneralBp& bp, std::string label) {
  validate_general(bp);
  auto copy = std::make_shared<GeneralBp>(bp);
  return {bp.n, std::move(label), [copy](const bits& x) { return eval_general(*copy, x); }};
}

Evaluator evaluator_from(const LayeredBp& bp, std::string label) {
  validate_layered(bp);
  auto copy = std::make_shared<LayeredBp>(bp);
  return {bp.n, std::move(label), [copy](const bits& x) { return eval_layered(*copy, x); }};
}

Evaluator evaluator_from(const Automaton& aut, std::string label) {
  if (!is_deterministic(aut))
    throw precondition_error("evaluation needs a deterministic automaton");
  auto copy = std::make_shared<Automaton>(aut);
  return {aut.inputs(), std::move(label),
          [copy](const bits& x) { return run(*copy, x).accepted ? 1 : 0; }};
}

std::string EquivalenceResult::line() const {
  if (equal) return "PASS";
  std::ostringstream out;
  out << "FAIL x=" << bits_to_string(counterexample) << " a=" << a_value << " b=" << b_value;
  return out.str();
}

namespace {

// Re-check a candidate before reporting it; a disagreement that does not
// reproduce is a harness bug, not a counterexample.
EquivalenceResult confirmed(const Evaluator& a, const Evaluator& b, const bits& x,
                            std::uint64_t checked) {
  EquivalenceResult result;
  result.inputs_checked = checked;
  int av = a.eval(x);
  int bv = b.eval(x);
  if (av == bv) return result;
  result.equal = false;
  result.counterexample = x;
  result.a_value = av;
  result.b_value = bv;
  return result;
}

}  // namespace

EquivalenceResult equivalence_exhaustive(const Evaluator& a, const Evaluator& b, int limit,
                                         int jobs) {
  if (a.n != b.n) throw precondition_error("evaluators take different input counts");
  if (a.n > limit)
    throw precondition_error("input count exceeds the exhaustive limit; use random sampling");
  int n = a.n;
  std::uint64_t total = std::uint64_t{1} << n;
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      bits x = bits_from_counter(mask, n);
      if (a.eval(x) != b.eval(x)) return confirmed(a, b, x, mask + 1);
    }
    EquivalenceResult result;
    result.inputs_checked = total;
    return result;
  }
  std::uint64_t chunk = (total + static_cast<std::uint64_t>(jobs) - 1) / static_cast<std::uint64_t>(jobs);
  std::vector<std::optional<std::uint64_t>> found(static_cast<std::size_t>(jobs));
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w]() {
      std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
      std::uint64_t hi = std::min(total, lo + chunk);
      for (std::uint64_t mask = lo; mask < hi; ++mask) {
        bits x = bits_from_counter(mask, n);
        if (a.eval(x) != b.eval(x)) {
          found[static_cast<std::size_t>(w)] = mask;
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  std::optional<std::uint64_t> best;
  for (const auto& f : found)
    if (f && (!best || *f < *best)) best = f;
  if (!best) {
    EquivalenceResult result;
    result.inputs_checked = total;
    return result;
  }
  return confirmed(a, b, bits_from_counter(*best, n), *best + 1);
}

EquivalenceResult equivalence_random(const Evaluator& a, const Evaluator& b,
                                     std::uint64_t trials, std::uint64_t seed) {
  if (a.n != b.n) throw precondition_error("evaluators take different input counts");
  if (trials < 1) throw precondition_error("need at least one trial");
  for (std::uint64_t t = 0; t < trials; ++t) {
    bits x = rng::input_bits(seed, t, a.n);
    if (a.eval(x) != b.eval(x)) return confirmed(a, b, x, t + 1);
  }
  EquivalenceResult result;
  result.inputs_checked = trials;
  return result;
}

namespace {

void expect(AuditResult& audit, const std::string& what, std::int64_t produced,
            std::int64_t formula) {
  if (produced == formula) return;
  audit.pass = false;
  std::ostringstream out;
  out << what << ": produced " << produced << ", formula " << formula;
  audit.discrepancies.push_back(out.str());
}

}  // namespace

AuditResult audit_parameters(const CompilationReport& r) {
  AuditResult audit;
  std::uint64_t sigma = static_cast<std::uint64_t>(std::string(r.sigma).size());
  std::int64_t n = r.n;
  std::int64_t J = r.width;
  std::int64_t K = r.layers;
  std::int64_t pad = r.alignment_pad ? 1 : 0;
  switch (r.construction) {
    case Construction::General: {
      std::int64_t H = r.node_count;
      int S = ceil_log(static_cast<std::uint64_t>(H), sigma);
      expect(audit, "S", r.sticky_size, S);
      expect(audit, "D", r.max_cut, (H - 1) * S);
      expect(audit, "L", r.length, H * S);
      expect(audit, "nominal L", r.nominal_length, H * S);
      break;
    }
    case Construction::FixedWidth: {
      int S = std::max(1, ceil_log(static_cast<std::uint64_t>(n * (2 * J - 1) * (2 * J - 1)),
                                   sigma));
      expect(audit, "S", r.sticky_size, S);
      expect(audit, "D", r.max_cut, (2 * J - 1) * S);
      expect(audit, "L", r.length, K * J * S);
      expect(audit, "nominal L", r.nominal_length, K * J * S);
      expect(audit, "sparseness bound", r.sparseness_bound, (2 * J - 1) * (2 * J - 1));
      break;
    }
    case Construction::FixedWidthConstD: {
      int S = 1 + std::max(1, ceil_log(static_cast<std::uint64_t>(n * (2 * J - 1) * (2 * J - 1)),
                                       sigma - 1));
      int D = static_cast<int>(2 * J - 1);
      std::int64_t m = static_cast<std::int64_t>(D) * r.seg_multiplier + 1;
      expect(audit, "S", r.sticky_size, S);
      expect(audit, "D", r.max_cut, D);
      expect(audit, "m", r.seg_len, m);
      expect(audit, "L", r.length, K * J * m);
      expect(audit, "nominal L", r.nominal_length, K * J * S);
      expect(audit, "sparseness bound", r.sparseness_bound, (2 * J - 1) * (2 * J - 1));
      break;
    }
    case Construction::Permutation: {
      int S = 1 + std::max(1, ceil_log(static_cast<std::uint64_t>(n * (2 * J - 1)), sigma - 1));
      int D = static_cast<int>(2 * J - 1);
      std::int64_t m = static_cast<std::int64_t>(D) * r.seg_multiplier + 1;
      expect(audit, "S", r.sticky_size, S);
      expect(audit, "D", r.max_cut, D);
      expect(audit, "m", r.seg_len, m);
      expect(audit, "L", r.length, (K * J + pad) * m);
      expect(audit, "nominal L", r.nominal_length, K * J * S);
      expect(audit, "sparseness bound", r.sparseness_bound, 2 * J - 1);
      break;
    }
    case Construction::Sparse1: {
      int S = 1 + std::max(1, ceil_log(static_cast<std::uint64_t>(n + 2 * J - 1), sigma - 1));
      int D = static_cast<int>(4 * J - 3);
      std::int64_t m = static_cast<std::int64_t>(D) * r.seg_multiplier + 1;
      expect(audit, "S", r.sticky_size, S);
      expect(audit, "D", r.max_cut, D);
      expect(audit, "m", r.seg_len, m);
      expect(audit, "L", r.length, (2 * K * J + pad) * m);
      expect(audit, "nominal L", r.nominal_length, 2 * K * J * S);
      expect(audit, "sparseness bound", r.sparseness_bound, 1);
      break;
    }
  }
  if (r.measured_sparseness > r.sparseness_bound) {
    audit.pass = false;
    audit.discrepancies.push_back("measured sparseness exceeds the bound");
  }
  return audit;
}

}  // namespace benenson
