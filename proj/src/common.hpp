#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace benenson {

// Error hierarchy shared by all modules. The C API and the CLI map these
// onto stable numeric codes, so new error kinds should extend the hierarchy
// rather than reuse std::runtime_error directly.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : error {
  using error::error;
};

struct invariant_error : error {
  using error::error;
};

struct precondition_error : error {
  using error::error;
};

// Raised when run() meets two applicable rules that disagree on distance.
struct determinism_error : precondition_error {
  using precondition_error::precondition_error;
};

using bits = std::vector<std::uint8_t>;

inline bits bits_from_string(const std::string& s) {
  bits x;
  x.reserve(s.size());
  for (char c : s) {
    if (c == '0')
      x.push_back(0);
    else if (c == '1')
      x.push_back(1);
    else
      throw parse_error("input bit string may contain only '0' and '1'");
  }
  return x;
}

inline std::string bits_to_string(const bits& x) {
  std::string s;
  s.reserve(x.size());
  for (auto b : x) s.push_back(b ? '1' : '0');
  return s;
}

// Lexicographic enumeration of {0,1}^n: mask 0 is 00...0, the first input
// bit is the most significant position.
inline bits bits_from_counter(std::uint64_t mask, int n) {
  bits x(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (mask >> (n - 1 - i)) & 1u;
  return x;
}

// Smallest s >= 0 with base^s >= x (x >= 1), i.e. ceil(log_base(x)).
inline int ceil_log(std::uint64_t x, std::uint64_t base) {
  if (base < 2) throw invariant_error("ceil_log: base must be >= 2");
  if (x == 0) throw invariant_error("ceil_log: x must be >= 1");
  int s = 0;
  std::uint64_t pow = 1;
  while (pow < x) {
    pow *= base;
    ++s;
  }
  return s;
}

// Counter-based generator used everywhere randomness is needed. The mapping
// from (seed, counter) to a 64-bit word is fixed and documented in the
// README so runs are reproducible across machines and bindings.
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t word(std::uint64_t seed, std::uint64_t counter) {
  return mix64(seed + counter * 0xD1B54A32D192ED03ull);
}

// Input vector for trial t: bit i comes from word ceil(i/64) of that trial.
inline bits input_bits(std::uint64_t seed, std::uint64_t trial, int n) {
  bits x(static_cast<std::size_t>(n), 0);
  std::uint64_t w = 0;
  for (int i = 0; i < n; ++i) {
    if (i % 64 == 0) w = word(seed, trial * 64 + static_cast<std::uint64_t>(i / 64) + 1);
    x[static_cast<std::size_t>(i)] = (w >> (i % 64)) & 1u;
  }
  return x;
}

// Uniform value in [0, bound) derived from (seed, counter).
inline std::uint64_t below(std::uint64_t seed, std::uint64_t counter, std::uint64_t bound) {
  return word(seed, counter) % bound;
}

}  // namespace rng

}  // namespace benenson
