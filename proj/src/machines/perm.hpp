#pragma once

#include <numeric>
#include <vector>

#include "common.hpp"

namespace benenson {

// Permutation of {0..degree-1} stored as an image table.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<int> images) : img_(std::move(images)) {
    std::vector<char> seen(img_.size(), 0);
    for (int v : img_) {
      if (v < 0 || v >= static_cast<int>(img_.size()) || seen[static_cast<std::size_t>(v)])
        throw invariant_error("not a permutation");
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }

  static Perm identity(int degree) {
    std::vector<int> img(static_cast<std::size_t>(degree));
    std::iota(img.begin(), img.end(), 0);
    return Perm(std::move(img));
  }

  // Cycle given with 0-based points; fixed points omitted.
  static Perm from_cycle(int degree, const std::vector<int>& cycle) {
    std::vector<int> img(static_cast<std::size_t>(degree));
    std::iota(img.begin(), img.end(), 0);
    for (std::size_t i = 0; i < cycle.size(); ++i)
      img[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
    return Perm(std::move(img));
  }

  int degree() const { return static_cast<int>(img_.size()); }
  int apply(int i) const { return img_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return img_; }

  Perm inverse() const {
    std::vector<int> img(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i)
      img[static_cast<std::size_t>(img_[i])] = static_cast<int>(i);
    return Perm(std::move(img));
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != static_cast<int>(i)) return false;
    return true;
  }

  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator!=(const Perm& o) const { return img_ != o.img_; }
  bool operator<(const Perm& o) const { return img_ < o.img_; }

 private:
  std::vector<int> img_;
};

// Apply a, then b.
inline Perm then(const Perm& a, const Perm& b) {
  std::vector<int> img(static_cast<std::size_t>(a.degree()));
  for (int i = 0; i < a.degree(); ++i)
    img[static_cast<std::size_t>(i)] = b.apply(a.apply(i));
  return Perm(std::move(img));
}

// Conjugate of p by r: maps r(i) to r(p(i)).
inline Perm conjugate(const Perm& p, const Perm& r) {
  return then(then(r.inverse(), p), r);
}

inline bool is_single_cycle(const Perm& p) {
  int at = 0;
  for (int steps = 1; steps < p.degree(); ++steps) {
    at = p.apply(at);
    if (at == 0) return false;
  }
  return p.apply(at) == 0;
}

}  // namespace benenson
