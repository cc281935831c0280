#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace laso {

// Sparse feature vector: entries sorted by strictly increasing feature id,
// exact zeros never stored. Immutable in spirit -- all arithmetic returns
// new vectors. Holds per-node feature vectors and update directions.
class SparseVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  SparseVector() = default;

  // Sorts, sums duplicate ids, drops entries that come out exactly zero.
  static SparseVector from_unsorted(std::vector<Entry> entries);

  // Entries must already be sorted by id with no duplicates or zeros.
  static SparseVector from_sorted(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double value_at(std::uint32_t id) const;  // 0 for absent ids

  double l2_norm_squared() const;
  double l2_norm() const;

  bool operator==(const SparseVector& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::vector<Entry> entries_;
};

// this + factor * other, merged in one pass.
SparseVector add_scaled(const SparseVector& a, const SparseVector& b,
                        double factor);

inline SparseVector add(const SparseVector& a, const SparseVector& b) {
  return add_scaled(a, b, 1.0);
}
inline SparseVector subtract(const SparseVector& a, const SparseVector& b) {
  return add_scaled(a, b, -1.0);
}

SparseVector scale(const SparseVector& v, double factor);

// Sparse-sparse dot product.
double dot(const SparseVector& a, const SparseVector& b);

// u / max{1, ||u||_2}: identity inside the unit sphere, normalized outside.
SparseVector project_unit(const SparseVector& u);

}  // namespace laso
