#pragma once

#include <cstdint>
#include <vector>

#include "laso/sparse_vector.hpp"

namespace laso {

// Dense weight vector indexed by feature id, with
//   - a lazy global multiplier so the unit-sphere projection of the
//     approximate-large-margin update costs O(touched coordinates + 1),
//   - a lazily synced accumulator that realizes "add the current weight
//     vector to the accumulator once per training example" for averaging
//     without an O(dim) sweep per example,
//   - the generation counter k (1-based, incremented at every update).
//
// Single writer during training; finalized (averaged) vectors are immutable
// and may be read concurrently.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::uint32_t dim) { ensure_size(dim); }

  double weight(std::uint32_t id) const {
    return id < raw_.size() ? scale_ * raw_[id] : 0.0;
  }

  // w . v over the effective (scaled) weights; absent ids contribute 0.
  double dot(const SparseVector& v) const;

  // w += delta (perceptron rule); k advances even when delta is empty.
  void add_update(const SparseVector& delta);

  // w <- project(w + step * project(delta)) with step = c * k^{-1/2}.
  // Both projections are into the l2 unit sphere. k advances.
  void add_projected_update(const SparseVector& delta, double c);

  // Call once after each training example; feeds the averaging accumulator.
  void end_example();

  // Mean of the per-example snapshots. If no example was ever accumulated,
  // returns the raw weights and sets *warned (the caller logs).
  WeightVector finalize_averaged(bool* warned = nullptr) const;

  std::uint64_t generation() const { return k_; }      // k, initially 1
  std::uint64_t updates_seen() const { return updates_; }
  std::uint64_t examples_seen() const { return examples_; }

  double norm() const;          // tracked ||w||_2 of the effective vector
  double norm_recomputed() const;  // exact recomputation, for checks
  std::uint32_t dimension() const { return static_cast<std::uint32_t>(raw_.size()); }

  // Dense snapshot of the effective weights (model serialization).
  std::vector<double> dense(std::uint32_t dim) const;
  static WeightVector from_dense(std::vector<double> weights);

 private:
  void ensure_size(std::uint32_t dim);
  void sync_accumulator(std::uint32_t id);
  void rebase_if_needed();

  std::vector<double> raw_;       // effective weight i = scale_ * raw_[i]
  double scale_ = 1.0;
  double norm2_ = 0.0;            // tracked squared norm of effective vector

  std::vector<double> accum_;     // synced sum of per-example snapshots
  std::vector<double> psum_at_sync_;  // psum_ value when accum_[i] last synced
  double psum_ = 0.0;             // sum over finished examples of scale_
  std::uint64_t examples_ = 0;

  std::uint64_t k_ = 1;
  std::uint64_t updates_ = 0;
};

inline double dot(const WeightVector& w, const SparseVector& v) {
  return w.dot(v);
}

}  // namespace laso
