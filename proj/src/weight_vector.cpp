#include "laso/weight_vector.hpp"

#include <algorithm>
#include <cmath>

namespace laso {

void WeightVector::ensure_size(std::uint32_t dim) {
  if (raw_.size() >= dim) return;
  raw_.resize(dim, 0.0);
  accum_.resize(dim, 0.0);
  // New coordinates were zero for every past example, so syncing from the
  // current psum_ contributes nothing for them.
  psum_at_sync_.resize(dim, psum_);
}

void WeightVector::sync_accumulator(std::uint32_t id) {
  accum_[id] += raw_[id] * (psum_ - psum_at_sync_[id]);
  psum_at_sync_[id] = psum_;
}

double WeightVector::dot(const SparseVector& v) const {
  double s = 0.0;
  for (const auto& [id, value] : v.entries()) {
    if (id < raw_.size()) s += raw_[id] * value;
  }
  return scale_ * s;
}

void WeightVector::add_update(const SparseVector& delta) {
  if (!delta.empty()) ensure_size(delta.entries().back().first + 1);
  double cross = 0.0, dn2 = 0.0;
  for (const auto& [id, value] : delta.entries()) {
    sync_accumulator(id);
    cross += scale_ * raw_[id] * value;
    dn2 += value * value;
    raw_[id] += value / scale_;
  }
  norm2_ += 2.0 * cross + dn2;
  if (norm2_ < 0.0) norm2_ = 0.0;
  ++k_;
  ++updates_;
}

void WeightVector::add_projected_update(const SparseVector& delta, double c) {
  SparseVector dir = project_unit(delta);
  double step = c / std::sqrt(static_cast<double>(k_));
  if (!dir.empty()) {
    ensure_size(dir.entries().back().first + 1);
    double cross = 0.0, dn2 = 0.0;
    for (const auto& [id, value] : dir.entries()) {
      sync_accumulator(id);
      cross += scale_ * raw_[id] * value;
      dn2 += value * value;
      raw_[id] += step * value / scale_;
    }
    norm2_ += 2.0 * step * cross + step * step * dn2;
    if (norm2_ < 0.0) norm2_ = 0.0;
    if (norm2_ > 1.0) {
      scale_ /= std::sqrt(norm2_);
      norm2_ = 1.0;
      rebase_if_needed();
    }
  }
  ++k_;
  ++updates_;
}

void WeightVector::rebase_if_needed() {
  if (scale_ > 1e-9 && scale_ < 1e9) return;
  for (std::uint32_t i = 0; i < raw_.size(); ++i) {
    sync_accumulator(i);
    raw_[i] *= scale_;
  }
  scale_ = 1.0;
}

void WeightVector::end_example() {
  ++examples_;
  psum_ += scale_;
}

WeightVector WeightVector::finalize_averaged(bool* warned) const {
  WeightVector out;
  out.raw_ = raw_;
  out.k_ = k_;
  out.updates_ = updates_;
  out.examples_ = examples_;
  if (examples_ == 0) {
    if (warned) *warned = true;
    out.scale_ = scale_;
    out.norm2_ = norm2_;
    out.accum_.resize(raw_.size(), 0.0);
    out.psum_at_sync_.resize(raw_.size(), 0.0);
    return out;
  }
  if (warned) *warned = false;
  for (std::uint32_t i = 0; i < raw_.size(); ++i) {
    double total = accum_[i] + raw_[i] * (psum_ - psum_at_sync_[i]);
    out.raw_[i] = total / static_cast<double>(examples_);
  }
  out.scale_ = 1.0;
  double n2 = 0.0;
  for (double v : out.raw_) n2 += v * v;
  out.norm2_ = n2;
  out.accum_.resize(out.raw_.size(), 0.0);
  out.psum_at_sync_.resize(out.raw_.size(), 0.0);
  return out;
}

double WeightVector::norm() const { return std::sqrt(norm2_); }

double WeightVector::norm_recomputed() const {
  double s = 0.0;
  for (double v : raw_) s += v * v;
  return std::abs(scale_) * std::sqrt(s);
}

std::vector<double> WeightVector::dense(std::uint32_t dim) const {
  std::vector<double> out(dim, 0.0);
  std::uint32_t n = std::min<std::uint32_t>(dim, static_cast<std::uint32_t>(raw_.size()));
  for (std::uint32_t i = 0; i < n; ++i) out[i] = scale_ * raw_[i];
  return out;
}

WeightVector WeightVector::from_dense(std::vector<double> weights) {
  WeightVector w;
  w.raw_ = std::move(weights);
  w.accum_.resize(w.raw_.size(), 0.0);
  w.psum_at_sync_.resize(w.raw_.size(), 0.0);
  double n2 = 0.0;
  for (double v : w.raw_) n2 += v * v;
  w.norm2_ = n2;
  return w;
}

}  // namespace laso
