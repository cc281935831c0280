#include "laso/sparse_vector.hpp"

#include <algorithm>
#include <cmath>

namespace laso {

SparseVector SparseVector::from_unsorted(std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const Entry& e : entries) {
    if (!merged.empty() && merged.back().first == e.first) {
      merged.back().second += e.second;
    } else {
      merged.push_back(e);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Entry& e) { return e.second == 0.0; }),
               merged.end());
  SparseVector v;
  v.entries_ = std::move(merged);
  return v;
}

SparseVector SparseVector::from_sorted(std::vector<Entry> entries) {
  SparseVector v;
  v.entries_ = std::move(entries);
  return v;
}

double SparseVector::value_at(std::uint32_t id) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), id,
      [](const Entry& e, std::uint32_t key) { return e.first < key; });
  if (it != entries_.end() && it->first == id) return it->second;
  return 0.0;
}

double SparseVector::l2_norm_squared() const {
  double s = 0.0;
  for (const Entry& e : entries_) s += e.second * e.second;
  return s;
}

double SparseVector::l2_norm() const { return std::sqrt(l2_norm_squared()); }

SparseVector add_scaled(const SparseVector& a, const SparseVector& b,
                        double factor) {
  std::vector<SparseVector::Entry> out;
  out.reserve(a.size() + b.size());
  const auto& ae = a.entries();
  const auto& be = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ae.size() && j < be.size()) {
    if (ae[i].first < be[j].first) {
      out.push_back(ae[i++]);
    } else if (ae[i].first > be[j].first) {
      out.emplace_back(be[j].first, factor * be[j].second);
      ++j;
    } else {
      double v = ae[i].second + factor * be[j].second;
      if (v != 0.0) out.emplace_back(ae[i].first, v);
      ++i;
      ++j;
    }
  }
  for (; i < ae.size(); ++i) out.push_back(ae[i]);
  for (; j < be.size(); ++j) out.emplace_back(be[j].first, factor * be[j].second);
  return SparseVector::from_sorted(std::move(out));
}

SparseVector scale(const SparseVector& v, double factor) {
  if (factor == 0.0) return SparseVector();
  std::vector<SparseVector::Entry> out;
  out.reserve(v.size());
  for (const auto& e : v.entries()) out.emplace_back(e.first, factor * e.second);
  return SparseVector::from_sorted(std::move(out));
}

double dot(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  const auto& ae = a.entries();
  const auto& be = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ae.size() && j < be.size()) {
    if (ae[i].first < be[j].first) {
      ++i;
    } else if (ae[i].first > be[j].first) {
      ++j;
    } else {
      s += ae[i].second * be[j].second;
      ++i;
      ++j;
    }
  }
  return s;
}

SparseVector project_unit(const SparseVector& u) {
  double n = u.l2_norm();
  if (n <= 1.0) return u;
  return scale(u, 1.0 / n);
}

}  // namespace laso
