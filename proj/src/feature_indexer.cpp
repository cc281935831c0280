#include "laso/feature_indexer.hpp"

#include <cassert>

namespace laso {

std::uint32_t FeatureIndexer::intern(std::string_view name) {
  assert(!frozen_);
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  std::uint32_t id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::uint32_t FeatureIndexer::id_of(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  return it == ids_.end() ? kUnknown : it->second;
}

}  // namespace laso
