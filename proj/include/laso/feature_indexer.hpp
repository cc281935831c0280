#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace laso {

// Maps feature-name strings to dense ids. Built on the training set, then
// frozen; unseen names map to kUnknown afterwards (extractors drop those, so
// unknown features score zero everywhere). Reads of a frozen indexer are
// safe from multiple threads.
class FeatureIndexer {
 public:
  static constexpr std::uint32_t kUnknown = 0xffffffffu;

  // Interns the name, assigning the next dense id. Must not be frozen.
  std::uint32_t intern(std::string_view name);

  // Lookup without interning: kUnknown for unseen names.
  std::uint32_t id_of(std::string_view name) const;

  // intern() while building, id_of() once frozen.
  std::uint32_t resolve(std::string_view name) {
    return frozen_ ? id_of(name) : intern(name);
  }

  const std::string& name_of(std::uint32_t id) const { return names_[id]; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(names_.size()); }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

}  // namespace laso
