#pragma once

#include <string>
#include <vector>

#include "laso/feature_indexer.hpp"
#include "laso/text_features.hpp"

namespace laso {

// Shared, per-run state for task instances: template switches, word lists,
// label vocabularies and the feature indexer. Tasks hold a pointer; the
// context outlives them. The indexer interns new names while building
// training instances and is frozen before evaluation/decoding, after which
// everything here is read-only and safe to share across threads.
struct TaskContext {
  FeatureTemplateConfig cfg;
  GazetteerSet gazetteers;
  std::vector<std::string> chunk_labels;  // non-O chunk types, sorted
  std::vector<std::string> pos_tags;      // joint-task output vocabulary, sorted
  std::vector<std::string> bio_tags;      // O + B-X/I-X over chunk_labels
  FeatureIndexer* indexer = nullptr;
};

inline std::vector<std::string> bio_tagset(
    const std::vector<std::string>& chunk_labels) {
  std::vector<std::string> out{"O"};
  for (const auto& l : chunk_labels) out.push_back("B-" + l);
  for (const auto& l : chunk_labels) out.push_back("I-" + l);
  return out;
}

}  // namespace laso
