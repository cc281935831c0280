#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "laso/learn.hpp"
#include "laso/text_features.hpp"

namespace laso {

enum class TaskKind : std::uint8_t { kChunk = 0, kJoint = 1 };

const char* task_name(TaskKind task);

// Everything a decode run needs, plus provenance (epochs, seed, training
// beam: the default decoding beam matches the beam the model was trained
// with). Gazetteer contents are NOT stored -- only the list names, so decode
// can warn when a list the features were built with is missing.
struct Model {
  TaskKind task = TaskKind::kChunk;
  UpdateRule rule;
  UpdateMode mode = UpdateMode::kLaso;
  bool averaged = true;
  std::uint32_t beam_train = 1;
  std::uint32_t epochs = 0;
  std::uint64_t seed = 1;
  FeatureTemplateConfig cfg;
  std::vector<std::string> chunk_labels;
  std::vector<std::string> pos_tags;
  std::vector<std::string> gazetteer_names;
  std::vector<std::string> feature_names;  // id = index
  std::vector<double> weights;             // parallel to feature_names
};

// Binary model format, all integers and doubles little-endian:
//   magic "LASOMDL\n", u32 version,
//   u8 task, u8 rule, u8 update-mode, u8 averaged,
//   f64 alpha, f64 b, f64 c,
//   u32 training beam, u32 epochs, u64 seed,
//   u32 max chunk length, u32 template bitmask,
//   4 string tables (chunk labels, pos tags, gazetteer names, feature
//   names), each u32 count then (u32 byte length, raw bytes) per string,
//   then one f64 weight per feature name (IEEE-754 bit pattern preserved).
void save_model(std::ostream& out, const Model& model);
void save_model_file(const std::string& path, const Model& model);

// Throws DataError on bad magic, unknown version, or truncation.
Model load_model(std::istream& in, const std::string& source_name);
Model load_model_file(const std::string& path);

}  // namespace laso
