#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "laso/chunk_task.hpp"
#include "laso/conll.hpp"
#include "laso/eval.hpp"
#include "laso/joint_task.hpp"
#include "laso/learn.hpp"
#include "laso/model_io.hpp"

namespace laso {

// One experiment's knobs, shared by train / sweep / bounds verification.
struct RunConfig {
  TaskKind task = TaskKind::kChunk;
  UpdateRule rule = UpdateRule::perceptron();
  UpdateMode mode = UpdateMode::kLaso;
  std::uint32_t beam_train = 1;
  int epochs = -1;  // negative: rule default (perceptron 8, large-margin 3)
  bool average = true;
  bool shuffle = false;
  bool stop_when_converged = false;
  std::uint64_t seed = 1;
  FeatureTemplateConfig templates;
  // (list name, file path) pairs; unreadable files are skipped with a log line.
  std::vector<std::pair<std::string, std::string>> gazetteer_specs;
};

int effective_epochs(const RunConfig& cfg);

// Per-task learning hooks, so callers can instrument both task kinds without
// caring which one a config selects.
struct TrainInstrumentation {
  LearnHooks<ChunkState> chunk;
  LearnHooks<JointState> joint;
};

struct TrainOutput {
  Model model;
  TrainingReport report;
};

// Builds the label vocabularies and feature space from the training
// sentences, runs the online learner, and packages the decodable model.
TrainOutput train_model(const std::vector<Sentence>& data, const RunConfig& cfg,
                        std::ostream* log = nullptr,
                        const TrainInstrumentation& instr = {});

// Decodes every sentence with the model's weights at the given beam width
// (0 = the model's training beam), replacing the predicted columns: chunk
// task rewrites bio/chunks, joint task also rewrites pos. Sentences are
// independent; `threads` > 1 splits them across workers.
std::vector<Sentence> decode_corpus(const Model& model,
                                    std::vector<Sentence> input,
                                    std::uint32_t beam,
                                    const GazetteerSet& gazetteers,
                                    unsigned threads = 1,
                                    double* wall_seconds = nullptr);

// Task-appropriate metrics: span P/R/F for the chunk task, plus the token
// accuracies for the joint task.
EvalResult evaluate_for_task(TaskKind task, const std::vector<Sentence>& gold,
                             const std::vector<Sentence>& predicted);

struct SweepResult {
  std::vector<std::uint32_t> train_beams;
  std::vector<std::uint32_t> decode_beams;
  std::vector<std::vector<double>> f1;  // f1[i][j]: train_beams[i] x decode_beams[j]
};

// Trains one model per training beam and decodes the eval set at every
// decoding beam.
SweepResult beam_sweep(const std::vector<Sentence>& train_data,
                       const std::vector<Sentence>& eval_data,
                       const RunConfig& base,
                       const std::vector<std::uint32_t>& train_beams,
                       const std::vector<std::uint32_t>& decode_beams,
                       std::ostream* log = nullptr, unsigned threads = 1);

struct BoundsReport {
  std::uint64_t updates = 0;
  std::uint64_t epochs_run = 0;
  bool converged = false;
  double radius = 0.0;        // perceptron rule only
  double margin = 0.0;        // empirical, normalized by max(1, ||w||)
  double bound = 0.0;
  bool applicable = false;    // converged with positive margin
  bool pass = false;          // applicable and updates <= bound
  std::size_t sentences = 0;
};

// Trains on the first `subset` sentences until an epoch fires no updates
// (capped), measures the empirical margin (and radius for the perceptron
// rule) under the final raw weights, and compares the update count against
// the applicable mistake bound.
BoundsReport verify_bounds(const std::vector<Sentence>& data,
                           const RunConfig& cfg, std::size_t subset,
                           std::ostream* log = nullptr);

}  // namespace laso
