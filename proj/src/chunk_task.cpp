#include "laso/chunk_task.hpp"

#include <algorithm>

namespace laso {

namespace {
constexpr const char* kBos = "<s>";
constexpr const char* kEos = "</s>";

std::string length_bucket(int n) {
  if (n <= 4) return std::to_string(n);
  if (n <= 6) return "5-6";
  if (n <= 8) return "7-8";
  return "9+";
}
}  // namespace

const std::vector<std::string>& chunk_sequence_templates() {
  static const std::vector<std::string> kTemplates{"w", "lw", "st",
                                                   "cp", "pos", "pos1"};
  return kTemplates;
}

ChunkTask::ChunkTask(const Sentence* sentence, TaskContext* ctx)
    : sentence_(sentence), ctx_(ctx) {
  const auto& s = *sentence_;
  base_.reserve(s.size());
  seq_vals_.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string* pos = i < s.pos.size() ? &s.pos[i] : nullptr;
    base_.push_back(base_features(s.tokens[i], pos, ctx_->cfg, ctx_->gazetteers,
                                  /*include_shapes=*/false));
    const auto& cfg = ctx_->cfg;
    std::vector<std::string> vals;
    vals.push_back(cfg.word ? s.tokens[i] : "");
    vals.push_back(cfg.lower ? lowercase(s.tokens[i]) : "");
    vals.push_back(cfg.stem ? stem(s.tokens[i]) : "");
    vals.push_back(cfg.case_pattern ? case_pattern(s.tokens[i]) : "");
    vals.push_back(cfg.pos && pos ? *pos : "");
    vals.push_back(cfg.pos && pos && !pos->empty() ? pos->substr(0, 1) : "");
    seq_vals_.push_back(std::move(vals));
  }
}

ChunkTask::Gold ChunkTask::gold_tiling(const Sentence& sentence) {
  Gold tiles;
  int at = 0;
  const int len = static_cast<int>(sentence.size());
  for (const auto& chunk : sentence.chunks) {
    while (at < chunk.start) {
      tiles.push_back({at, at + 1, "O"});
      ++at;
    }
    tiles.push_back(chunk);
    at = chunk.end;
  }
  while (at < len) {
    tiles.push_back({at, at + 1, "O"});
    ++at;
  }
  return tiles;
}

std::vector<Transition<ChunkState>> ChunkTask::expand(const State& s) const {
  const int len = static_cast<int>(sentence_->size());
  const int remaining = len - s.covered;
  const std::string& prev = s.tiles.empty() ? kBos : s.tiles.back().label;

  std::vector<Transition<State>> out;
  const int max_len = std::min(remaining, ctx_->cfg.max_chunk_length);
  out.reserve(1 + static_cast<std::size_t>(max_len) * ctx_->chunk_labels.size());

  const auto push = [&](ChunkSpan span) {
    State child = s;
    child.covered = span.end;
    SparseVector delta = span_features(span, prev);
    const int advance = span.length();
    child.tiles.push_back(std::move(span));
    out.push_back({std::move(child), std::move(delta), advance});
  };

  push({s.covered, s.covered + 1, "O"});
  for (int l = 1; l <= max_len; ++l) {
    for (const auto& label : ctx_->chunk_labels) {
      push({s.covered, s.covered + l, label});
    }
  }
  return out;
}

bool ChunkTask::is_good(const State& s, const Gold& gold) const {
  if (s.tiles.size() > gold.size()) return false;
  return std::equal(s.tiles.begin(), s.tiles.end(), gold.begin());
}

std::vector<Transition<ChunkState>> ChunkTask::good_successors(
    const State& s, const Gold& gold) const {
  if (s.tiles.size() >= gold.size()) return {};
  const ChunkSpan& next = gold[s.tiles.size()];
  const std::string& prev = s.tiles.empty() ? kBos : s.tiles.back().label;
  State child = s;
  child.covered = next.end;
  child.tiles.push_back(next);
  return {{std::move(child), span_features(next, prev), next.length()}};
}

SparseVector ChunkTask::span_features(const ChunkSpan& span,
                                      const std::string& prev_label) const {
  const auto& cfg = ctx_->cfg;
  const int len = static_cast<int>(sentence_->size());
  const int n = span.length();
  const std::string suffix = "|" + span.label;

  std::vector<SparseVector::Entry> entries;
  std::string name;
  const auto emit = [&]() {
    const std::uint32_t id = ctx_->indexer->resolve(name);
    if (id != FeatureIndexer::kUnknown) entries.emplace_back(id, 1.0);
  };

  if (cfg.chunk_length) {
    name = "len=" + std::to_string(n) + suffix;
    emit();
  }
  if (cfg.chunk_length_bucket) {
    name = "lenb=" + length_bucket(n) + suffix;
    emit();
  }
  name = "tr=" + prev_label + suffix;
  emit();

  for (int i = 0; i < n; ++i) {
    for (const auto& b : base_[static_cast<std::size_t>(span.start + i)]) {
      name = "@" + std::to_string(i) + "|" + b + suffix;
      emit();
    }
  }

  if (span.start > 0) {
    for (const auto& b : base_[static_cast<std::size_t>(span.start - 1)]) {
      name = "<|" + b + suffix;
      emit();
    }
  } else {
    name = std::string("<|") + kBos + suffix;
    emit();
  }
  if (span.end < len) {
    for (const auto& b : base_[static_cast<std::size_t>(span.end)]) {
      name = ">|" + b + suffix;
      emit();
    }
  } else {
    name = std::string(">|") + kEos + suffix;
    emit();
  }

  const auto& templates = chunk_sequence_templates();
  for (std::size_t t = 0; t < templates.size(); ++t) {
    if (seq_vals_[static_cast<std::size_t>(span.start)][t].empty()) continue;
    std::vector<const std::string*> padded;
    padded.reserve(static_cast<std::size_t>(n) + 2);
    static const std::string bos = kBos, eos = kEos;
    padded.push_back(&bos);
    for (int i = 0; i < n; ++i) {
      padded.push_back(&seq_vals_[static_cast<std::size_t>(span.start + i)][t]);
    }
    padded.push_back(&eos);

    name = "sq|" + templates[t] + "=";
    for (int i = 0; i < n; ++i) {
      if (i) name += "_";
      name += *padded[static_cast<std::size_t>(i) + 1];
    }
    name += suffix;
    emit();

    for (std::size_t i = 0; i + 1 < padded.size(); ++i) {
      name = "g2|" + templates[t] + "=" + *padded[i] + "_" + *padded[i + 1] + suffix;
      emit();
    }
    for (std::size_t i = 0; i + 2 < padded.size(); ++i) {
      name = "g3|" + templates[t] + "=" + *padded[i] + "_" + *padded[i + 1] + "_" +
             *padded[i + 2] + suffix;
      emit();
    }
  }

  return SparseVector::from_unsorted(std::move(entries));
}

}  // namespace laso
