#include "laso/eval.hpp"

#include <algorithm>
#include <stdexcept>

#include "laso/conll.hpp"

namespace laso {

namespace {
void score_spans(const std::vector<ChunkSpan>& gold,
                 const std::vector<ChunkSpan>& predicted, EvalResult* r) {
  r->gold_spans += static_cast<long>(gold.size());
  r->predicted_spans += static_cast<long>(predicted.size());
  for (const auto& p : predicted) {
    if (std::find(gold.begin(), gold.end(), p) != gold.end()) {
      ++r->correct_spans;
    }
  }
}

void finish_spans(EvalResult* r) {
  const double c = static_cast<double>(r->correct_spans);
  r->precision =
      r->predicted_spans > 0 ? c / static_cast<double>(r->predicted_spans) : 0.0;
  r->recall = r->gold_spans > 0 ? c / static_cast<double>(r->gold_spans) : 0.0;
  const double pr = r->precision + r->recall;
  r->f1 = pr > 0.0 ? 2.0 * r->precision * r->recall / pr : 0.0;
}
}  // namespace

EvalResult evaluate_chunks(
    const std::vector<std::vector<ChunkSpan>>& gold,
    const std::vector<std::vector<ChunkSpan>>& predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("evaluate_chunks: sentence count mismatch");
  }
  EvalResult r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    score_spans(gold[i], predicted[i], &r);
  }
  finish_spans(&r);
  return r;
}

EvalResult evaluate_joint(const std::vector<std::vector<JointLabel>>& gold,
                          const std::vector<std::vector<JointLabel>>& predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("evaluate_joint: sentence count mismatch");
  }
  EvalResult r;
  long tokens = 0, tag_ok = 0, chunk_ok = 0, joint_ok = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    const auto& p = predicted[i];
    if (g.size() != p.size()) {
      throw std::invalid_argument("evaluate_joint: sentence length mismatch");
    }
    std::vector<std::string> g_bio, p_bio;
    for (std::size_t t = 0; t < g.size(); ++t) {
      ++tokens;
      const bool tag = g[t].pos == p[t].pos;
      const bool chunk = g[t].bio == p[t].bio;
      tag_ok += tag;
      chunk_ok += chunk;
      joint_ok += tag && chunk;
      g_bio.push_back(g[t].bio);
      p_bio.push_back(p[t].bio);
    }
    score_spans(spans_from_bio(g_bio), spans_from_bio(p_bio), &r);
  }
  finish_spans(&r);
  if (tokens > 0) {
    r.tag_accuracy = static_cast<double>(tag_ok) / static_cast<double>(tokens);
    r.chunk_tag_accuracy =
        static_cast<double>(chunk_ok) / static_cast<double>(tokens);
    r.joint_accuracy =
        static_cast<double>(joint_ok) / static_cast<double>(tokens);
  }
  return r;
}

}  // namespace laso
