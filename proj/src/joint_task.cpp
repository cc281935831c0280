#include "laso/joint_task.hpp"

#include <algorithm>
#include <string_view>

namespace laso {

namespace {
const JointLabel kStart{"O", "O"};
}

JointTask::JointTask(const Sentence* sentence, TaskContext* ctx)
    : sentence_(sentence), ctx_(ctx) {
  const auto& s = *sentence_;
  base_.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    base_.push_back(base_features(s.tokens[i], nullptr, ctx_->cfg,
                                  ctx_->gazetteers, /*include_shapes=*/true));
  }
  const std::size_t p = ctx_->pos_tags.size();
  const std::size_t b = ctx_->bio_tags.size();
  main_cache_.assign(s.size(), {});
  main_cached_.assign(s.size(), {});
  for (std::size_t i = 0; i < s.size(); ++i) {
    main_cache_[i].assign(p, std::vector<std::vector<SparseVector::Entry>>(b));
    main_cached_[i].assign(p, std::vector<bool>(b, false));
  }
}

JointTask::Gold JointTask::gold_labels(const Sentence& sentence) {
  Gold gold;
  gold.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    gold.push_back({sentence.pos[i], sentence.bio[i]});
  }
  return gold;
}

bool JointTask::bio_legal(const std::string& prev, const std::string& next) {
  if (next.rfind("I-", 0) != 0) return true;
  const std::string_view type = std::string_view(next).substr(2);
  if (prev.size() != next.size()) return false;
  return (prev.rfind("B-", 0) == 0 || prev.rfind("I-", 0) == 0) &&
         std::string_view(prev).substr(2) == type;
}

std::size_t JointTask::pos_index(const std::string& pos) const {
  const auto& v = ctx_->pos_tags;
  const auto it = std::find(v.begin(), v.end(), pos);
  return it == v.end() ? v.size() : static_cast<std::size_t>(it - v.begin());
}

std::size_t JointTask::bio_index(const std::string& bio) const {
  const auto& v = ctx_->bio_tags;
  const auto it = std::find(v.begin(), v.end(), bio);
  return it == v.end() ? v.size() : static_cast<std::size_t>(it - v.begin());
}

std::vector<Transition<JointState>> JointTask::expand(const State& s) const {
  const std::size_t position = s.assigned.size();
  const JointLabel& prev = s.assigned.empty() ? kStart : s.assigned.back();

  std::vector<Transition<State>> out;
  out.reserve(ctx_->pos_tags.size() * ctx_->bio_tags.size());
  for (const auto& pos : ctx_->pos_tags) {
    for (const auto& bio : ctx_->bio_tags) {
      if (!bio_legal(prev.bio, bio)) continue;
      State child = s;
      child.assigned.push_back({pos, bio});
      out.push_back(
          {std::move(child), step_features(position, {pos, bio}, prev)});
    }
  }
  return out;
}

bool JointTask::is_good(const State& s, const Gold& gold) const {
  if (s.assigned.size() > gold.size()) return false;
  return std::equal(s.assigned.begin(), s.assigned.end(), gold.begin());
}

std::vector<Transition<JointState>> JointTask::good_successors(
    const State& s, const Gold& gold) const {
  if (s.assigned.size() >= gold.size()) return {};
  const JointLabel& next = gold[s.assigned.size()];
  const JointLabel& prev = s.assigned.empty() ? kStart : s.assigned.back();
  State child = s;
  child.assigned.push_back(next);
  return {{std::move(child), step_features(s.assigned.size(), next, prev)}};
}

SparseVector JointTask::step_features(std::size_t position,
                                      const JointLabel& label,
                                      const JointLabel& prev) const {
  std::vector<SparseVector::Entry> entries;
  std::string name;
  const auto emit = [&]() {
    const std::uint32_t id = ctx_->indexer->resolve(name);
    if (id != FeatureIndexer::kUnknown) entries.emplace_back(id, 1.0);
  };

  const std::size_t pi = pos_index(label.pos);
  const std::size_t bi = bio_index(label.bio);
  const bool cacheable =
      pi < ctx_->pos_tags.size() && bi < ctx_->bio_tags.size();
  if (cacheable && main_cached_[position][pi][bi]) {
    entries = main_cache_[position][pi][bi];
  } else {
    const std::string pb = label.pos + "_" + label.bio;
    for (const auto& b : base_[position]) {
      name = "j|" + b + "|p=" + label.pos;
      emit();
      name = "j|" + b + "|b=" + label.bio;
      emit();
      name = "j|" + b + "|pb=" + pb;
      emit();
    }
    name = "jp=" + label.pos;
    emit();
    name = "jb=" + label.bio;
    emit();
    name = "jpb=" + pb;
    emit();
    if (cacheable) {
      main_cache_[position][pi][bi] = entries;
      main_cached_[position][pi][bi] = true;
    }
  }

  name = "jtp=" + prev.pos + "_" + label.pos;
  emit();
  name = "jtb=" + prev.bio + "_" + label.bio;
  emit();

  return SparseVector::from_unsorted(std::move(entries));
}

}  // namespace laso
