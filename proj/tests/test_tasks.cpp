#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "laso/chunk_task.hpp"
#include "laso/joint_task.hpp"
#include "laso/text_features.hpp"

using namespace laso;

namespace {

Sentence make_sentence(std::vector<std::string> tokens,
                       std::vector<std::string> pos,
                       std::vector<ChunkSpan> chunks) {
  Sentence s;
  s.tokens = std::move(tokens);
  s.pos = std::move(pos);
  s.chunks = std::move(chunks);
  return s;
}

struct ChunkFixture {
  FeatureIndexer indexer;
  TaskContext ctx;

  explicit ChunkFixture(std::vector<std::string> labels = {"NP", "VP"}) {
    ctx.chunk_labels = std::move(labels);
    ctx.indexer = &indexer;
  }
};

struct JointFixture {
  FeatureIndexer indexer;
  TaskContext ctx;

  JointFixture(std::vector<std::string> pos_tags = {"N", "V"},
               std::vector<std::string> labels = {"NP", "VP"}) {
    ctx.chunk_labels = std::move(labels);
    ctx.pos_tags = std::move(pos_tags);
    ctx.bio_tags = bio_tagset(ctx.chunk_labels);
    ctx.indexer = &indexer;
  }
};

bool has_feature(const std::vector<std::string>& feats, const std::string& f) {
  return std::find(feats.begin(), feats.end(), f) != feats.end();
}

std::vector<std::string> names_of(const SparseVector& v,
                                  const FeatureIndexer& indexer) {
  std::vector<std::string> out;
  for (const auto& [id, val] : v.entries()) out.push_back(indexer.name_of(id));
  return out;
}

}  // namespace

TEST_CASE("token base features: Great") {
  FeatureTemplateConfig cfg;
  GazetteerSet gaz;
  const auto feats = base_features("Great", nullptr, cfg, gaz, false);
  CHECK(has_feature(feats, "cp=Xx"));
  CHECK(has_feature(feats, "pre1=G"));
  CHECK(has_feature(feats, "pre2=Gr"));
  CHECK(has_feature(feats, "pre3=Gre"));
  CHECK(has_feature(feats, "suf1=t"));
  CHECK(has_feature(feats, "suf2=at"));
  CHECK(has_feature(feats, "suf3=eat"));
  CHECK(has_feature(feats, "w=Great"));
  CHECK(has_feature(feats, "lw=great"));
  CHECK(has_feature(feats, "st=great"));
  CHECK(has_feature(feats, "wst=Great+great"));
}

TEST_CASE("token base features: determinism and gazetteer membership") {
  FeatureTemplateConfig cfg;
  GazetteerSet gaz;
  gaz.add("stop", {"the", "of"});

  const auto a = base_features("The", nullptr, cfg, gaz, false);
  const auto b = base_features("The", nullptr, cfg, gaz, false);
  CHECK(a == b);
  CHECK(has_feature(a, "gaz:stop"));
  CHECK_FALSE(has_feature(base_features("dog", nullptr, cfg, gaz, false),
                          "gaz:stop"));
}

TEST_CASE("token base features: pos column only when supplied") {
  FeatureTemplateConfig cfg;
  GazetteerSet gaz;
  const std::string pos = "NNP";
  const auto with = base_features("Great", &pos, cfg, gaz, false);
  CHECK(has_feature(with, "pos=NNP"));
  CHECK(has_feature(with, "pos1=N"));
  const auto without = base_features("Great", nullptr, cfg, gaz, false);
  for (const auto& f : without) CHECK(f.substr(0, 3) != "pos");
}

TEST_CASE("shape classes: digits, caps, punctuation") {
  const auto digits = shape_classes("93");
  CHECK(has_feature(digits, "all-digits"));
  CHECK(has_feature(digits, "two-digits"));
  CHECK(has_feature(digits, "has-digit"));

  CHECK(has_feature(shape_classes("1984"), "four-digits"));
  CHECK(has_feature(shape_classes("3.5"), "number-sep"));
  CHECK(has_feature(shape_classes("IBM"), "all-caps"));
  CHECK(has_feature(shape_classes("Great"), "init-cap"));
  CHECK(has_feature(shape_classes("vice-chairman"), "has-hyphen"));
  CHECK(has_feature(shape_classes("U.S."), "has-dot"));
  CHECK(has_feature(shape_classes(","), "punct-only"));
  CHECK(has_feature(shape_classes(","), "single-char"));
  CHECK(has_feature(shape_classes("R2D2"), "alnum-mix"));
}

TEST_CASE("stemmer rules") {
  CHECK(stem("companies") == "company");
  CHECK(stem("classes") == "class");
  CHECK(stem("funds") == "fund");
  CHECK(stem("less") == "less");
  CHECK(stem("Holding") == "hold");
  CHECK(stem("talked") == "talk");
  CHECK(stem("said") == "said");
  CHECK(stem("as") == "as");
}

TEST_CASE("case patterns") {
  CHECK(case_pattern("Great") == "Xx");
  CHECK(case_pattern("IBM") == "X");
  CHECK(case_pattern("vice-chairman") == "xox");
  CHECK(case_pattern("12-month") == "dox");
  CHECK(case_pattern("U.S.") == "XoXo");
}

TEST_CASE("gold tiling fills gaps with unit O tiles") {
  const Sentence s = make_sentence(
      {"Great", "American", "said", "it", "."}, {"NNP", "NNP", "VBD", "PRP", "."},
      {{0, 2, "NP"}, {2, 3, "VP"}, {3, 4, "NP"}});
  const auto gold = ChunkTask::gold_tiling(s);
  REQUIRE(gold.size() == 4);
  CHECK(gold[0] == ChunkSpan{0, 2, "NP"});
  CHECK(gold[1] == ChunkSpan{2, 3, "VP"});
  CHECK(gold[2] == ChunkSpan{3, 4, "NP"});
  CHECK(gold[3] == ChunkSpan{4, 5, "O"});

  const Sentence all_out = make_sentence({"a", "b"}, {"X", "Y"}, {});
  const auto tiles = ChunkTask::gold_tiling(all_out);
  REQUIRE(tiles.size() == 2);
  CHECK(tiles[0] == ChunkSpan{0, 1, "O"});
  CHECK(tiles[1] == ChunkSpan{1, 2, "O"});
}

TEST_CASE("chunk expansion: one remaining token gives three children") {
  ChunkFixture fx;  // labels {NP, VP}
  const Sentence s = make_sentence({"a", "b", "c"}, {"X", "X", "X"},
                                   {{0, 2, "NP"}});
  ChunkTask task(&s, &fx.ctx);
  ChunkState state{2, {{0, 2, "NP"}}};
  const auto children = task.expand(state);
  REQUIRE(children.size() == 3);
  // The single-token outside tile comes first, then the labeled chunks.
  CHECK(children[0].state.tiles.back() == ChunkSpan{2, 3, "O"});
  CHECK(children[1].state.tiles.back() == ChunkSpan{2, 3, "NP"});
  CHECK(children[2].state.tiles.back() == ChunkSpan{2, 3, "VP"});
  for (const auto& c : children) CHECK(c.state.covered == 3);
}

TEST_CASE("chunk expansion: branching formula at full headroom") {
  ChunkFixture fx({"NP", "VP", "PP"});
  fx.ctx.cfg.max_chunk_length = 4;
  std::vector<std::string> tokens(9, "tok");
  std::vector<std::string> pos(9, "T");
  const Sentence s = make_sentence(tokens, pos, {});
  ChunkTask task(&s, &fx.ctx);

  const auto children = task.expand(task.initial_state());
  // One O child plus |labels| children per length 1..max_chunk_length.
  CHECK(children.size() == 4 * 3 + 1);

  std::set<std::pair<int, std::string>> seen;
  for (const auto& c : children) {
    REQUIRE(c.state.tiles.size() == 1);
    const auto& tile = c.state.tiles[0];
    CHECK(tile.start == 0);
    seen.insert({tile.end, tile.label});
  }
  CHECK(seen.size() == children.size());

  // Near the right edge the lengths clip to the remaining tokens.
  ChunkState near_end{7, ChunkTask::gold_tiling(make_sentence(
                             {"a", "b", "c", "d", "e", "f", "g"},
                             std::vector<std::string>(7, "T"), {}))};
  const auto clipped = task.expand(near_end);
  CHECK(clipped.size() == 2 * 3 + 1);
}

TEST_CASE("chunk gold trace: two-word NP then one-word VP") {
  ChunkFixture fx;
  const Sentence s = make_sentence(
      {"Great", "American", "said", "it", "."}, {"NNP", "NNP", "VBD", "PRP", "."},
      {{0, 2, "NP"}, {2, 3, "VP"}, {3, 4, "NP"}});
  ChunkTask task(&s, &fx.ctx);
  const auto gold = ChunkTask::gold_tiling(s);

  CHECK(task.is_good(task.initial_state(), gold));

  const auto first = task.good_successors(task.initial_state(), gold);
  REQUIRE(first.size() == 1);
  CHECK(first[0].state.tiles.back() == ChunkSpan{0, 2, "NP"});
  CHECK(task.is_good(first[0].state, gold));

  const auto second = task.good_successors(first[0].state, gold);
  REQUIRE(second.size() == 1);
  CHECK(second[0].state.tiles.back() == ChunkSpan{2, 3, "VP"});

  // The good child shows up in the expansion with an identical delta.
  const auto children = task.expand(first[0].state);
  int matches = 0;
  for (const auto& c : children) {
    if (c.state == second[0].state) {
      ++matches;
      CHECK(c.delta == second[0].delta);
    }
  }
  CHECK(matches == 1);

  // Deviating from the gold prefix is immediately bad.
  for (const auto& c : task.expand(task.initial_state())) {
    CHECK(task.is_good(c.state, gold) == (c.state == first[0].state));
  }
}

TEST_CASE("chunk goodness is monotone along random walks") {
  ChunkFixture fx;
  fx.ctx.cfg.max_chunk_length = 3;
  const Sentence s = make_sentence(
      {"w1", "w2", "w3", "w4", "w5", "w6"},
      {"A", "B", "C", "D", "E", "F"},
      {{0, 2, "NP"}, {3, 5, "VP"}});
  ChunkTask task(&s, &fx.ctx);
  const auto gold = ChunkTask::gold_tiling(s);

  std::mt19937 rng(7);
  for (int walk = 0; walk < 200; ++walk) {
    ChunkState state = task.initial_state();
    bool good = task.is_good(state, gold);
    CHECK(good);  // root is always good
    while (!task.is_goal(state)) {
      const auto children = task.expand(state);
      REQUIRE(!children.empty());
      if (good) {
        // Unique good path: exactly one good child.
        int n_good = 0;
        for (const auto& c : children) n_good += task.is_good(c.state, gold);
        CHECK(n_good == 1);
      }
      std::uniform_int_distribution<std::size_t> pick(0, children.size() - 1);
      state = children[pick(rng)].state;
      const bool child_good = task.is_good(state, gold);
      if (!good) CHECK_FALSE(child_good);  // bad states never recover
      good = child_good;
    }
    CHECK(state.covered == static_cast<int>(s.size()));
    if (good) CHECK(state.tiles == gold);
  }
}

TEST_CASE("span features: single-word chunk sequence equals its only position") {
  ChunkFixture fx;
  const Sentence s = make_sentence({"The", "cat", "sat"}, {"DT", "NN", "VBD"},
                                   {{0, 2, "NP"}, {2, 3, "VP"}});
  ChunkTask task(&s, &fx.ctx);

  const auto v = task.span_features({2, 3, "VP"}, "NP");
  const auto names = names_of(v, fx.indexer);

  const auto has = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  CHECK(has("len=1|VP"));
  CHECK(has("lenb=1|VP"));
  CHECK(has("tr=NP|VP"));
  CHECK(has("@0|w=sat|VP"));
  CHECK(has("<|w=cat|VP"));
  CHECK(has(">|</s>|VP"));
  // One-word chunk: the whole-sequence value is the position-0 value, and the
  // only n-grams are the ones touching the boundary pads.
  CHECK(has("sq|w=sat|VP"));
  CHECK(has("g2|w=<s>_sat|VP"));
  CHECK(has("g2|w=sat_</s>|VP"));
  CHECK(has("g3|w=<s>_sat_</s>|VP"));
  int g2w = 0, g3w = 0;
  for (const auto& n : names) {
    if (n.rfind("g2|w=", 0) == 0) ++g2w;
    if (n.rfind("g3|w=", 0) == 0) ++g3w;
  }
  CHECK(g2w == 2);
  CHECK(g3w == 1);
}

TEST_CASE("span features: sentence-initial span sees the start pad") {
  ChunkFixture fx;
  const Sentence s = make_sentence({"The", "cat"}, {"DT", "NN"},
                                   {{0, 2, "NP"}});
  ChunkTask task(&s, &fx.ctx);
  const auto names = names_of(task.span_features({0, 2, "NP"}, "<s>"),
                              fx.indexer);
  const auto has = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  CHECK(has("<|<s>|NP"));
  CHECK(has(">|</s>|NP"));
  CHECK(has("tr=<s>|NP"));
  CHECK(has("sq|w=The_cat|NP"));
  CHECK(has("g2|w=The_cat|NP"));
  CHECK(has("g3|w=<s>_The_cat|NP"));
  CHECK(has("@1|lw=cat|NP"));
}

TEST_CASE("span features: count is affine in span length") {
  ChunkFixture fx;
  fx.ctx.cfg.max_chunk_length = 8;
  // All template values distinct per position so no names merge.
  const Sentence s = make_sentence(
      {"Apple", "BANAN", "cherr", "Date9", "elde3", "FIG77", "grapX", "hXiJ8"},
      {"AA", "BB", "CC", "DD", "EE", "FF", "GG", "HH"}, {});
  ChunkTask task(&s, &fx.ctx);

  std::vector<std::size_t> counts;
  for (int n = 1; n <= 6; ++n) {
    counts.push_back(task.span_features({1, 1 + n, "NP"}, "O").size());
  }
  for (std::size_t i = 0; i + 2 < counts.size(); ++i) {
    CHECK(counts[i + 2] - counts[i + 1] == counts[i + 1] - counts[i]);
  }
  CHECK(counts[1] > counts[0]);
}

TEST_CASE("span features: local to the span and one token of context") {
  ChunkFixture fx;
  const std::vector<std::string> pos(8, "T");
  const Sentence a = make_sentence(
      {"far0", "far1", "ctx2", "in3", "in4", "ctx5", "far6", "far7"}, pos, {});
  // Same sentence with the far-away tokens swapped.
  const Sentence b = make_sentence(
      {"far7", "far6", "ctx2", "in3", "in4", "ctx5", "far1", "far0"}, pos, {});
  ChunkTask ta(&a, &fx.ctx);
  ChunkTask tb(&b, &fx.ctx);

  const auto va = ta.span_features({3, 5, "NP"}, "O");
  const auto vb = tb.span_features({3, 5, "NP"}, "O");
  CHECK(va == vb);
  CHECK(!va.empty());

  // Touching the context window does change the vector.
  const Sentence c = make_sentence(
      {"far0", "far1", "CHANGED", "in3", "in4", "ctx5", "far6", "far7"}, pos, {});
  ChunkTask tc(&c, &fx.ctx);
  CHECK(ta.span_features({3, 5, "NP"}, "O") !=
        tc.span_features({3, 5, "NP"}, "O"));
}

TEST_CASE("span features: determinism across calls") {
  ChunkFixture fx;
  const Sentence s = make_sentence({"One", "two", "3"}, {"A", "B", "C"}, {});
  ChunkTask task(&s, &fx.ctx);
  const auto v1 = task.span_features({0, 2, "NP"}, "<s>");
  const auto v2 = task.span_features({0, 2, "NP"}, "<s>");
  CHECK(v1 == v2);
}

TEST_CASE("bio legality") {
  CHECK(JointTask::bio_legal("O", "O"));
  CHECK(JointTask::bio_legal("O", "B-NP"));
  CHECK_FALSE(JointTask::bio_legal("O", "I-NP"));
  CHECK_FALSE(JointTask::bio_legal("O", "I-VP"));
  CHECK(JointTask::bio_legal("B-NP", "I-NP"));
  CHECK_FALSE(JointTask::bio_legal("B-NP", "I-VP"));
  CHECK(JointTask::bio_legal("I-NP", "I-NP"));
  CHECK_FALSE(JointTask::bio_legal("I-VP", "I-NP"));
  CHECK(JointTask::bio_legal("I-NP", "B-VP"));
  CHECK(JointTask::bio_legal("B-VP", "O"));
}

TEST_CASE("joint expansion: pos cross legal bio") {
  JointFixture fx;  // 2 pos tags, labels {NP, VP}: bio = O, B-NP, B-VP, I-NP, I-VP
  Sentence s = make_sentence({"a", "b"}, {"N", "V"}, {});
  s.bio = {"B-NP", "I-NP"};
  JointTask task(&s, &fx.ctx);

  // Start of sentence acts like after-O: no I-X children.
  const auto at_start = task.expand(task.initial_state());
  CHECK(at_start.size() == 2 * 3);
  for (const auto& c : at_start) {
    CHECK(c.state.assigned.back().bio.substr(0, 2) != "I-");
  }

  // After B-NP, exactly I-NP joins the legal set.
  JointState after{{{"N", "B-NP"}}};
  const auto next = task.expand(after);
  CHECK(next.size() == 2 * 4);
  bool saw_inp = false;
  for (const auto& c : next) {
    const auto& bio = c.state.assigned.back().bio;
    CHECK(bio != "I-VP");
    saw_inp |= (bio == "I-NP");
  }
  CHECK(saw_inp);
}

TEST_CASE("joint gold path: unique good successor, monotone goodness") {
  JointFixture fx({"D", "N", "V"});
  Sentence s = make_sentence({"The", "cat", "sat"}, {"D", "N", "V"}, {});
  s.bio = {"B-NP", "I-NP", "B-VP"};
  JointTask task(&s, &fx.ctx);
  const auto gold = JointTask::gold_labels(s);
  REQUIRE(gold.size() == 3);
  CHECK(gold[0] == JointLabel{"D", "B-NP"});

  CHECK(task.is_good(task.initial_state(), gold));

  std::mt19937 rng(11);
  for (int walk = 0; walk < 200; ++walk) {
    JointState state = task.initial_state();
    bool good = true;
    while (!task.is_goal(state)) {
      const auto children = task.expand(state);
      REQUIRE(!children.empty());
      if (good) {
        int n_good = 0;
        for (const auto& c : children) n_good += task.is_good(c.state, gold);
        CHECK(n_good == 1);
        const auto succ = task.good_successors(state, gold);
        REQUIRE(succ.size() == 1);
        CHECK(task.is_good(succ[0].state, gold));
      }
      std::uniform_int_distribution<std::size_t> pick(0, children.size() - 1);
      state = children[pick(rng)].state;
      const bool child_good = task.is_good(state, gold);
      if (!good) CHECK_FALSE(child_good);
      good = child_good;
    }
    CHECK(state.assigned.size() == s.size());
    if (good) CHECK(state.assigned == gold);
  }
}

TEST_CASE("joint features: bio conjunctions are disjoint across tags") {
  JointFixture fx;
  Sentence s = make_sentence({"run"}, {"V"}, {});
  s.bio = {"O"};
  JointTask task(&s, &fx.ctx);

  const JointLabel prev{"O", "O"};
  const auto v1 = task.step_features(0, {"V", "O"}, prev);
  const auto v2 = task.step_features(0, {"V", "B-NP"}, prev);
  CHECK(v1 != v2);

  // Shared features may only come from the pos-side templates; everything
  // mentioning the bio tag must differ.
  std::set<std::uint32_t> ids2;
  for (const auto& [id, val] : v2.entries()) ids2.insert(id);
  bool any_shared = false;
  for (const auto& [id, val] : v1.entries()) {
    if (!ids2.count(id)) continue;
    any_shared = true;
    const std::string& name = fx.indexer.name_of(id);
    const bool pos_side = name.find("|p=") != std::string::npos ||
                          name.rfind("jp=", 0) == 0 ||
                          name.rfind("jtp=", 0) == 0;
    CHECK(pos_side);
  }
  CHECK(any_shared);  // the pos conjunctions really are shared
}

TEST_CASE("joint features: digit shapes fire and caching is transparent") {
  JointFixture fx;
  Sentence s = make_sentence({"93"}, {"N"}, {});
  s.bio = {"O"};
  JointTask task(&s, &fx.ctx);

  const JointLabel prev{"O", "O"};
  const auto v1 = task.step_features(0, {"N", "O"}, prev);
  const auto names = names_of(v1, fx.indexer);
  const auto has = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  CHECK(has("j|sh=all-digits|p=N"));
  CHECK(has("j|sh=two-digits|b=O"));
  CHECK(has("j|w=93|pb=N_O"));
  CHECK(has("jp=N"));
  CHECK(has("jb=O"));
  CHECK(has("jpb=N_O"));
  CHECK(has("jtp=O_N"));
  CHECK(has("jtb=O_O"));

  // Second call reads the (position, pos, bio) cache; must be identical.
  const auto v2 = task.step_features(0, {"N", "O"}, prev);
  CHECK(v1 == v2);

  // A different previous label changes only the transition features.
  const auto v3 = task.step_features(0, {"N", "O"}, {"V", "B-NP"});
  CHECK(v3 != v1);
  std::size_t diff = 0;
  for (const auto& [id, val] : v3.entries()) {
    if (v1.value_at(id) == 0.0) ++diff;
  }
  CHECK(diff == 2);
}

TEST_CASE("joint features: frozen indexer drops unseen names") {
  JointFixture fx;
  Sentence s = make_sentence({"cat", "dog"}, {"N", "N"}, {});
  s.bio = {"O", "O"};
  {
    JointTask task(&s, &fx.ctx);
    (void)task.expand(task.initial_state());
  }
  fx.indexer.freeze();
  const auto before = fx.indexer.size();

  Sentence t = make_sentence({"zebra"}, {"N"}, {});
  t.bio = {"O"};
  JointTask task(&t, &fx.ctx);
  const auto children = task.expand(task.initial_state());
  CHECK(fx.indexer.size() == before);
  // Unseen word conjunctions vanish; the label-only features survive.
  for (const auto& c : children) {
    for (const auto& [id, val] : c.delta.entries()) {
      CHECK(id < before);
    }
  }
}
