#include "laso/conll.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "laso/errors.hpp"

namespace laso {

namespace {
bool chunk_tag_shape_ok(const std::string& tag) {
  if (tag == "O") return true;
  return tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-';
}
}  // namespace

std::vector<ChunkSpan> spans_from_bio(const std::vector<std::string>& tags) {
  std::vector<ChunkSpan> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& t = tags[i];
    if (t == "O") continue;
    const std::string type = t.substr(2);
    if (t[0] == 'B' || spans.empty() ||
        spans.back().end != static_cast<int>(i) || spans.back().label != type) {
      spans.push_back({static_cast<int>(i), static_cast<int>(i) + 1, type});
    } else {
      spans.back().end = static_cast<int>(i) + 1;
    }
  }
  return spans;
}

std::vector<std::string> bio_from_spans(const std::vector<ChunkSpan>& spans,
                                        std::size_t length) {
  std::vector<std::string> tags(length, "O");
  for (const auto& s : spans) {
    tags[static_cast<std::size_t>(s.start)] = "B-" + s.label;
    for (int i = s.start + 1; i < s.end; ++i) {
      tags[static_cast<std::size_t>(i)] = "I-" + s.label;
    }
  }
  return tags;
}

int repair_bio(std::vector<std::string>& tags) {
  int repaired = 0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    std::string& t = tags[i];
    if (t.rfind("I-", 0) != 0) continue;
    const bool continues =
        i > 0 && tags[i - 1] != "O" && tags[i - 1].substr(2) == t.substr(2);
    if (!continues) {
      t[0] = 'B';
      ++repaired;
    }
  }
  return repaired;
}

ConllData read_conll(std::istream& in, const std::string& source_name) {
  ConllData data;
  Sentence current;
  std::string line;
  long line_no = 0;

  const auto flush = [&]() {
    if (current.tokens.empty()) return;
    data.repaired += repair_bio(current.bio);
    current.chunks = spans_from_bio(current.bio);
    data.sentences.push_back(std::move(current));
    current = {};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    std::istringstream row(line);
    std::string token, pos, bio, extra;
    if (!(row >> token >> pos >> bio) || (row >> extra)) {
      throw DataError(source_name + ":" + std::to_string(line_no) +
                      ": expected 3 columns (token pos chunk), got: " + line);
    }
    if (!chunk_tag_shape_ok(bio)) {
      throw DataError(source_name + ":" + std::to_string(line_no) +
                      ": bad chunk tag '" + bio + "' (want O, B-X or I-X)");
    }
    current.tokens.push_back(std::move(token));
    current.pos.push_back(std::move(pos));
    current.bio.push_back(std::move(bio));
  }
  flush();
  return data;
}

ConllData read_conll_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read corpus file: " + path);
  return read_conll(in, path);
}

void write_conll(std::ostream& out, const std::vector<Sentence>& sentences) {
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << s.tokens[i] << ' ' << s.pos[i] << ' ' << s.bio[i] << '\n';
    }
    out << '\n';
  }
}

CorpusSplit split_heldout(std::vector<Sentence> sentences, double fraction,
                          std::optional<std::uint64_t> shuffle_seed) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw ConfigError("held-out fraction must be in [0, 1)");
  }
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(sentences.begin(), sentences.end(), rng);
  }
  const std::size_t held =
      static_cast<std::size_t>(fraction * static_cast<double>(sentences.size()));
  CorpusSplit split;
  split.heldout.assign(sentences.end() - static_cast<long>(held),
                       sentences.end());
  sentences.resize(sentences.size() - held);
  split.train = std::move(sentences);
  return split;
}

}  // namespace laso
