#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "laso/sentence.hpp"

namespace laso {

// Converts a well-formed BIO tag sequence to labeled spans.
std::vector<ChunkSpan> spans_from_bio(const std::vector<std::string>& tags);

// Inverse of spans_from_bio: uncovered positions come out O.
std::vector<std::string> bio_from_spans(const std::vector<ChunkSpan>& spans,
                                        std::size_t length);

// Promotes ill-formed continuations (I-X at the start, after O, or after a
// different chunk type) to B-X in place. Returns the number of edits.
int repair_bio(std::vector<std::string>& tags);

struct ConllData {
  std::vector<Sentence> sentences;
  int repaired = 0;  // BIO tags promoted to B- during reading
};

// Reads blank-line-separated sentences of "token pos bio" rows. Throws
// DataError with the line number on malformed rows; ill-formed BIO is
// repaired and counted.
ConllData read_conll(std::istream& in, const std::string& source_name);
ConllData read_conll_file(const std::string& path);

// Writes the 3-column format read_conll accepts, one blank line after every
// sentence.
void write_conll(std::ostream& out, const std::vector<Sentence>& sentences);

struct CorpusSplit {
  std::vector<Sentence> train;
  std::vector<Sentence> heldout;
};

// Splits off the final fraction of sentences in corpus order; with a seed,
// shuffles first so the held-out set is a random sample.
CorpusSplit split_heldout(std::vector<Sentence> sentences, double fraction,
                          std::optional<std::uint64_t> shuffle_seed = {});

}  // namespace laso
