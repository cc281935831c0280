#pragma once

#include <compare>
#include <string>
#include <vector>

namespace laso {

// Labeled token span, end exclusive. label is a chunk type (NP, VP, ...) or
// "O" for an outside tile in the chunking task's state representation.
struct ChunkSpan {
  int start = 0;
  int end = 0;
  std::string label;

  auto operator<=>(const ChunkSpan&) const = default;
  int length() const { return end - start; }
};

// One corpus sentence. pos is an input column for the chunking task and a
// gold output column for the joint task; bio carries the gold chunk tags and
// chunks the equivalent labeled spans (no O entries).
struct Sentence {
  std::vector<std::string> tokens;
  std::vector<std::string> pos;
  std::vector<std::string> bio;
  std::vector<ChunkSpan> chunks;

  std::size_t size() const { return tokens.size(); }
};

}  // namespace laso
