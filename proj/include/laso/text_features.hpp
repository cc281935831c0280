#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace laso {

// Token-level transforms.

std::string lowercase(const std::string& token);

// Run-length-compressed shape over the alphabet X (upper), x (lower),
// d (digit), o (other): "Great" -> "Xx", "W.R." -> "XoXo", "1,000" -> "dod".
std::string case_pattern(const std::string& token);

// Deterministic suffix stripper over the lowercased token. Rules, applied in
// order with at most one plural and one verbal rule firing:
//   ...ies -> ...y  (len > 4)     ...sses -> ...ss
//   ...s   -> ...   (len > 3, not ...ss)
//   ...ing -> ...   (len > 5)     ...ed  -> ... (len > 4)
std::string stem(const std::string& token);

// Token shape classes for the joint task (digits, capitalization,
// hyphenation and punctuation patterns). Returns the names of all matching
// classes; the full list is documented in the README.
std::vector<std::string> shape_classes(const std::string& token);

// Named word lists; membership features fire on the lowercased token.
class GazetteerSet {
 public:
  // specs are (name, path) pairs; unreadable files are skipped with a note
  // to `log` so absent lists degrade to disabled features.
  static GazetteerSet load(
      const std::vector<std::pair<std::string, std::string>>& specs,
      std::ostream* log = nullptr);

  void add(std::string name, std::unordered_set<std::string> terms);

  // Names of every list containing the (already lowercased) token.
  std::vector<std::string> memberships(const std::string& lowercased) const;

  bool empty() const { return lists_.empty(); }
  std::size_t list_count() const { return lists_.size(); }
  std::vector<std::string> names() const;

 private:
  std::vector<std::pair<std::string, std::unordered_set<std::string>>> lists_;
};

// Which templates are active and the chunking branching cap.
struct FeatureTemplateConfig {
  bool word = true;
  bool lower = true;
  bool stem = true;  // stem and the word+stem conjunction
  bool case_pattern = true;
  bool affixes = true;    // first and last 1..3 characters
  bool pos = true;        // pos and its first character (chunking input only)
  bool chunk_length = true;
  bool chunk_length_bucket = true;
  bool gazetteers = true;
  bool shapes = true;  // token shape classes (joint task)
  int max_chunk_length = 15;
};

// Base features of one token as namespaced "template=value" strings.
// pos_tag may be null (joint task: the part of speech is an output, not an
// input, so base features are word-level only). include_shapes adds the
// shape classes used by the joint task.
std::vector<std::string> base_features(const std::string& token,
                                       const std::string* pos_tag,
                                       const FeatureTemplateConfig& cfg,
                                       const GazetteerSet& gazetteers,
                                       bool include_shapes);

}  // namespace laso
