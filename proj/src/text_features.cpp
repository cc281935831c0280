#include "laso/text_features.hpp"

#include <cctype>
#include <fstream>
#include <ostream>

namespace laso {

namespace {
bool is_upper(unsigned char c) { return std::isupper(c) != 0; }
bool is_lower(unsigned char c) { return std::islower(c) != 0; }
bool is_digit(unsigned char c) { return std::isdigit(c) != 0; }
bool is_alpha(unsigned char c) { return std::isalpha(c) != 0; }

char shape_of(unsigned char c) {
  if (is_upper(c)) return 'X';
  if (is_lower(c)) return 'x';
  if (is_digit(c)) return 'd';
  return 'o';
}
}  // namespace

std::string lowercase(const std::string& token) {
  std::string out = token;
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string case_pattern(const std::string& token) {
  std::string out;
  char prev = 0;
  for (unsigned char c : token) {
    const char s = shape_of(c);
    if (s != prev) {
      out.push_back(s);
      prev = s;
    }
  }
  return out;
}

std::string stem(const std::string& token) {
  std::string w = lowercase(token);
  const auto ends = [&](const char* suffix) {
    const std::size_t n = std::char_traits<char>::length(suffix);
    return w.size() >= n && w.compare(w.size() - n, n, suffix) == 0;
  };
  if (w.size() > 4 && ends("ies")) {
    w.replace(w.size() - 3, 3, "y");
  } else if (w.size() > 4 && ends("sses")) {
    w.erase(w.size() - 2);
  } else if (w.size() > 3 && ends("s") && !ends("ss")) {
    w.pop_back();
  }
  if (w.size() > 5 && ends("ing")) {
    w.erase(w.size() - 3);
  } else if (w.size() > 4 && ends("ed")) {
    w.erase(w.size() - 2);
  }
  return w;
}

std::vector<std::string> shape_classes(const std::string& token) {
  if (token.empty()) return {};
  bool any_upper = false, any_lower = false, any_digit = false, any_alpha = false;
  bool any_hyphen = false, any_other = false, any_dot = false;
  for (unsigned char c : token) {
    any_upper |= is_upper(c);
    any_lower |= is_lower(c);
    any_digit |= is_digit(c);
    any_alpha |= is_alpha(c);
    any_hyphen |= (c == '-');
    any_dot |= (c == '.');
    any_other |= !is_alpha(c) && !is_digit(c) && c != '-' && c != '.';
  }
  const bool all_digits = any_digit && !any_alpha && !any_hyphen && !any_other && !any_dot;
  const bool all_alpha = any_alpha && !any_digit && !any_hyphen && !any_other && !any_dot;

  std::vector<std::string> out;
  if (is_upper(static_cast<unsigned char>(token.front())) && any_lower) {
    out.push_back("init-cap");
  }
  if (all_alpha && any_upper && !any_lower) out.push_back("all-caps");
  if (all_alpha && !any_upper) out.push_back("all-lower");
  if (all_digits) out.push_back("all-digits");
  if (all_digits && token.size() == 2) out.push_back("two-digits");
  if (all_digits && token.size() == 4) out.push_back("four-digits");
  if (any_digit) out.push_back("has-digit");
  if (any_digit && (any_dot || token.find(',') != std::string::npos)) {
    out.push_back("number-sep");
  }
  if (any_digit && any_alpha) out.push_back("alnum-mix");
  if (any_hyphen) out.push_back("has-hyphen");
  if (any_alpha && any_dot) out.push_back("has-dot");
  if (!any_alpha && !any_digit) out.push_back("punct-only");
  if (token.size() == 1) out.push_back("single-char");
  return out;
}

GazetteerSet GazetteerSet::load(
    const std::vector<std::pair<std::string, std::string>>& specs,
    std::ostream* log) {
  GazetteerSet set;
  for (const auto& [name, path] : specs) {
    std::ifstream in(path);
    if (!in) {
      if (log) {
        *log << "gazetteer '" << name << "': cannot read " << path
             << "; its features are disabled\n";
      }
      continue;
    }
    std::unordered_set<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.pop_back();
      }
      if (!line.empty()) terms.insert(lowercase(line));
    }
    set.add(name, std::move(terms));
  }
  return set;
}

void GazetteerSet::add(std::string name, std::unordered_set<std::string> terms) {
  lists_.emplace_back(std::move(name), std::move(terms));
}

std::vector<std::string> GazetteerSet::names() const {
  std::vector<std::string> out;
  out.reserve(lists_.size());
  for (const auto& [name, terms] : lists_) out.push_back(name);
  return out;
}

std::vector<std::string> GazetteerSet::memberships(
    const std::string& lowercased) const {
  std::vector<std::string> out;
  for (const auto& [name, terms] : lists_) {
    if (terms.count(lowercased)) out.push_back(name);
  }
  return out;
}

std::vector<std::string> base_features(const std::string& token,
                                       const std::string* pos_tag,
                                       const FeatureTemplateConfig& cfg,
                                       const GazetteerSet& gazetteers,
                                       bool include_shapes) {
  std::vector<std::string> out;
  const std::string lw = lowercase(token);
  if (cfg.word) out.push_back("w=" + token);
  if (cfg.lower) out.push_back("lw=" + lw);
  if (cfg.stem) {
    const std::string st = stem(token);
    out.push_back("st=" + st);
    out.push_back("wst=" + token + "+" + st);
  }
  if (cfg.case_pattern) out.push_back("cp=" + case_pattern(token));
  if (cfg.affixes) {
    for (std::size_t n = 1; n <= 3 && n <= token.size(); ++n) {
      out.push_back("pre" + std::to_string(n) + "=" + token.substr(0, n));
      out.push_back("suf" + std::to_string(n) + "=" +
                    token.substr(token.size() - n));
    }
  }
  if (cfg.pos && pos_tag) {
    out.push_back("pos=" + *pos_tag);
    if (!pos_tag->empty()) out.push_back("pos1=" + pos_tag->substr(0, 1));
  }
  if (cfg.gazetteers) {
    for (const auto& name : gazetteers.memberships(lw)) {
      out.push_back("gaz:" + name);
    }
  }
  if (include_shapes && cfg.shapes) {
    for (const auto& cls : shape_classes(token)) out.push_back("sh=" + cls);
  }
  return out;
}

}  // namespace laso
