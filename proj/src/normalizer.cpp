#include "faultkb/normalizer.hpp"

#include <cctype>

#include "faultkb/errors.hpp"
#include "faultkb/io_util.hpp"

namespace faultkb {

namespace {

inline bool is_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

inline bool is_soft_punct(char c) { return c == '.' || c == '/'; }

inline bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string soft_normalize(const std::string& text) {
  const std::size_t n = text.size();
  std::string out;
  out.reserve(n);
  std::size_t i = 0;
  while (i < n) {
    const bool single_start = is_alnum(text[i]) && (i == 0 || !is_alnum(text[i - 1])) &&
                              i + 1 < n && is_soft_punct(text[i + 1]);
    if (single_start) {
      // Greedily collect X(.X)+ where every X is one alnum character.
      std::string chars(1, text[i]);
      std::size_t k = i + 1;
      while (k + 1 < n && is_soft_punct(text[k]) && is_alnum(text[k + 1]) &&
             (k + 2 >= n || !is_alnum(text[k + 2]))) {
        chars.push_back(text[k + 1]);
        k += 2;
      }
      if (chars.size() >= 2) {
        // "a.c." keeps a trailing separator; drop it with the others.
        if (k < n && is_soft_punct(text[k]) && (k + 1 >= n || !is_alnum(text[k + 1]))) {
          ++k;
        }
        out += chars;
        i = k;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  for (std::string tok : split_ws(text)) {
    std::size_t b = 0;
    std::size_t e = tok.size();
    while (b < e && is_punct(tok[b])) ++b;
    while (e > b && is_punct(tok[e - 1])) --e;
    if (e > b) tokens.push_back(tok.substr(b, e - b));
  }
  return tokens;
}

std::vector<std::string> expand_prefix_abbreviations(
    std::vector<std::string> tokens, const NormalizationDict& dict) {
  for (std::string& t : tokens) {
    auto it = dict.prefix_expansions.find(t);
    if (it != dict.prefix_expansions.end()) t = it->second;
  }
  return tokens;
}

std::vector<std::string> apply_abbreviation_dict(
    std::vector<std::string> tokens, const NormalizationDict& dict) {
  for (std::string& t : tokens) {
    auto it = dict.abbreviations.find(t);
    if (it != dict.abbreviations.end()) t = it->second;
  }
  return tokens;
}

std::set<std::size_t> mark_car_options(const std::vector<std::string>& tokens,
                                       const NormalizationDict& dict) {
  std::set<std::size_t> positions;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (dict.car_option_lexicon.count(tokens[i])) positions.insert(i);
  }
  return positions;
}

NormalizedUtterance normalize_utterance(const RawUtterance& raw,
                                        const NormalizationDict& dict) {
  if (trim(raw.text).empty()) throw EmptyUtterance();
  NormalizedUtterance u;
  u.id = raw.id;
  u.tokens = tokenize(soft_normalize(lowercase(raw.text)));
  if (u.tokens.empty()) throw EmptyUtterance();
  u.tokens = expand_prefix_abbreviations(std::move(u.tokens), dict);
  u.tokens = apply_abbreviation_dict(std::move(u.tokens), dict);
  u.car_option_positions = mark_car_options(u.tokens, dict);
  return u;
}

std::vector<RawUtterance> load_corpus(const std::string& path) {
  std::vector<RawUtterance> corpus;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    corpus.push_back(RawUtterance{i + 1, lines[i]});
  }
  return corpus;
}

namespace {

void check_dict_token(const std::string& path, std::size_t line,
                      const std::string& s) {
  if (s.empty()) throw FormatError(path, line, "empty dictionary token");
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)))
      throw FormatError(path, line, "dictionary token contains whitespace");
    if (std::isupper(static_cast<unsigned char>(c)))
      throw FormatError(path, line, "dictionary token must be lowercase");
  }
}

}  // namespace

NormalizationDict load_normalization_dict(const std::string& path) {
  NormalizationDict dict;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    const auto cols = split(lines[i], '\t');
    const std::size_t lineno = i + 1;
    if (cols.size() < 2) throw FormatError(path, lineno, "expected kind<TAB>key[<TAB>value]");
    const std::string& kind = cols[0];
    const std::string& key = cols[1];
    check_dict_token(path, lineno, key);
    if (kind == "caropt") {
      if (cols.size() > 2 && !cols[2].empty())
        throw FormatError(path, lineno, "caropt entries take no value");
      dict.car_option_lexicon.insert(key);
    } else if (kind == "abbr" || kind == "prefix") {
      if (cols.size() != 3) throw FormatError(path, lineno, "expected kind<TAB>key<TAB>value");
      check_dict_token(path, lineno, cols[2]);
      if (key == cols[2]) throw FormatError(path, lineno, "key maps to itself");
      auto& table = (kind == "abbr") ? dict.abbreviations : dict.prefix_expansions;
      table[key] = cols[2];
    } else {
      throw FormatError(path, lineno, "unknown kind '" + kind + "'");
    }
  }
  dict.validate();
  return dict;
}

void NormalizationDict::validate() const {
  for (const auto& [k, v] : abbreviations) {
    if (k == v) throw FormatError("abbreviation key '" + k + "' maps to itself");
    if (car_option_lexicon.count(k))
      throw FormatError("car-option term '" + k + "' collides with an abbreviation key");
  }
  for (const auto& [k, v] : prefix_expansions) {
    if (k == v) throw FormatError("prefix key '" + k + "' maps to itself");
  }
}

}  // namespace faultkb
