#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace faultkb {

struct RawUtterance {
  std::size_t id = 0;  // line number in the source corpus
  std::string text;
};

// Token replacement tables plus the car-option lexicon. Keys are lowercase,
// no key maps to itself, and car-option terms never collide with
// abbreviation keys (validated on load).
struct NormalizationDict {
  std::unordered_map<std::string, std::string> abbreviations;
  std::unordered_map<std::string, std::string> prefix_expansions;
  std::unordered_set<std::string> car_option_lexicon;

  void validate() const;  // throws FormatError on a broken invariant
};

struct NormalizedUtterance {
  std::size_t id = 0;
  std::vector<std::string> tokens;       // lowercase, whitespace-free
  std::set<std::size_t> car_option_positions;
};

// Collapses runs of single characters separated by '.' or '/' ("a/c",
// "a.c", "a.c." -> "ac"). Expects lowercase input; everything else is
// copied through untouched.
std::string soft_normalize(const std::string& text);

// Whitespace split with punctuation stripped from token edges; internal
// hyphens (and any other interior punctuation) survive. Tokens that are all
// punctuation disappear.
std::vector<std::string> tokenize(const std::string& text);

std::vector<std::string> expand_prefix_abbreviations(
    std::vector<std::string> tokens, const NormalizationDict& dict);

std::vector<std::string> apply_abbreviation_dict(
    std::vector<std::string> tokens, const NormalizationDict& dict);

std::set<std::size_t> mark_car_options(const std::vector<std::string>& tokens,
                                       const NormalizationDict& dict);

// lowercase -> soft_normalize -> tokenize -> prefix expansion ->
// abbreviation dictionary -> car-option marking. Throws EmptyUtterance when
// the text is whitespace-only.
NormalizedUtterance normalize_utterance(const RawUtterance& raw,
                                        const NormalizationDict& dict);

std::string lowercase(std::string s);

// One utterance per line; the 1-based line number is the id. Blank lines
// are not admitted to the pipeline and are skipped.
std::vector<RawUtterance> load_corpus(const std::string& path);

// Lines of `kind<TAB>key<TAB>value`, kind in {abbr, prefix, caropt}; the
// value column is empty (or absent) for caropt. '#' starts a comment.
NormalizationDict load_normalization_dict(const std::string& path);

}  // namespace faultkb
