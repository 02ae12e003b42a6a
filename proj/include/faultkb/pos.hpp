#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "faultkb/iob.hpp"
#include "faultkb/normalizer.hpp"

namespace faultkb {

// Penn Treebank word-level tag, kept as a validated string. Table 2's
// patterns are written against this inventory; anything outside it is
// rejected at ingestion instead of coerced.
struct PosTag {
  std::string value;

  bool operator==(const PosTag&) const = default;
};

bool is_known_pos_tag(const std::string& value);
PosTag parse_pos_tag(const std::string& value);  // throws FormatError
const std::vector<std::string>& pos_tag_inventory();

struct TaggedUtterance {
  std::size_t id = 0;
  std::vector<std::string> tokens;
  std::vector<PosTag> pos;                       // |pos| == |tokens|
  std::set<std::size_t> car_option_positions;
  std::optional<std::vector<IobTag>> gold_tags;  // |gold| == |tokens| when present
};

// Blank-line-separated blocks of `token<TAB>POS[<TAB>IOB]`. The optional
// third column must be present on every line of a block or on none. The
// utterance id is the 1-based line number of the block's first line. When
// gold tags are present, CAR-OPTION golds populate car_option_positions.
std::vector<TaggedUtterance> parse_tagged_corpus(const std::string& path);

using PosLexicon = std::unordered_map<std::string, PosTag>;

// Lines of `token<TAB>POS`, '#' comments allowed.
PosLexicon load_pos_lexicon(const std::string& path);

// Fallback tagger: lexicon hit or `fallback` (NN by default in the CLI).
TaggedUtterance lexicon_pos_tag(const NormalizedUtterance& u,
                                const PosLexicon& lexicon,
                                const PosTag& fallback);

// Space-joined tags; the rule engine matches anchored patterns against it.
std::string pos_signature(const TaggedUtterance& u);

void write_tagged_corpus(const std::string& path,
                         const std::vector<TaggedUtterance>& corpus);

}  // namespace faultkb
