#include "faultkb/pos.hpp"

#include <unordered_set>

#include "faultkb/errors.hpp"
#include "faultkb/io_util.hpp"

namespace faultkb {

const std::vector<std::string>& pos_tag_inventory() {
  // Penn Treebank word-level tags.
  static const std::vector<std::string> tags = {
      "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
      "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
      "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
      "VBZ", "WDT", "WP", "WP$", "WRB"};
  return tags;
}

bool is_known_pos_tag(const std::string& value) {
  static const std::unordered_set<std::string> known(pos_tag_inventory().begin(),
                                                     pos_tag_inventory().end());
  return known.count(value) > 0;
}

PosTag parse_pos_tag(const std::string& value) {
  if (!is_known_pos_tag(value)) throw FormatError("unknown POS tag '" + value + "'");
  return PosTag{value};
}

std::vector<TaggedUtterance> parse_tagged_corpus(const std::string& path) {
  std::vector<TaggedUtterance> corpus;
  const auto lines = read_lines(path);

  TaggedUtterance cur;
  std::vector<IobTag> gold;
  bool in_block = false;
  bool block_has_gold = false;

  auto flush = [&]() {
    if (!in_block) return;
    if (block_has_gold) {
      cur.gold_tags = gold;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] == IobTag::CarOption) cur.car_option_positions.insert(i);
      }
    }
    corpus.push_back(std::move(cur));
    cur = TaggedUtterance{};
    gold.clear();
    in_block = false;
    block_has_gold = false;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (trim(lines[i]).empty()) {
      flush();
      continue;
    }
    const auto cols = split(lines[i], '\t');
    if (cols.size() < 2 || cols.size() > 3)
      throw FormatError(path, lineno, "expected token<TAB>POS[<TAB>IOB]");
    if (cols[0].empty()) throw FormatError(path, lineno, "empty token");
    const bool has_gold = cols.size() == 3;
    if (!in_block) {
      in_block = true;
      block_has_gold = has_gold;
      cur.id = lineno;
    } else if (has_gold != block_has_gold) {
      throw FormatError(path, lineno, "IOB column present on some lines of a block only");
    }
    try {
      cur.pos.push_back(parse_pos_tag(cols[1]));
      if (has_gold) gold.push_back(parse_iob(cols[2]));
    } catch (const FormatError& e) {
      throw FormatError(path, lineno, e.what());
    }
    cur.tokens.push_back(cols[0]);
  }
  flush();
  return corpus;
}

PosLexicon load_pos_lexicon(const std::string& path) {
  PosLexicon lex;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    const auto cols = split(lines[i], '\t');
    if (cols.size() != 2 || cols[0].empty())
      throw FormatError(path, i + 1, "expected token<TAB>POS");
    try {
      lex[cols[0]] = parse_pos_tag(cols[1]);
    } catch (const FormatError& e) {
      throw FormatError(path, i + 1, e.what());
    }
  }
  return lex;
}

TaggedUtterance lexicon_pos_tag(const NormalizedUtterance& u,
                                const PosLexicon& lexicon,
                                const PosTag& fallback) {
  TaggedUtterance tagged;
  tagged.id = u.id;
  tagged.tokens = u.tokens;
  tagged.car_option_positions = u.car_option_positions;
  tagged.pos.reserve(u.tokens.size());
  for (const std::string& tok : u.tokens) {
    auto it = lexicon.find(tok);
    tagged.pos.push_back(it != lexicon.end() ? it->second : fallback);
  }
  return tagged;
}

std::string pos_signature(const TaggedUtterance& u) {
  std::string sig;
  for (std::size_t i = 0; i < u.pos.size(); ++i) {
    if (i > 0) sig += ' ';
    sig += u.pos[i].value;
  }
  return sig;
}

void write_tagged_corpus(const std::string& path,
                         const std::vector<TaggedUtterance>& corpus) {
  std::string out;
  for (const auto& u : corpus) {
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
      out += u.tokens[i];
      out += '\t';
      out += u.pos[i].value;
      if (u.gold_tags) {
        out += '\t';
        out += iob_name((*u.gold_tags)[i]);
      }
      out += '\n';
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace faultkb
