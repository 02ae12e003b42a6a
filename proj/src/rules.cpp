#include "faultkb/rules.hpp"

#include <algorithm>
#include <set>

#include "faultkb/errors.hpp"
#include "faultkb/io_util.hpp"

namespace faultkb {

namespace {

struct TranslatedPattern {
  std::string regex_text;                       // named groups rewritten to plain ones
  std::vector<std::pair<std::string, int>> names;  // capture name -> group index
};

// std::regex has no named captures, so `(?<name>...)` is rewritten to a
// plain group while tracking the index every capturing group will get.
TranslatedPattern translate_named_groups(const std::string& pattern) {
  TranslatedPattern out;
  int group_index = 0;
  bool in_class = false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const char c = pattern[i];
    if (c == '\\' && i + 1 < pattern.size()) {
      out.regex_text += c;
      out.regex_text += pattern[i + 1];
      ++i;
      continue;
    }
    if (in_class) {
      out.regex_text += c;
      if (c == ']') in_class = false;
      continue;
    }
    if (c == '[') {
      in_class = true;
      out.regex_text += c;
      continue;
    }
    if (c != '(') {
      out.regex_text += c;
      continue;
    }
    if (i + 1 < pattern.size() && pattern[i + 1] == '?') {
      if (i + 2 < pattern.size() && pattern[i + 2] == '<' &&
          i + 3 < pattern.size() && pattern[i + 3] != '=' && pattern[i + 3] != '!') {
        const std::size_t close = pattern.find('>', i + 3);
        if (close == std::string::npos)
          throw RuleCompileError("unterminated capture name in pattern: " + pattern);
        const std::string name = pattern.substr(i + 3, close - i - 3);
        if (name.empty())
          throw RuleCompileError("empty capture name in pattern: " + pattern);
        out.names.emplace_back(name, ++group_index);
        out.regex_text += '(';
        i = close;
        continue;
      }
      // (?: (?= (?! stay as written and capture nothing.
      out.regex_text += c;
      continue;
    }
    ++group_index;  // anonymous capturing group
    out.regex_text += c;
  }
  return out;
}

}  // namespace

std::vector<SyntacticRule> compile_rules(const std::vector<RuleDef>& defs) {
  std::vector<SyntacticRule> rules;
  rules.reserve(defs.size());
  for (const RuleDef& def : defs) {
    if (def.role_map.empty())
      throw RuleCompileError("rule '" + def.name + "' maps no captures");
    TranslatedPattern tp = translate_named_groups(def.pattern);

    std::set<std::string> pattern_names;
    for (const auto& [name, idx] : tp.names) {
      if (!pattern_names.insert(name).second)
        throw RuleCompileError("rule '" + def.name + "' repeats capture '" + name + "'");
    }

    SyntacticRule rule;
    rule.name = def.name;
    rule.pattern = def.pattern;
    std::set<std::string> mapped_names;
    for (const auto& [name, role] : def.role_map) {
      if (!mapped_names.insert(name).second)
        throw RuleCompileError("rule '" + def.name + "' maps capture '" + name + "' twice");
      auto it = std::find_if(tp.names.begin(), tp.names.end(),
                             [&](const auto& p) { return p.first == name; });
      if (it == tp.names.end())
        throw RuleCompileError("rule '" + def.name + "' maps capture '" + name +
                               "' absent from the pattern");
      rule.captures.emplace_back(it->second, role);
    }
    for (const auto& [name, idx] : tp.names) {
      if (!mapped_names.count(name))
        throw RuleCompileError("rule '" + def.name + "' capture '" + name +
                               "' has no role mapping");
    }
    try {
      rule.compiled.assign(tp.regex_text, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw RuleCompileError("rule '" + def.name + "': " + e.what());
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<RuleDef> default_rule_defs() {
  // Table order is match precedence.
  return {
      {"verb_component",
       R"(VB (?<comp>(NN\S*\s?)+))",
       {{"comp", Role::component}}},
      {"problem_component",
       R"((?<prob>JJ) (?<comp>(NN\S*\s?)+))",
       {{"prob", Role::problem}, {"comp", Role::component}}},
      {"component_is_problem",
       R"((?<comp>(NN\S*\s?)+) VBZ (?<prob>JJ))",
       {{"comp", Role::component}, {"prob", Role::problem}}},
      {"component_broke",
       R"((?<comp>(NN\S*\s?)+) (?<prob>VBD))",
       {{"comp", Role::component}, {"prob", Role::problem}}},
      {"component_leaking_noun",
       R"((?<comp>(NN\S*\s?)+) (?<prob>VBG (NN\S*\s?)+))",
       {{"comp", Role::component}, {"prob", Role::problem}}},
      {"component_is_leaking",
       R"((?<comp>(NN\S*\s?)+) VBZ (?<prob>VBG))",
       {{"comp", Role::component}, {"prob", Role::problem}}},
  };
}

std::vector<RuleDef> load_rule_defs(const std::string& path) {
  std::vector<RuleDef> defs;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    const auto cols = split(lines[i], '\t');
    if (cols.size() != 3)
      throw FormatError(path, i + 1, "expected name<TAB>pattern<TAB>captures");
    RuleDef def;
    def.name = cols[0];
    def.pattern = cols[1];
    for (const std::string& part : split(cols[2], ',')) {
      const auto kv = split(part, ':');
      if (kv.size() != 2 || kv[0].empty())
        throw FormatError(path, i + 1, "expected capture:role in '" + part + "'");
      try {
        def.role_map.emplace_back(kv[0], parse_role(kv[1]));
      } catch (const FormatError& e) {
        throw FormatError(path, i + 1, e.what());
      }
    }
    defs.push_back(std::move(def));
  }
  return defs;
}

namespace {

// Character offset of each tag in the signature, for capture -> token span
// translation.
std::vector<std::size_t> token_starts(const TaggedUtterance& u) {
  std::vector<std::size_t> starts;
  std::size_t pos = 0;
  for (const auto& tag : u.pos) {
    starts.push_back(pos);
    pos += tag.value.size() + 1;
  }
  return starts;
}

TokenSpan chars_to_token_span(const TaggedUtterance& u,
                              const std::vector<std::size_t>& starts,
                              std::size_t char_begin, std::size_t char_len,
                              const std::string& rule_name) {
  const std::size_t char_end = char_begin + char_len;
  TokenSpan span;
  bool begin_ok = false;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (starts[i] == char_begin) {
      span.begin = i;
      begin_ok = true;
      break;
    }
  }
  bool end_ok = false;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::size_t tag_end = starts[i] + u.pos[i].value.size();
    if (tag_end == char_end || tag_end + 1 == char_end) {
      span.end = i + 1;
      end_ok = true;
      break;
    }
  }
  if (!begin_ok || !end_ok || span.end <= span.begin)
    throw InvariantViolation("rule '" + rule_name +
                             "': capture does not align with token boundaries");
  return span;
}

}  // namespace

std::optional<RuleMatch> match_rule(const TaggedUtterance& u,
                                    const std::vector<SyntacticRule>& rules) {
  if (u.pos.empty()) return std::nullopt;
  const std::string sig = pos_signature(u);
  const auto starts = token_starts(u);
  for (const SyntacticRule& rule : rules) {
    std::smatch m;
    if (!std::regex_match(sig, m, rule.compiled)) continue;
    RuleMatch match;
    match.rule_name = rule.name;
    for (const auto& [idx, role] : rule.captures) {
      if (idx >= static_cast<int>(m.size()) || !m[idx].matched) continue;
      if (m[idx].length() == 0) continue;
      const auto span = chars_to_token_span(
          u, starts, static_cast<std::size_t>(m.position(idx)),
          static_cast<std::size_t>(m.length(idx)), rule.name);
      match.spans.push_back(RoleSpan{role, span});
    }
    if (!match.spans.empty()) return match;
  }
  return std::nullopt;
}

std::vector<std::string> strip_leading_function_words(
    const std::vector<std::string>& span_tokens, const std::vector<PosTag>& pos) {
  if (span_tokens.size() != pos.size())
    throw InvariantViolation("strip_leading_function_words: arity mismatch");
  std::size_t b = 0;
  while (b < pos.size() && (pos[b].value == "DT" || pos[b].value == "PRP$")) ++b;
  if (b == span_tokens.size()) throw EmptyChunk();
  return {span_tokens.begin() + static_cast<std::ptrdiff_t>(b), span_tokens.end()};
}

std::optional<TokenSpan> refine_chunk(const TaggedUtterance& u, TokenSpan span) {
  std::size_t b = span.begin;
  while (b < span.end) {
    const bool function_word = u.pos[b].value == "DT" || u.pos[b].value == "PRP$";
    const bool car_option = u.car_option_positions.count(b) > 0;
    if (!function_word && !car_option) break;
    ++b;
  }
  if (b == span.end) return std::nullopt;
  return TokenSpan{b, span.end};
}

std::string surface_of(const TaggedUtterance& u, TokenSpan span) {
  std::string s;
  for (std::size_t i = span.begin; i < span.end; ++i) {
    if (i > span.begin) s += ' ';
    s += u.tokens[i];
  }
  return s;
}

ExtractionResult extract_candidates(const std::vector<TaggedUtterance>& corpus,
                                    const std::vector<SyntacticRule>& rules) {
  ExtractionResult result;
  std::map<std::pair<std::string, std::string>, CandidateEntity> agg;
  for (const TaggedUtterance& u : corpus) {
    auto match = match_rule(u, rules);
    if (!match) continue;
    RuleMatch refined;
    refined.rule_name = match->rule_name;
    bool degenerate = false;
    for (const RoleSpan& rs : match->spans) {
      auto span = refine_chunk(u, rs.span);
      if (!span) {
        degenerate = true;
        break;
      }
      refined.spans.push_back(RoleSpan{rs.role, *span});
    }
    if (degenerate || refined.spans.empty()) continue;
    for (const RoleSpan& rs : refined.spans) {
      const std::string surface = surface_of(u, rs.span);
      auto key = std::make_pair(role_name(rs.role), surface);
      auto [it, inserted] = agg.try_emplace(key);
      if (inserted) {
        it->second.surface = surface;
        it->second.role = rs.role;
      }
      it->second.provenance.push_back(Provenance{u.id, rs.span});
      it->second.frequency = it->second.provenance.size();
    }
    result.matches.emplace(u.id, std::move(refined));
  }
  result.candidates.reserve(agg.size());
  for (auto& [key, cand] : agg) result.candidates.push_back(std::move(cand));
  return result;
}

void write_candidates(const std::string& path,
                      const std::vector<CandidateEntity>& candidates) {
  std::string out;
  for (const auto& c : candidates) {
    out += role_name(c.role);
    out += '\t';
    out += c.surface;
    out += '\t';
    out += std::to_string(c.frequency);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<CandidateEntity> load_candidates(const std::string& path) {
  std::vector<CandidateEntity> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cols = split(lines[i], '\t');
    if (cols.size() != 3 || cols[1].empty())
      throw FormatError(path, i + 1, "expected role<TAB>surface<TAB>frequency");
    CandidateEntity c;
    try {
      c.role = parse_role(cols[0]);
      c.frequency = std::stoul(cols[2]);
    } catch (const std::exception&) {
      throw FormatError(path, i + 1, "bad role or frequency");
    }
    c.surface = cols[1];
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace faultkb
