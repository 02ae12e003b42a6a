#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "faultkb/pos.hpp"

namespace faultkb {

// Token index range, half-open [begin, end).
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const TokenSpan&) const = default;
};

struct RuleDef {
  std::string name;
  // ECMAScript regex over the POS signature, anchored to the whole
  // signature, with named captures `(?<name>...)` marking role chunks.
  std::string pattern;
  std::vector<std::pair<std::string, Role>> role_map;  // capture name -> role
};

struct SyntacticRule {
  std::string name;
  std::string pattern;
  std::regex compiled;
  // Capture-group index (1-based smatch position) and role, in pattern order.
  std::vector<std::pair<int, Role>> captures;
};

struct RoleSpan {
  Role role;
  TokenSpan span;

  bool operator==(const RoleSpan&) const = default;
};

struct RuleMatch {
  std::string rule_name;
  std::vector<RoleSpan> spans;  // capture order, non-overlapping
};

struct Provenance {
  std::size_t utterance_id = 0;
  TokenSpan span;
};

struct CandidateEntity {
  std::string surface;  // space-joined tokens, function words stripped
  Role role = Role::component;
  std::size_t frequency = 0;  // == provenance.size() after aggregation
  std::vector<Provenance> provenance;
};

// Compiles definitions in order; order is match precedence. Throws
// RuleCompileError on a malformed pattern, a capture missing from the role
// map, or a role-map entry missing from the pattern.
std::vector<SyntacticRule> compile_rules(const std::vector<RuleDef>& defs);

// The six Table 2 patterns, in table order.
std::vector<RuleDef> default_rule_defs();

// Lines of `name<TAB>pattern<TAB>capture:role[,capture:role...]`.
std::vector<RuleDef> load_rule_defs(const std::string& path);

// First rule whose pattern matches the entire POS signature wins; captures
// are translated back to token spans. nullopt when nothing matches.
std::optional<RuleMatch> match_rule(const TaggedUtterance& u,
                                    const std::vector<SyntacticRule>& rules);

// Drops leading determiners and possessive pronouns from a chunk. Throws
// EmptyChunk when nothing is left.
std::vector<std::string> strip_leading_function_words(
    const std::vector<std::string>& span_tokens, const std::vector<PosTag>& pos);

// Chunk refinement applied to every capture: leading DT/PRP$ and leading
// car-option tokens fall outside the entity. Empty result -> nullopt.
std::optional<TokenSpan> refine_chunk(const TaggedUtterance& u, TokenSpan span);

struct ExtractionResult {
  std::vector<CandidateEntity> candidates;        // sorted by (role, surface)
  std::map<std::size_t, RuleMatch> matches;       // utterance id -> refined match
};

// Runs the rules over the corpus and aggregates identical (surface, role)
// pairs. Utterances with no match (or whose every chunk refines to nothing)
// are skipped.
ExtractionResult extract_candidates(const std::vector<TaggedUtterance>& corpus,
                                    const std::vector<SyntacticRule>& rules);

std::string surface_of(const TaggedUtterance& u, TokenSpan span);

// `role<TAB>surface<TAB>frequency` lines, sorted.
void write_candidates(const std::string& path,
                      const std::vector<CandidateEntity>& candidates);
std::vector<CandidateEntity> load_candidates(const std::string& path);

}  // namespace faultkb
