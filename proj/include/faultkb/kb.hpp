#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "faultkb/curation.hpp"
#include "faultkb/iob.hpp"

namespace faultkb {

enum class EntitySource { rule, tagger, traversal, aggregation };

std::string entity_source_name(EntitySource s);
EntitySource parse_entity_source(const std::string& s);

// Entity sets plus `is-a` (subtype -> supertype, strict token suffixes) and
// `has-a` (component -> problem) edges. is_a connects adjacent suffix
// lengths only, so acyclicity falls out of strictly decreasing length.
struct KnowledgeBase {
  std::map<std::string, EntitySource> components;
  std::map<std::string, EntitySource> problems;
  std::set<std::string> car_options;
  std::set<std::pair<std::string, std::string>> is_a;
  std::set<std::pair<std::string, std::string>> has_a;

  bool operator==(const KnowledgeBase&) const = default;

  void check_invariants() const;  // throws InvariantViolation
};

// Supertypes of a multi-token component: token suffixes of length 1..k-1,
// shortest first.
std::vector<std::string> backward_traversal(const std::vector<std::string>& tokens);

struct Hierarchy {
  std::set<std::string> nodes;                                // all surfaces
  std::set<std::string> created;                              // traversal-created
  std::set<std::pair<std::string, std::string>> is_a;         // sub -> super
  std::map<std::string, std::set<std::string>> children;      // super -> subs
};

Hierarchy build_hierarchy(const std::set<std::string>& components);

// Bottom-up union: every supertype collects its own seeded problems plus
// everything its children aggregated.
std::set<std::pair<std::string, std::string>> aggregate_problems(
    const Hierarchy& hierarchy,
    const std::set<std::pair<std::string, std::string>>& seed);

struct SourcedEntity {
  std::string surface;
  EntitySource source;
};

// Core consolidation over explicit inputs. Deduplicates surfaces (rule
// beats tagger beats traversal), closes components under backward
// traversal, and aggregates problems upward.
KnowledgeBase consolidate(const std::vector<SourcedEntity>& components,
                          const std::vector<SourcedEntity>& problems,
                          const std::set<std::pair<std::string, std::string>>& has_a_seed,
                          const std::set<std::string>& car_options);

// Pipeline-facing wrapper: curated entities (with rule provenance spans)
// plus tagger extractions from utterances the rules missed. has-a seeds are
// component/problem pairs co-extracted from the same utterance.
struct TaggerExtraction {
  std::size_t utterance_id = 0;
  std::vector<std::pair<Role, std::string>> entities;
};

KnowledgeBase consolidate_kb(const std::vector<CandidateEntity>& curated,
                             const std::vector<TaggerExtraction>& tagger,
                             const std::set<std::string>& car_options);

// JSON on disk: components/problems/car_options as {surface, provenance}
// arrays, is_a/has_a as [from, to] arrays, all sorted for diff stability.
void save_kb(const std::string& path, const KnowledgeBase& kb);
KnowledgeBase load_kb(const std::string& path);

}  // namespace faultkb
