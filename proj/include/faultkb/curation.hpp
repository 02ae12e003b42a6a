#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "faultkb/embeddings.hpp"
#include "faultkb/rules.hpp"

namespace faultkb {

// Thresholds of the four weak-supervision pruning stages.
struct CurationConfig {
  std::size_t F = 1;             // min frequency (strict less-than prunes)
  std::size_t T_component = 6;   // max terms per component
  std::size_t T_problem = 5;     // max terms per problem
  std::size_t L_component = 2;   // min letters per component term
  std::size_t L_problem = 2;     // min letters per problem term
  std::size_t P = 1;             // min similar problem neighbors
  double S_p = 0.5;              // problem similarity threshold
  std::size_t C = 5;             // min similar component neighbors
  double S_c = 0.5;              // component similarity threshold
  double sentiment_threshold = 0.5;

  void validate() const;  // throws ConfigError
};

enum class PruneReason { statistical, linguistic, embedding, sentiment };

std::string prune_reason_name(PruneReason r);

struct PrunedEntity {
  CandidateEntity entity;
  PruneReason reason;
};

struct CurationReport {
  std::vector<CandidateEntity> kept;
  std::vector<PrunedEntity> pruned;
};

struct Partition {
  std::vector<CandidateEntity> kept;
  std::vector<CandidateEntity> pruned;
};

// frequency < F goes out.
Partition prune_statistical(const std::vector<CandidateEntity>& cands, std::size_t f);

// Out when: more than T terms, a term with fewer than L letters, or a term
// mixing letters and digits (OBD codes and the like).
Partition prune_linguistic(const std::vector<CandidateEntity>& cands,
                           const CurationConfig& cfg);

// A candidate stays iff at least P (problems) / C (components) *other*
// same-role candidates in the pool reach the similarity threshold with it.
// Candidates with no phrase vector go out here.
Partition prune_embedding(const std::vector<CandidateEntity>& cands,
                          const EmbeddingModel& m, const CurationConfig& cfg);

// Problems only: keep iff similar (>= sentiment_threshold) to at least one
// negative-sentiment word that has a vector. Components pass through.
Partition prune_sentiment(const std::vector<CandidateEntity>& cands,
                          const EmbeddingModel& m,
                          const std::vector<std::string>& negative_lexicon,
                          const CurationConfig& cfg);

// statistical -> linguistic -> embedding -> sentiment, in that order; each
// stage sees only the survivors of the previous one. Pass nullopt for the
// lexicon to disable the sentiment stage.
CurationReport curate_pipeline(
    const std::vector<CandidateEntity>& cands, const EmbeddingModel& m,
    const std::optional<std::vector<std::string>>& negative_lexicon,
    const CurationConfig& cfg);

// One word per line (Hu & Liu list format). Throws LexiconMissing when the
// file is absent or has no words.
std::vector<std::string> load_negative_lexicon(const std::string& path);

// Flat key=value text; keys are exactly the config field names. Unknown
// keys are ignored so a combined pipeline config can carry them.
CurationConfig parse_curation_config(
    const std::vector<std::pair<std::string, std::string>>& entries);

// `kept|pruned<TAB>role<TAB>surface<TAB>reason` ('-' for kept rows).
void write_curation_report(const std::string& path, const CurationReport& report);

// Kept surfaces per role, for training-set construction and KB building.
struct KeptPools {
  std::unordered_set<std::string> components;
  std::unordered_set<std::string> problems;

  bool contains(Role role, const std::string& surface) const {
    return role == Role::component ? components.count(surface) > 0
                                   : problems.count(surface) > 0;
  }
};

KeptPools kept_pools(const CurationReport& report);
KeptPools load_kept_pools(const std::string& report_path);

}  // namespace faultkb
