#pragma once

#include <functional>
#include <string>
#include <vector>

#include "faultkb/iob.hpp"
#include "faultkb/pos.hpp"

namespace faultkb {

enum class SplitKind {
  same_structure_same_entities,
  same_structure_different_entities,
  different_structure_same_entities,
};

std::string split_kind_name(SplitKind k);

struct EvalSplit {
  SplitKind kind = SplitKind::same_structure_same_entities;
  std::vector<TaggedUtterance> items;  // every item carries gold tags
};

struct Counts {
  std::size_t correct = 0;
  std::size_t total = 0;

  double percent() const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
  }
};

struct SplitResult {
  SplitKind kind = SplitKind::same_structure_same_entities;
  Counts exact;      // utterance-level exact IOB match
  Counts component;  // gold component spans reproduced exactly
  Counts problem;
};

struct EvalResult {
  std::vector<SplitResult> splits;
  // Aggregate over the same-structure splits only; the different-structure
  // split is reported separately.
  SplitResult overall;
};

// True iff elementwise equal; a length mismatch counts as a miss.
bool exact_match_accuracy(const std::vector<IobTag>& pred,
                          const std::vector<IobTag>& gold);

// Gold entities are maximal B-x/I-x runs of the role; one is correct iff
// the prediction reproduces its boundaries and type exactly.
Counts entity_accuracy(const std::vector<IobTag>& pred,
                       const std::vector<IobTag>& gold, Role role);

using TaggerFn =
    std::function<std::vector<IobTag>(const std::vector<std::string>& tokens)>;

EvalResult run_eval_splits(const TaggerFn& tagger,
                           const std::vector<EvalSplit>& splits);

// Split file: the token<TAB>POS<TAB>IOB corpus format, gold required.
EvalSplit load_eval_split(SplitKind kind, const std::string& path);

std::string format_eval_table(const EvalResult& result);
std::string eval_result_json(const EvalResult& result);

}  // namespace faultkb
