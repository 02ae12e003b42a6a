#include "faultkb/eval.hpp"

#include <cstdio>

#include <json.hpp>

#include "faultkb/errors.hpp"

namespace faultkb {

std::string split_kind_name(SplitKind k) {
  switch (k) {
    case SplitKind::same_structure_same_entities: return "same_structure_same_entities";
    case SplitKind::same_structure_different_entities: return "same_structure_different_entities";
    case SplitKind::different_structure_same_entities: return "different_structure_same_entities";
  }
  return "same_structure_same_entities";
}

bool exact_match_accuracy(const std::vector<IobTag>& pred,
                          const std::vector<IobTag>& gold) {
  return pred == gold;
}

Counts entity_accuracy(const std::vector<IobTag>& pred,
                       const std::vector<IobTag>& gold, Role role) {
  Counts counts;
  for (const EntitySpan& span : entity_spans(gold)) {
    if (span.role != role) continue;
    ++counts.total;
    if (span.end > pred.size()) continue;
    const IobTag want_b = role == Role::component ? IobTag::BComponent : IobTag::BProblem;
    const IobTag want_i = role == Role::component ? IobTag::IComponent : IobTag::IProblem;
    bool ok = pred[span.begin] == want_b;
    for (std::size_t i = span.begin + 1; ok && i < span.end; ++i)
      ok = pred[i] == want_i;
    // The predicted span must also stop where the gold span stops.
    if (ok && span.end < pred.size() && pred[span.end] == want_i) ok = false;
    if (ok) ++counts.correct;
  }
  return counts;
}

EvalResult run_eval_splits(const TaggerFn& tagger,
                           const std::vector<EvalSplit>& splits) {
  EvalResult result;
  result.overall.kind = SplitKind::same_structure_same_entities;
  for (const EvalSplit& split : splits) {
    SplitResult sr;
    sr.kind = split.kind;
    for (const TaggedUtterance& item : split.items) {
      if (!item.gold_tags)
        throw InvariantViolation("eval item " + std::to_string(item.id) + " has no gold tags");
      const std::vector<IobTag> pred = tagger(item.tokens);
      const std::vector<IobTag>& gold = *item.gold_tags;

      ++sr.exact.total;
      if (exact_match_accuracy(pred, gold)) ++sr.exact.correct;

      const Counts comp = entity_accuracy(pred, gold, Role::component);
      const Counts prob = entity_accuracy(pred, gold, Role::problem);
      sr.component.correct += comp.correct;
      sr.component.total += comp.total;
      sr.problem.correct += prob.correct;
      sr.problem.total += prob.total;
    }
    if (split.kind != SplitKind::different_structure_same_entities) {
      result.overall.exact.correct += sr.exact.correct;
      result.overall.exact.total += sr.exact.total;
      result.overall.component.correct += sr.component.correct;
      result.overall.component.total += sr.component.total;
      result.overall.problem.correct += sr.problem.correct;
      result.overall.problem.total += sr.problem.total;
    }
    result.splits.push_back(sr);
  }
  return result;
}

EvalSplit load_eval_split(SplitKind kind, const std::string& path) {
  EvalSplit split;
  split.kind = kind;
  split.items = parse_tagged_corpus(path);
  for (const auto& item : split.items) {
    if (!item.gold_tags)
      throw FormatError(path, item.id, "eval split requires the IOB column");
  }
  return split;
}

namespace {

std::string counts_cell(const Counts& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu/%zu (%.1f%%)", c.correct, c.total, c.percent());
  return buf;
}

void result_row(std::string& out, const std::string& label, const SplitResult& sr) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%-38s %-18s %-18s %-18s\n", label.c_str(),
                counts_cell(sr.exact).c_str(), counts_cell(sr.component).c_str(),
                counts_cell(sr.problem).c_str());
  out += buf;
}

}  // namespace

std::string format_eval_table(const EvalResult& result) {
  std::string out;
  char buf[192];
  std::snprintf(buf, sizeof buf, "%-38s %-18s %-18s %-18s\n", "split",
                "exact match", "components", "problems");
  out += buf;
  for (const SplitResult& sr : result.splits)
    result_row(out, split_kind_name(sr.kind), sr);
  result_row(out, "overall (same-structure splits)", result.overall);
  return out;
}

std::string eval_result_json(const EvalResult& result) {
  nlohmann::json j;
  auto counts_json = [](const Counts& c) {
    return nlohmann::json{{"correct", c.correct}, {"total", c.total}};
  };
  auto split_json = [&](const SplitResult& sr) {
    return nlohmann::json{{"exact", counts_json(sr.exact)},
                          {"component", counts_json(sr.component)},
                          {"problem", counts_json(sr.problem)}};
  };
  for (const SplitResult& sr : result.splits)
    j["splits"][split_kind_name(sr.kind)] = split_json(sr);
  j["overall"] = split_json(result.overall);
  return j.dump(2) + "\n";
}

}  // namespace faultkb
