#include "faultkb/kb.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "faultkb/errors.hpp"
#include "faultkb/io_util.hpp"

namespace faultkb {

std::string entity_source_name(EntitySource s) {
  switch (s) {
    case EntitySource::rule: return "rule";
    case EntitySource::tagger: return "tagger";
    case EntitySource::traversal: return "traversal";
    case EntitySource::aggregation: return "aggregation";
  }
  return "rule";
}

EntitySource parse_entity_source(const std::string& s) {
  if (s == "rule") return EntitySource::rule;
  if (s == "tagger") return EntitySource::tagger;
  if (s == "traversal") return EntitySource::traversal;
  if (s == "aggregation") return EntitySource::aggregation;
  throw FormatError("unknown provenance '" + s + "'");
}

namespace {

bool is_strict_token_suffix(const std::vector<std::string>& sub,
                            const std::vector<std::string>& super) {
  if (super.size() >= sub.size()) return false;
  return std::equal(super.rbegin(), super.rend(), sub.rbegin());
}

}  // namespace

void KnowledgeBase::check_invariants() const {
  for (const auto& [sub, super] : is_a) {
    if (!components.count(sub) || !components.count(super))
      throw InvariantViolation("is_a endpoint missing: " + sub + " -> " + super);
    if (!is_strict_token_suffix(split_ws(sub), split_ws(super)))
      throw InvariantViolation("is_a edge is not a strict token suffix: " + sub +
                               " -> " + super);
  }
  for (const auto& [comp, prob] : has_a) {
    if (!components.count(comp))
      throw InvariantViolation("has_a component missing: " + comp);
    if (!problems.count(prob))
      throw InvariantViolation("has_a problem missing: " + prob);
  }
}

std::vector<std::string> backward_traversal(const std::vector<std::string>& tokens) {
  std::vector<std::string> supertypes;
  if (tokens.empty()) return supertypes;
  for (std::size_t len = 1; len < tokens.size(); ++len) {
    std::vector<std::string> suffix(tokens.end() - static_cast<std::ptrdiff_t>(len),
                                    tokens.end());
    supertypes.push_back(join(suffix, " "));
  }
  return supertypes;
}

Hierarchy build_hierarchy(const std::set<std::string>& components) {
  Hierarchy h;
  for (const auto& surface : components) h.nodes.insert(surface);
  for (const auto& surface : components) {
    const auto tokens = split_ws(surface);
    for (const auto& super : backward_traversal(tokens)) {
      if (!h.nodes.count(super)) {
        h.nodes.insert(super);
        h.created.insert(super);
      }
    }
  }
  // Adjacent suffix lengths only; longer chains are derivable.
  for (const auto& surface : h.nodes) {
    const auto tokens = split_ws(surface);
    if (tokens.size() < 2) continue;
    const std::string parent =
        join({tokens.begin() + 1, tokens.end()}, " ");
    h.is_a.emplace(surface, parent);
    h.children[parent].insert(surface);
  }
  return h;
}

std::set<std::pair<std::string, std::string>> aggregate_problems(
    const Hierarchy& hierarchy,
    const std::set<std::pair<std::string, std::string>>& seed) {
  for (const auto& [comp, prob] : seed) {
    if (!hierarchy.nodes.count(comp))
      throw InvariantViolation("has_a seed component not in hierarchy: " + comp);
  }

  std::map<std::string, std::set<std::string>> problems_of;
  for (const auto& [comp, prob] : seed) problems_of[comp].insert(prob);

  // Bottom-up level order: descending token length visits every child
  // before its parent, since parents are exactly one token shorter.
  std::vector<std::string> order(hierarchy.nodes.begin(), hierarchy.nodes.end());
  std::sort(order.begin(), order.end(), [](const std::string& a, const std::string& b) {
    const std::size_t la = split_ws(a).size();
    const std::size_t lb = split_ws(b).size();
    if (la != lb) return la > lb;
    return a < b;
  });

  for (const auto& node : order) {
    auto kids = hierarchy.children.find(node);
    if (kids == hierarchy.children.end()) continue;
    auto& mine = problems_of[node];
    for (const auto& child : kids->second) {
      auto found = problems_of.find(child);
      if (found == problems_of.end()) continue;
      mine.insert(found->second.begin(), found->second.end());
    }
  }

  std::set<std::pair<std::string, std::string>> result;
  for (const auto& [comp, probs] : problems_of)
    for (const auto& prob : probs) result.emplace(comp, prob);
  return result;
}

KnowledgeBase consolidate(const std::vector<SourcedEntity>& components,
                          const std::vector<SourcedEntity>& problems,
                          const std::set<std::pair<std::string, std::string>>& has_a_seed,
                          const std::set<std::string>& car_options) {
  KnowledgeBase kb;
  kb.car_options = car_options;

  auto rank = [](EntitySource s) {
    switch (s) {
      case EntitySource::rule: return 0;
      case EntitySource::tagger: return 1;
      case EntitySource::traversal: return 2;
      case EntitySource::aggregation: return 3;
    }
    return 3;
  };
  auto add = [&](std::map<std::string, EntitySource>& target, const SourcedEntity& e) {
    auto [it, inserted] = target.emplace(e.surface, e.source);
    if (!inserted && rank(e.source) < rank(it->second)) it->second = e.source;
  };
  for (const auto& e : components) add(kb.components, e);
  for (const auto& e : problems) add(kb.problems, e);

  std::set<std::string> comp_surfaces;
  for (const auto& [surface, src] : kb.components) comp_surfaces.insert(surface);
  const Hierarchy hierarchy = build_hierarchy(comp_surfaces);
  for (const auto& created : hierarchy.created)
    kb.components.emplace(created, EntitySource::traversal);
  kb.is_a = hierarchy.is_a;

  kb.has_a = aggregate_problems(hierarchy, has_a_seed);

  kb.check_invariants();
  return kb;
}

KnowledgeBase consolidate_kb(const std::vector<CandidateEntity>& curated,
                             const std::vector<TaggerExtraction>& tagger,
                             const std::set<std::string>& car_options) {
  std::vector<SourcedEntity> components;
  std::vector<SourcedEntity> problems;
  std::set<std::pair<std::string, std::string>> seed;

  // Join per-utterance: every component extracted from an utterance has
  // every problem extracted from the same utterance.
  std::map<std::size_t, std::vector<std::pair<Role, std::string>>> by_utterance;
  for (const auto& cand : curated) {
    auto& target = cand.role == Role::component ? components : problems;
    target.push_back(SourcedEntity{cand.surface, EntitySource::rule});
    for (const auto& prov : cand.provenance)
      by_utterance[prov.utterance_id].emplace_back(cand.role, cand.surface);
  }
  for (const auto& ext : tagger) {
    for (const auto& [role, surface] : ext.entities) {
      auto& target = role == Role::component ? components : problems;
      target.push_back(SourcedEntity{surface, EntitySource::tagger});
      by_utterance[ext.utterance_id].emplace_back(role, surface);
    }
  }
  for (const auto& [id, entities] : by_utterance) {
    for (const auto& [role_a, comp] : entities) {
      if (role_a != Role::component) continue;
      for (const auto& [role_b, prob] : entities) {
        if (role_b == Role::problem) seed.emplace(comp, prob);
      }
    }
  }
  return consolidate(components, problems, seed, car_options);
}

void save_kb(const std::string& path, const KnowledgeBase& kb) {
  nlohmann::json j;
  auto entity_array = [](const std::map<std::string, EntitySource>& entities) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [surface, source] : entities) {
      arr.push_back({{"surface", surface}, {"provenance", entity_source_name(source)}});
    }
    return arr;
  };
  j["components"] = entity_array(kb.components);
  j["problems"] = entity_array(kb.problems);
  j["car_options"] = nlohmann::json::array();
  for (const auto& c : kb.car_options) j["car_options"].push_back(c);
  auto edge_array = [](const std::set<std::pair<std::string, std::string>>& edges) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [from, to] : edges) arr.push_back({from, to});
    return arr;
  };
  j["is_a"] = edge_array(kb.is_a);
  j["has_a"] = edge_array(kb.has_a);
  write_file_atomic(path, j.dump(2) + "\n");
}

KnowledgeBase load_kb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  KnowledgeBase kb;
  try {
    for (const auto& e : j.at("components")) {
      kb.components.emplace(e.at("surface").get<std::string>(),
                            parse_entity_source(e.at("provenance").get<std::string>()));
    }
    for (const auto& e : j.at("problems")) {
      kb.problems.emplace(e.at("surface").get<std::string>(),
                          parse_entity_source(e.at("provenance").get<std::string>()));
    }
    for (const auto& c : j.at("car_options")) kb.car_options.insert(c.get<std::string>());
    for (const auto& edge : j.at("is_a"))
      kb.is_a.emplace(edge.at(0).get<std::string>(), edge.at(1).get<std::string>());
    for (const auto& edge : j.at("has_a"))
      kb.has_a.emplace(edge.at(0).get<std::string>(), edge.at(1).get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  try {
    kb.check_invariants();
  } catch (const InvariantViolation& e) {
    throw FormatError(path + ": " + e.what());
  }
  return kb;
}

}  // namespace faultkb
