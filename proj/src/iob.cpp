#include "faultkb/iob.hpp"

#include "faultkb/errors.hpp"

namespace faultkb {

std::string role_name(Role r) {
  return r == Role::component ? "component" : "problem";
}

Role parse_role(const std::string& s) {
  if (s == "component") return Role::component;
  if (s == "problem") return Role::problem;
  throw FormatError("unknown role '" + s + "'");
}

std::string iob_name(IobTag t) {
  switch (t) {
    case IobTag::O: return "O";
    case IobTag::BComponent: return "B-component";
    case IobTag::IComponent: return "I-component";
    case IobTag::BProblem: return "B-problem";
    case IobTag::IProblem: return "I-problem";
    case IobTag::CarOption: return "CAR-OPTION";
  }
  return "O";
}

IobTag parse_iob(const std::string& s) {
  if (s == "O") return IobTag::O;
  if (s == "B-component") return IobTag::BComponent;
  if (s == "I-component") return IobTag::IComponent;
  if (s == "B-problem") return IobTag::BProblem;
  if (s == "I-problem") return IobTag::IProblem;
  if (s == "CAR-OPTION") return IobTag::CarOption;
  throw FormatError("unknown IOB tag '" + s + "'");
}

namespace {

bool inside_of(IobTag t, Role& role_out) {
  if (t == IobTag::IComponent) { role_out = Role::component; return true; }
  if (t == IobTag::IProblem) { role_out = Role::problem; return true; }
  return false;
}

bool continues(IobTag prev, Role role) {
  if (role == Role::component)
    return prev == IobTag::BComponent || prev == IobTag::IComponent;
  return prev == IobTag::BProblem || prev == IobTag::IProblem;
}

}  // namespace

std::vector<IobTag> repair_iob(std::vector<IobTag> tags) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    Role role;
    if (!inside_of(tags[i], role)) continue;
    if (i == 0 || !continues(tags[i - 1], role)) {
      tags[i] = role == Role::component ? IobTag::BComponent : IobTag::BProblem;
    }
  }
  return tags;
}

bool is_valid_iob(const std::vector<IobTag>& tags) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    Role role;
    if (!inside_of(tags[i], role)) continue;
    if (i == 0 || !continues(tags[i - 1], role)) return false;
  }
  return true;
}

std::vector<EntitySpan> entity_spans(const std::vector<IobTag>& tags) {
  std::vector<EntitySpan> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    Role role;
    bool starts = false;
    if (tags[i] == IobTag::BComponent) { role = Role::component; starts = true; }
    else if (tags[i] == IobTag::BProblem) { role = Role::problem; starts = true; }
    else if (inside_of(tags[i], role)) {
      starts = (i == 0) || !continues(tags[i - 1], role);
    } else {
      continue;
    }
    if (!starts) continue;
    std::size_t end = i + 1;
    while (end < tags.size()) {
      Role inner;
      if (!inside_of(tags[end], inner) || inner != role) break;
      ++end;
    }
    spans.push_back(EntitySpan{role, i, end});
    i = end - 1;
  }
  return spans;
}

}  // namespace faultkb
