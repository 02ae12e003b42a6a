#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace faultkb {

enum class Role { component, problem };

std::string role_name(Role r);
Role parse_role(const std::string& s);  // throws FormatError

// Closed tag set: O, B-component, I-component, B-problem, I-problem,
// CAR-OPTION. Car options are single-token entities, so they carry one tag
// with no B/I split.
enum class IobTag : unsigned char {
  O = 0,
  BComponent = 1,
  IComponent = 2,
  BProblem = 3,
  IProblem = 4,
  CarOption = 5,
};

inline constexpr std::size_t kIobTagCount = 6;

std::string iob_name(IobTag t);
IobTag parse_iob(const std::string& s);  // throws FormatError

// I-x with no preceding B-x/I-x of the same type becomes B-x.
std::vector<IobTag> repair_iob(std::vector<IobTag> tags);

// True when no I-x follows O, CAR-OPTION, or a different entity type.
bool is_valid_iob(const std::vector<IobTag>& tags);

struct EntitySpan {
  Role role;
  std::size_t begin = 0;  // token index, inclusive
  std::size_t end = 0;    // token index, exclusive

  bool operator==(const EntitySpan&) const = default;
};

// Maximal B-x (I-x)* runs, in token order. Expects repaired tags; a
// dangling I-x run is treated as starting its own entity.
std::vector<EntitySpan> entity_spans(const std::vector<IobTag>& tags);

}  // namespace faultkb
