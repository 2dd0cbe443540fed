#pragma once

#include <stdexcept>
#include <string>

namespace nqm {

// Exclusion policy for the classification target class.
// None:     nondegenerate, nonpythagorean, nonrigid.
// Standard: additionally drops the 2-rigid cases settled in the literature
//           (level 1 strictly 2-rigid; level 2 with a 2-rigid element of
//           V(-1); level exactly 4 with dim V(-1) = 2).
enum class Policy { None, Standard };

inline Policy parse_policy(const std::string& s) {
  if (s == "none") return Policy::None;
  if (s == "standard") return Policy::Standard;
  throw std::invalid_argument("unknown policy '" + s + "'");
}

inline const char* policy_name(Policy p) {
  return p == Policy::None ? "none" : "standard";
}

}  // namespace nqm
