#pragma once

#include <map>
#include <string>
#include <vector>

#include "nqm/policy.hpp"
#include "nqm/search.hpp"
#include "nqm/spec_ast.hpp"

namespace nqm {

struct EtcReport {
  int n = 0;
  Policy policy = Policy::Standard;
  bool pass = false;
  std::map<int, std::size_t> generated;   // expected per level class
  std::map<int, std::size_t> enumerated;  // found per level class
  std::vector<QMatrix> missing;  // generated but not enumerated
  std::vector<QMatrix> extra;    // enumerated but not generated
  std::string summary() const;
  std::string json() const;
};

// Matches the enumerated matrices against the generated elementary-type
// universe; PASS means set equality per level class.
EtcReport etc_verify(int n, Policy policy, int workers = 1);

struct AppendixLine {
  int level_class = 0;  // 1, 2 or 4
  bool starred = false;
  std::string spec_text;
  std::string triangle;
};

std::vector<AppendixLine> load_appendix(const std::string& path);

struct AppendixReport {
  bool pass = false;
  std::size_t lines = 0;
  std::map<int, std::size_t> per_level;
  std::map<int, std::size_t> starred_per_level;
  std::vector<std::string> mismatches;
  std::string summary() const;
};

// Every line: canonical_form(eval(spec)) must print exactly the recorded
// triangle, and the starred set must match the standard-policy exclusions.
AppendixReport appendix_check(const std::string& path);

struct CrosscheckReport {
  bool pass = false;
  std::vector<std::string> failures;
  std::size_t specs_checked = 0;
  std::string summary() const;
};

// Structure-level recomputation of the recursive invariants, matrix-level
// level detection, Qdim additivity and AP3 for all generated specs.
CrosscheckReport invariant_crosscheck(int n_max);

}  // namespace nqm
