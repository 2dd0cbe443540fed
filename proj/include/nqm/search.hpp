#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nqm/policy.hpp"
#include "nqm/qmatrix.hpp"

namespace nqm {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters of the first two rows of a candidate normal matrix.
struct SecondRowParams {
  int s_class = 1;  // 1, 2 or 4 (meaning level >= 4)
  int d = 0, f = 1, r = 0, v = 0, t = 0, u = 0;

  bool operator==(const SecondRowParams&) const = default;
  auto operator<=>(const SecondRowParams&) const = default;
  std::string str() const;
};

// All admissible parameter tuples for the target class (M01 = 0), restricted
// by the second-row constraints; the standard policy drops the settled
// (d, f, r) = (n-3, 1, 1) case for level >= 4.
std::vector<SecondRowParams> enumerate_params(int n, int s_class, Policy policy);

// Decodes the parameter tuple back from the first two rows of a seed.
SecondRowParams params_of_rows(int n, int s_class, const std::vector<Label>& row0,
                               const std::vector<Label>& row1);

// A matrix filled through a prefix of the strictly-upper positions in
// row-major order (rows 0 and 1 are always the parameter seed).
struct PartialMatrix {
  int n = 0;
  int type = 0;
  SecondRowParams params;
  std::vector<Label> upper;  // strictly-upper entries, row-major
  int next_i = 0, next_j = 0;  // next free position; (n, n) when complete
  Label alpha = 1;             // next fresh power

  bool complete() const { return next_i >= n; }
  QMatrix to_matrix() const;  // requires complete()
};

PartialMatrix seed_rows(int n, const SecondRowParams& p);

// Wraps a complete matrix as a partial (level class derived from the matrix),
// mainly to run validity_check on explicit matrices.
PartialMatrix partial_from_matrix(const QMatrix& m);

enum class PruneMode { Full, RedOnly };
// Every completed matrix must be a reduced quaternionic matrix fixed by
// canonical_form; Battery additionally runs the cheap transformation battery
// first, Canonical goes straight to the definitional test.
enum class FinalFilter { Battery, Canonical };

// Admissible labels for the next free position, ascending.
std::vector<Label> candidates(const PartialMatrix& pm, PruneMode mode = PruneMode::Full);

// Checks the completed completion rows of pm: common slot, zero counts,
// row-minimality, and the policy cuts.
bool validity_check(const PartialMatrix& pm, Policy policy);

struct ParamTiming {
  SecondRowParams params;
  double seconds = 0;
  std::size_t results = 0;
  std::size_t nodes = 0;
};

struct ClassifyResult {
  std::map<int, std::vector<QMatrix>> per_level;  // keys 1, 2, 4
  std::vector<ParamTiming> timings;

  std::map<int, std::size_t> counts() const;
};

struct ClassifyOptions {
  Policy policy = Policy::Standard;
  int workers = 1;
  PruneMode prune = PruneMode::Full;
  FinalFilter final_filter = FinalFilter::Battery;
};

ClassifyResult classify(int n, const std::vector<int>& s_classes,
                        const ClassifyOptions& opt = {});
// Plain-loop reference used by tests and the benchmark.
ClassifyResult classify_serial(int n, const std::vector<int>& s_classes,
                               const ClassifyOptions& opt = {});

struct Checkpoint {
  int version = 1;
  int n = 0;
  std::vector<int> s_classes;
  Policy policy = Policy::Standard;
  std::pair<int, int> until{0, 0};
  std::vector<PartialMatrix> records;
};

// Runs the search truncated at position `until`, emitting surviving partials.
Checkpoint partition(int n, const std::vector<int>& s_classes,
                     const ClassifyOptions& opt, std::pair<int, int> until);

// Completes the partial matrices of a checkpoint.
ClassifyResult resume(const Checkpoint& cp, const ClassifyOptions& opt = {});

void write_checkpoint(const Checkpoint& cp, std::ostream& os);
Checkpoint read_checkpoint(std::istream& is);

std::string render_timings_tsv(const ClassifyResult& r);

}  // namespace nqm
