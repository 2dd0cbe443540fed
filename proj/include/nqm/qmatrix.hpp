#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "nqm/bits.hpp"

namespace nqm {

struct AxiomError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symmetric n x n matrix of quaternion labels with a type flag.
// Type 1: M[i][i] == M[0][i] for all i. Type 0: zero diagonal.
struct QMatrix {
  int n = 0;
  int type = 0;  // epsilon in {0,1}
  std::vector<Label> e;  // row-major, n*n

  QMatrix() = default;
  QMatrix(int order, int eps) : n(order), type(eps), e(std::size_t(order) * order, 0) {}

  Label at(int i, int j) const { return e[std::size_t(i) * n + j]; }
  Label& at(int i, int j) { return e[std::size_t(i) * n + j]; }

  void set_sym(int i, int j, Label v) {
    at(i, j) = v;
    at(j, i) = v;
  }

  bool operator==(const QMatrix& o) const = default;
  // Row-major lexicographic order within a fixed type.
  std::strong_ordering operator<=>(const QMatrix& o) const {
    if (auto c = type <=> o.type; c != 0) return c;
    if (auto c = n <=> o.n; c != 0) return c;
    for (std::size_t k = 0; k < e.size(); ++k)
      if (auto c = e[k] <=> o.e[k]; c != 0) return c;
    return std::strong_ordering::equal;
  }
};

// Set of column indices of a completion row; supports orders up to 7 (128 columns).
struct ColSet {
  std::uint64_t lo = 0, hi = 0;
  void set(int c) { (c < 64 ? lo : hi) |= std::uint64_t{1} << (c & 63); }
  bool intersects(const ColSet& o) const { return (lo & o.lo) || (hi & o.hi); }
  int count() const { return std::popcount(lo) + std::popcount(hi); }
};

// The 2^n x 2^n extension of a matrix to all pairs of group elements.
struct Completion {
  int n = 0;
  std::vector<Label> t;  // row-major, (1<<n) x (1<<n)

  Label at(Mask r, Mask c) const { return t[(std::size_t(r) << n) | c]; }
  Label& at(Mask r, Mask c) { return t[(std::size_t(r) << n) | c]; }

  // value -> columns holding it, for one row
  std::unordered_map<Label, ColSet> row_dict(Mask r) const;
  int row_zeros(Mask r) const;
};

struct AxiomReport {
  bool m1 = false, m2 = false, m3 = false, red = false;
  bool all() const { return m1 && m2 && m3 && red; }
  bool pre3() const { return m1 && m2 && m3; }
};

struct BrauerPresentation {
  int qdim = 0;
  // canonical label for every distinct completion value; relabel[0] == 0
  std::unordered_map<Label, Label> relabel;
};

// Builds the completion incrementally (throws AxiomError on M1/M2 violation).
Completion completion(const QMatrix& m);

// Report-only check of M1, M2, M3 and (red); never throws.
AxiomReport check_axioms(const QMatrix& m);

// Common-slot check on a prebuilt completion.
bool common_slot_ok(const Completion& c);

// F2 quotient of the free space on the distinct nonzero completion values by
// the linkage relations; requires M1-M3.
BrauerPresentation brauer_presentation(const QMatrix& m);

int span_dim_entries(const QMatrix& m);

// True iff the Brauer dimension equals the span of the entries.
bool is_quaternionic(const QMatrix& m);

// Unique reduced matrix with the identical completion zero pattern.
QMatrix reduce(const QMatrix& m);

// Simple transformations (basis swap / basis add). Throw on index constraints.
QMatrix apply_swap(const QMatrix& m, int i, int j);
QMatrix apply_add(const QMatrix& m, int i, int j);

// Lexicographically minimal reduced quaternionic matrix isomorphic to m.
// Requires M1-M3 and is_quaternionic.
QMatrix canonical_form(const QMatrix& m);

enum class MatrixFormat { Triangle, Json };

// Triangle form: optional headers "type=<0|1>" and (type 1) "m00=<label>",
// body "(r0; r1; ...)" listing the strict upper triangle row by row.
// For n == 1 the body holds the single diagonal entry.
std::string format_matrix(const QMatrix& m, MatrixFormat f = MatrixFormat::Triangle);
QMatrix parse_matrix(const std::string& text);

// Body-only triangle string "(...)" without headers.
std::string triangle_body(const QMatrix& m);
// Rebuild a matrix from a triangle body given type and M00.
QMatrix matrix_from_triangle(const std::string& body, int type, Label m00);

}  // namespace nqm
