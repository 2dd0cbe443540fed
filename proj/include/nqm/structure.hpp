#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nqm/bits.hpp"
#include "nqm/qmatrix.hpp"

namespace nqm {

// Natural number extended with infinity; used for level, Pythagoras number
// and the u-invariant.
struct ExtNat {
  std::uint64_t v = 0;
  bool inf = false;

  static ExtNat infinity() { return {0, true}; }
  bool operator==(const ExtNat&) const = default;
  bool is(std::uint64_t x) const { return !inf && v == x; }
  std::string str() const { return inf ? "inf" : std::to_string(v); }
};

// A quaternionic structure over G = F2^n: the completion table of a matrix
// plus the distinguished element -1 (mask 1 for type 1, identity otherwise).
struct Structure {
  int n = 0;
  Mask minus_one = 0;
  Completion table;

  Mask size() const { return Mask{1} << n; }
  Label q(Mask a, Mask b) const { return table.at(a, b); }
};

// A diagonal quadratic form <a1,...,ak> over the ambient group.
using Form = std::vector<Mask>;

Structure from_matrix(const QMatrix& m);

// V(a) = {b : q(a,b) = 0}, always a subgroup.
std::vector<Mask> value_group(const Structure& s, Mask a);

// D(<a,b>) = {c : q(a,b) = q(c, a*b*c)}.
std::vector<Mask> rep_binary(const Structure& s, Mask a, Mask b);

// Represented elements of a form, via D(phi + <a>) = U_{b in D(phi)} D(<b,a>).
std::vector<Mask> rep_set(const Structure& s, const Form& phi);

ExtNat level(const Structure& s);
ExtNat pythagoras(const Structure& s);
std::vector<Mask> radical(const Structure& s);
bool is_degenerate(const Structure& s);

// Level of a nondegenerate matrix read off the matrix itself: one of
// 1, 2, 4 or "at least 8" (encoded as 8).
int level_from_matrix(const QMatrix& m);

struct RigidityProfile {
  std::vector<int> dims;  // dim V(a) for every a != 1
  int d1 = 0;             // dim V(-1)
  int d_min = 0;          // minimum over a != 1
  int strictly_k_rigid = 0;
};
RigidityProfile rigidity_profile(const Structure& s);

Mask det_form(const Structure& s, const Form& phi);
Mask disc_form(const Structure& s, const Form& phi);
Label hasse_invariant(const Structure& s, const Form& phi);
Label witt_invariant(const Structure& s, const Form& phi);

bool is_isotropic(const Structure& s, const Form& phi);
// Splits hyperbolic planes: phi ~ anisotropic part + witt_index * H.
int witt_index(const Structure& s, Form phi);
bool is_hyperbolic(const Structure& s, const Form& phi);

// Every 6-dimensional form <a,b,ab,a',b',-a'b'> with trivial Witt invariant
// must be hyperbolic.
bool ap3_check(const Structure& s);

// Brute-force verification of axioms Q1-Q4 on the structure table.
bool q_axioms_ok(const Structure& s);

}  // namespace nqm
