#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nqm/policy.hpp"
#include "nqm/qmatrix.hpp"
#include "nqm/structure.hpp"

namespace nqm {

// Expression describing an elementary type structure.
struct StructureSpec {
  enum class Kind { L0, L10, L11, L1, Local, Product, Delta };
  enum class LocalVariant { Odd, Even0, Even1 };

  Kind kind = Kind::L0;
  int local_n = 0;
  LocalVariant local_variant = LocalVariant::Odd;
  std::vector<StructureSpec> children;

  static StructureSpec atom(Kind k) { return StructureSpec{k, 0, LocalVariant::Odd, {}}; }
  static StructureSpec local(int n, LocalVariant v) {
    return StructureSpec{Kind::Local, n, v, {}};
  }
  static StructureSpec product(std::vector<StructureSpec> cs) {
    return StructureSpec{Kind::Product, 0, LocalVariant::Odd, std::move(cs)};
  }
  static StructureSpec delta(StructureSpec c) {
    return StructureSpec{Kind::Delta, 0, LocalVariant::Odd, {std::move(c)}};
  }

  bool operator==(const StructureSpec&) const = default;
};

int order_of(const StructureSpec& s);
bool spec_less(const StructureSpec& a, const StructureSpec& b);

// Flattens products, sorts children, applies the rewrites
// Delta(L0) -> L10 and Delta(L1) -> L1 x L1.
StructureSpec canonicalize(const StructureSpec& s);

StructureSpec parse_spec(const std::string& text);
std::string format_spec(const StructureSpec& s);

// Builds a reduced quaternionic matrix of the structure the spec denotes.
// Order 0 (bare L0) has no matrix and throws.
QMatrix eval(const StructureSpec& s);

struct InvariantVector {
  ExtNat s, p, u;
  int d1 = 0;
  int d_min = 0;
  bool operator==(const InvariantVector&) const = default;
};

// Level, Pythagoras number, u-invariant, dim V(-1) and min dim V(a),
// computed by the recursion rules for products, extensions and the base
// structures. For structures with -1 = 1, d1 equals the order.
InvariantVector invariants_recursive(const StructureSpec& s);

// One canonical spec per isomorphism class of elementary types of order n.
std::vector<StructureSpec> generate_all(int n);

// Keeps the nondegenerate, nonpythagorean, nonrigid specs; the standard
// policy applies the level-dependent 2-rigidity exclusions on top.
std::vector<StructureSpec> filter_target_class(const std::vector<StructureSpec>& specs,
                                               int n, Policy policy);

// Level class bucket: 1, 2 or 4 (meaning level >= 4, including infinity).
int level_class_of(const StructureSpec& s);

}  // namespace nqm
