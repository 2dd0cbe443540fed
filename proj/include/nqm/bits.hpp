#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace nqm {

// Element of the 2-Brauer group, encoded as a nonnegative integer whose group
// law is bitwise XOR. 64 bits cover orders up to 11 (dim <= C(11,2)+1 = 56).
using Label = std::uint64_t;

// Element of the square-class group G = F2^n as an n-bit mask. Bit 0 is the
// distinguished element -1 whenever -1 != 1.
using Mask = std::uint32_t;

constexpr Label xor_labels(Label a, Label b) { return a ^ b; }

// Index of the highest set bit. x > 0.
constexpr int top_bit(Label x) { return 63 - std::countl_zero(x); }

// y is a factor of x iff x * y < x, i.e. the highest set bit of y is set in x.
// Requires y > 0.
constexpr bool is_factor(Label y, Label x) { return (x >> top_bit(y)) & 1u; }

// Echelon basis of an F2 span of labels, pivots kept at the highest set bits.
// reduce() folds XORs so that span membership is reduce(v) == 0.
class LabelSpan {
 public:
  Label reduce(Label v) const {
    for (Label r : rows_) {
      if (v == 0) break;
      if ((v >> top_bit(r)) & 1u) v ^= r;
    }
    return v;
  }

  bool contains(Label v) const { return reduce(v) == 0; }

  // Inserts v; returns true when v was independent of the current span.
  bool insert(Label v) {
    v = reduce(v);
    if (v == 0) return false;
    auto it = rows_.begin();
    while (it != rows_.end() && top_bit(*it) > top_bit(v)) ++it;
    rows_.insert(it, v);
    return true;
  }

  int dim() const { return static_cast<int>(rows_.size()); }
  void clear() { rows_.clear(); }
  const std::vector<Label>& rows() const { return rows_; }

 private:
  std::vector<Label> rows_;  // strictly decreasing pivot positions
};

// Rank of the F2 span of the given labels. Empty list has rank 0.
int span_dim(std::span<const Label> values);

// Calls f on every submask of m exactly once, in ascending order,
// including 0 and m itself.
template <typename F>
void for_each_subset(Mask m, F&& f) {
  Mask t = 0;
  while (true) {
    f(t);
    if (t == m) break;
    t = (t - m) & m;
  }
}

std::vector<Mask> subsets_of(Mask m);

}  // namespace nqm
