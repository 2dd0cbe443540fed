#include "nqm/bits.hpp"

namespace nqm {

int span_dim(std::span<const Label> values) {
  LabelSpan s;
  for (Label v : values) s.insert(v);
  return s.dim();
}

std::vector<Mask> subsets_of(Mask m) {
  std::vector<Mask> out;
  out.reserve(std::size_t{1} << std::popcount(m));
  for_each_subset(m, [&](Mask t) { out.push_back(t); });
  return out;
}

}  // namespace nqm
