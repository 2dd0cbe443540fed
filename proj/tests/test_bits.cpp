#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nqm/bits.hpp"

using namespace nqm;

TEST_CASE("xor is the quaternionic product") {
  CHECK(xor_labels(32, 1) == 33);
  CHECK(xor_labels(5, 3) == 6);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Label a = rng() & 0xffff, b = rng() & 0xffff, c = rng() & 0xffff;
    CHECK(xor_labels(a, a) == 0);
    CHECK(xor_labels(a, 0) == a);
    CHECK(xor_labels(a, b) == xor_labels(b, a));
    CHECK(xor_labels(xor_labels(a, b), c) == xor_labels(a, xor_labels(b, c)));
  }
}

TEST_CASE("factor test matches the top-bit rule") {
  CHECK(is_factor(32, 33));
  CHECK_FALSE(is_factor(2, 1));
  CHECK(is_factor(1, 1));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Label y = (rng() & 0xfff) + 1, x = rng() & 0xfff;
    CHECK(is_factor(y, x) == (xor_labels(x, y) < x));
  }
}

TEST_CASE("span dimension by elimination") {
  const Label a[] = {1, 2, 4};
  CHECK(span_dim(a) == 3);
  const Label b[] = {1, 2, 3};
  CHECK(span_dim(b) == 2);
  // entries of the second linkage-example matrix; 33 is dependent
  const Label c[] = {1, 2, 4, 8, 16, 32, 33, 64, 128};
  CHECK(span_dim(c) == 8);
  CHECK(span_dim(std::span<const Label>{}) == 0);
}

TEST_CASE("span invariance properties") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<Label> vals;
    for (int i = 0; i < 6; ++i) vals.push_back(rng() & 0xff);
    const int d = span_dim(vals);
    std::shuffle(vals.begin(), vals.end(), rng);
    CHECK(span_dim(vals) == d);
    vals[0] ^= vals[1];
    CHECK(span_dim(vals) == d);
  }
}

TEST_CASE("submask enumeration") {
  CHECK(subsets_of(0) == std::vector<Mask>{0});
  CHECK(subsets_of(5) == std::vector<Mask>({0, 1, 4, 5}));
  for (Mask m : {Mask{0b1011}, Mask{0b11111}, Mask{0b100100}}) {
    const auto subs = subsets_of(m);
    CHECK(subs.size() == (std::size_t{1} << std::popcount(m)));
    CHECK(std::is_sorted(subs.begin(), subs.end()));
    for (Mask s : subs) CHECK((s & ~m) == 0);
  }
}

TEST_CASE("labeled span reduce") {
  LabelSpan s;
  CHECK(s.insert(0b1100));
  CHECK(s.insert(0b0110));
  CHECK_FALSE(s.insert(0b1010));
  CHECK(s.dim() == 2);
  CHECK(s.contains(0b1010));
  CHECK_FALSE(s.contains(0b0001));
}
