#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nqm {

// Nonnegative arbitrary-precision integer, base 1e9 limbs.
class BigInt {
 public:
  BigInt() = default;
  BigInt(std::uint64_t v);

  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;  // requires *this >= o
  BigInt operator*(const BigInt& o) const;
  BigInt div_small(std::uint32_t d) const;  // exact or floor division

  auto operator<=>(const BigInt& o) const { return cmp(o) <=> 0; }
  bool operator==(const BigInt& o) const { return cmp(o) == 0; }

  bool is_zero() const { return limbs_.empty(); }
  std::string str() const;
  std::uint64_t to_u64() const;

 private:
  int cmp(const BigInt& o) const;
  void trim();
  std::vector<std::uint32_t> limbs_;  // little-endian, base 1e9
};

// Multiset coefficient C(e + m - 1, m); C(anything, 0) = 1.
BigInt multiset_coeff(const BigInt& e, int m);

// Matrices (m_{i,j}), 0 <= i <= k, 1 <= j <= n, with sum i*m = k, sum j*m = n.
// Each matrix is returned row-major as (k+1) x n entries.
std::vector<std::vector<int>> p_kn(int k, int n);

struct CountTable {
  int n_max = 0;
  std::vector<BigInt> e, e_prime, e_d;
  std::vector<std::vector<BigInt>> e_k;  // e_k[n][k], 0 <= k < max(n,1)

  const BigInt& ek(int n, int k) const;
};

CountTable count_table(int n_max);

std::string render_count_table(const CountTable& t, const std::string& format);

}  // namespace nqm
