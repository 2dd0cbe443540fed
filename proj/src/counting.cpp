#include "nqm/counting.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nqm {

namespace {
constexpr std::uint32_t kBase = 1000000000u;
}

BigInt::BigInt(std::uint64_t v) {
  while (v) {
    limbs_.push_back(std::uint32_t(v % kBase));
    v /= kBase;
  }
}

void BigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

int BigInt::cmp(const BigInt& o) const {
  if (limbs_.size() != o.limbs_.size())
    return limbs_.size() < o.limbs_.size() ? -1 : 1;
  for (std::size_t i = limbs_.size(); i-- > 0;)
    if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
  return 0;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  r.limbs_.resize(std::max(limbs_.size(), o.limbs_.size()) + 1, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
    std::uint64_t s = carry;
    if (i < limbs_.size()) s += limbs_[i];
    if (i < o.limbs_.size()) s += o.limbs_[i];
    r.limbs_[i] = std::uint32_t(s % kBase);
    carry = s / kBase;
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const {
  if (cmp(o) < 0) throw std::underflow_error("BigInt subtraction underflow");
  BigInt r;
  r.limbs_ = limbs_;
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
    std::int64_t s = std::int64_t(r.limbs_[i]) - borrow -
                     (i < o.limbs_.size() ? std::int64_t(o.limbs_[i]) : 0);
    borrow = 0;
    if (s < 0) {
      s += kBase;
      borrow = 1;
    }
    r.limbs_[i] = std::uint32_t(s);
  }
  r.trim();
  return r;
}

BigInt BigInt::operator*(const BigInt& o) const {
  if (is_zero() || o.is_zero()) return BigInt();
  BigInt r;
  r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < o.limbs_.size() || carry; ++j) {
      std::uint64_t cur = r.limbs_[i + j] + carry;
      if (j < o.limbs_.size())
        cur += std::uint64_t(limbs_[i]) * o.limbs_[j];
      r.limbs_[i + j] = std::uint32_t(cur % kBase);
      carry = cur / kBase;
    }
  }
  r.trim();
  return r;
}

BigInt BigInt::div_small(std::uint32_t d) const {
  BigInt r;
  r.limbs_.assign(limbs_.size(), 0);
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    std::uint64_t cur = rem * kBase + limbs_[i];
    r.limbs_[i] = std::uint32_t(cur / d);
    rem = cur % d;
  }
  r.trim();
  return r;
}

std::string BigInt::str() const {
  if (limbs_.empty()) return "0";
  std::ostringstream os;
  os << limbs_.back();
  for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
    std::string s = std::to_string(limbs_[i]);
    os << std::string(9 - s.size(), '0') << s;
  }
  return os.str();
}

std::uint64_t BigInt::to_u64() const {
  std::uint64_t v = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
  return v;
}

BigInt multiset_coeff(const BigInt& e, int m) {
  if (m == 0) return BigInt(1);
  if (e.is_zero()) return BigInt(0);
  // C(e + m - 1, m) = prod_{t=1..m} (e - 1 + t) / t
  BigInt r(1);
  for (int t = 1; t <= m; ++t) {
    r = r * (e - BigInt(1) + BigInt(std::uint64_t(t)));
    r = r.div_small(std::uint32_t(t));
  }
  return r;
}

namespace {

void p_kn_rec(int k, int n, int i, int j, int rem_k, int rem_n,
              std::vector<int>& cells, std::vector<std::vector<int>>& out) {
  if (j > n) {
    ++i;
    j = 1;
  }
  if (i > k) {
    if (rem_k == 0 && rem_n == 0) out.push_back(cells);
    return;
  }
  int max_m = rem_n / j;
  if (i > 0) max_m = std::min(max_m, rem_k / i);
  for (int m = 0; m <= max_m; ++m) {
    cells[std::size_t(i) * n + (j - 1)] = m;
    p_kn_rec(k, n, i, j + 1, rem_k - i * m, rem_n - j * m, cells, out);
  }
  cells[std::size_t(i) * n + (j - 1)] = 0;
}

}  // namespace

std::vector<std::vector<int>> p_kn(int k, int n) {
  std::vector<std::vector<int>> out;
  if (n < 1) {
    if (k == 0 && n == 0) out.push_back({});
    return out;
  }
  std::vector<int> cells(std::size_t(k + 1) * n, 0);
  p_kn_rec(k, n, 0, 1, k, n, cells, out);
  return out;
}

const BigInt& CountTable::ek(int n, int k) const {
  static const BigInt zero;
  if (n < 0 || n > n_max) throw std::out_of_range("CountTable::ek");
  if (k < 0 || k >= int(e_k[n].size())) return zero;
  return e_k[n][k];
}

CountTable count_table(int n_max) {
  CountTable t;
  t.n_max = n_max;
  const int N = n_max;
  t.e.assign(N + 1, BigInt());
  t.e_prime.assign(N + 1, BigInt());
  t.e_d.assign(N + 1, BigInt());
  t.e_k.assign(N + 1, {});
  for (int n = 0; n <= N; ++n) t.e_k[n].assign(std::max(n, 1), BigInt());

  // ebar[k][n]: indecomposable strictly k-rigid nondegenerate counts
  std::vector<std::vector<BigInt>> ebar(N + 1, std::vector<BigInt>(N + 1, BigInt()));
  std::vector<BigInt> ebar_prime(N + 1, BigInt());  // type-0 indecomposables

  auto ek = [&](int n, int k) -> BigInt& { return t.e_k[n][k]; };

  for (int n = 0; n <= N; ++n) {
    // strictly 0-rigid (pythagorean) -------------------------------------
    if (n <= 2) {
      ek(n, 0) = BigInt(1);
      if (n == 1) ebar[0][1] = BigInt(1);
    } else {
      ebar[0][n] = ek(n - 1, 0);
      BigInt sum;
      for (const auto& m : p_kn(0, n)) {
        BigInt prod(1);
        for (int j = 1; j <= n; ++j) prod = prod * multiset_coeff(ebar[0][j], m[j - 1]);
        sum = sum + prod;
      }
      ek(n, 0) = sum;
    }

    // strictly 1-rigid ----------------------------------------------------
    if (n == 2) {
      ek(2, 1) = BigInt(2);
      ebar[1][2] = BigInt(2);
    } else if (n > 2) {
      ebar[1][n] = t.e[n - 1] - ek(n - 1, 0);  // e_Delta(n) - ebar_0(n)
      BigInt sum;
      for (int j = 2; j <= n; ++j) sum = sum + ebar[1][j] * ek(n - j, 0);
      ek(n, 1) = sum;
    }

    // strictly k-rigid for k >= 2 ------------------------------------------
    for (int k = 2; k < n; ++k) {
      if (k + 1 == n) ebar[k][n] = BigInt(n % 2 == 0 ? 2 : 1);
      if (n > 2) {
        BigInt sum;
        for (const auto& m : p_kn(k, n)) {
          BigInt prod(1);
          for (int i = 0; i <= k && !prod.is_zero(); ++i)
            for (int j = 1; j <= n && !prod.is_zero(); ++j)
              prod = prod * multiset_coeff(ebar[i][j], m[std::size_t(i) * n + (j - 1)]);
          sum = sum + prod;
        }
        ek(n, k) = sum;
      }
    }

    // degenerate ------------------------------------------------------------
    if (n == 0)
      t.e_d[0] = BigInt(0);
    else if (n == 1)
      t.e_d[1] = BigInt(2);
    else
      t.e_d[n] = t.e[n - 1] + t.e_prime[n - 1] - t.e_prime[n - 2];

    // total -----------------------------------------------------------------
    BigInt total = t.e_d[n];
    for (int k = 0; k < std::max(n, 1); ++k) total = total + ek(n, k);
    t.e[n] = total;

    // structures with -1 = 1 -------------------------------------------------
    if (n == 0) {
      t.e_prime[0] = BigInt(1);
      ebar_prime[0] = BigInt(0);
    } else {
      if (n == 1)
        ebar_prime[1] = BigInt(0);
      else
        ebar_prime[n] = t.e_prime[n - 1] + BigInt((n % 2 == 0 && n >= 4) ? 1 : 0);
      BigInt h;
      for (const auto& m : p_kn(0, n)) {
        BigInt prod(1);
        for (int j = 1; j <= n && !prod.is_zero(); ++j)
          prod = prod * multiset_coeff(ebar_prime[j], m[j - 1]);
        h = h + prod;
      }
      t.e_prime[n] = t.e_prime[n - 1] + h;
    }
  }
  return t;
}

std::string render_count_table(const CountTable& t, const std::string& format) {
  const char sep = format == "csv" ? ',' : '\t';
  std::ostringstream os;
  if (format == "json") {
    os << "{";
    auto row = [&](const std::string& name, auto get) {
      os << '"' << name << "\":[";
      for (int n = 0; n <= t.n_max; ++n) os << (n ? "," : "") << get(n);
      os << "]";
    };
    row("e", [&](int n) { return t.e[n].str(); });
    os << ',';
    row("e_prime", [&](int n) { return t.e_prime[n].str(); });
    os << ',';
    row("e_d", [&](int n) { return t.e_d[n].str(); });
    for (int k = 0; k < std::max(t.n_max, 1); ++k) {
      os << ',';
      row("e_" + std::to_string(k), [&](int n) { return t.ek(n, k).str(); });
    }
    os << "}";
    return os.str();
  }
  os << "n";
  for (int n = 0; n <= t.n_max; ++n) os << sep << n;
  os << "\ne(n)";
  for (int n = 0; n <= t.n_max; ++n) os << sep << t.e[n].str();
  os << "\ne'(n)";
  for (int n = 0; n <= t.n_max; ++n) os << sep << t.e_prime[n].str();
  os << "\ne_d(n)";
  for (int n = 0; n <= t.n_max; ++n) os << sep << t.e_d[n].str();
  for (int k = 0; k < std::max(t.n_max, 1); ++k) {
    os << "\ne_" << k << "(n)";
    for (int n = 0; n <= t.n_max; ++n) os << sep << t.ek(n, k).str();
  }
  os << "\n";
  return os.str();
}

}  // namespace nqm
