#include "nqm/search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "nqm/structure.hpp"

#ifdef NQM_HAS_OPENMP
#include <omp.h>
#endif

namespace nqm {

std::string SecondRowParams::str() const {
  std::ostringstream os;
  os << '(' << d << ", " << f << ", " << r << ", " << v << ", " << t << ", " << u << ')';
  return os.str();
}

std::map<int, std::size_t> ClassifyResult::counts() const {
  std::map<int, std::size_t> c;
  for (const auto& [k, v] : per_level) c[k] = v.size();
  return c;
}

// ---------------------------------------------------------------------------
// Parameters and seeds
// ---------------------------------------------------------------------------

std::vector<SecondRowParams> enumerate_params(int n, int s_class, Policy policy) {
  if (n < 3) throw std::invalid_argument("enumerate_params: order must be >= 3");
  if (s_class != 1 && s_class != 2 && s_class != 4)
    throw std::invalid_argument("enumerate_params: level class must be 1, 2 or 4");
  std::vector<SecondRowParams> out;
  const bool gt2 = s_class == 4;
  const int d_max = gt2 ? n - 3 : n - 2;
  for (int d = gt2 ? 0 : 1; d <= d_max; ++d)
    for (int f = 1; f <= (gt2 ? 2 : 1); ++f)
      for (int r = 0; r + 2 <= n; ++r) {
        if (f == 2 && r == 0) continue;
        for (int v = d; r + v + 2 <= n; ++v)
          for (int t = 0; t <= d; ++t)
            for (int u = t; u <= d; ++u) {
              if (!gt2 || f == 2) {
                if (t < r) continue;
              } else {
                if (t < r - 1) continue;
              }
              if (!gt2 && 2 * t < r + u) continue;
              if (s_class == 1 && d != n - 1 && t > r + v - d) continue;
              if (n - r - v + t < 2) continue;  // second basis element rigid
              if (policy == Policy::Standard && gt2 && d == n - 3 && f == 1 && r == 1)
                continue;  // level 4 with a 2-rigid -1 is settled
              const SecondRowParams p{s_class, d, f, r, v, t, u};
              // a parameter counts only when its own two seeded rows survive
              // the validity check under the requested policy
              if (!validity_check(seed_rows(n, p), policy)) continue;
              out.push_back(p);
            }
      }
  return out;
}

namespace {

std::pair<std::vector<Label>, std::vector<Label>> seed_row_values(int n,
                                                                  const SecondRowParams& p) {
  const bool gt2 = p.s_class == 4;
  std::vector<Label> r0(n, 0), r1(n, 0);
  const int k1 = n - p.r - p.v - 2;
  if (k1 >= 0) {
    // M01 = 0 layout: blocks B1..B6 over columns 2..n-1
    r0[0] = gt2 ? 1 : 0;
    const int shift = gt2 ? 1 : 0;
    auto pow_at = [&](int idx) { return Label{1} << (idx + shift); };
    int col = 2;
    for (int c = 0; c < k1; ++c) ++col;                       // B1
    for (int c = 0; c < p.r; ++c, ++col)                      // B2
      r1[col] = (gt2 && p.f == 2) ? (Label{2} << c) : (Label{1} << c);
    for (int c = 0; c < p.v - p.d; ++c, ++col)                // B3
      r1[col] = pow_at(p.d + c);
    for (int c = 0; c < p.t; ++c, ++col)                      // B4
      r0[col] = pow_at(c);
    for (int c = 0; c < p.u - p.t; ++c, ++col) {              // B5
      r0[col] = pow_at(p.t + c);
      r1[col] = r0[col];
    }
    for (int c = 0; c < p.d - p.u; ++c, ++col) {              // B6
      r0[col] = pow_at(p.u + c);
      r1[col] = pow_at(p.v + c);
    }
    if (col != n) throw std::invalid_argument("seed_rows: inconsistent block widths");
  } else {
    // M01 != 0 layout: blocks B1-B3 absent, d = v = n-1, r = 0
    if (p.d != n - 1 || p.v != n - 1 || p.r != 0)
      throw std::invalid_argument("seed_rows: bad M01 != 0 parameters");
    const Label c0 = gt2 ? 2 : 1;
    r0[0] = gt2 ? 1 : 0;
    r0[1] = c0;
    r1[0] = c0;
    for (int c = 2; c < n; ++c) r0[c] = (c0 << 1) << (c - 2);
    Label fresh = (c0 << 1) << (n - 3);
    int col = 2;
    for (int c = 0; c < p.t; ++c, ++col) r1[col] = 0;          // B4
    for (int c = 0; c < p.u - p.t; ++c, ++col) r1[col] = r0[col];  // B5
    for (; col < n; ++col) {                                   // B6
      fresh <<= 1;
      r1[col] = fresh;
    }
  }
  // diagonal entries for type 1
  if (p.s_class != 1) r1[1] = r0[1];
  return {std::move(r0), std::move(r1)};
}

}  // namespace

PartialMatrix seed_rows(int n, const SecondRowParams& p) {
  auto [r0, r1] = seed_row_values(n, p);
  PartialMatrix pm;
  pm.n = n;
  pm.type = p.s_class == 1 ? 0 : 1;
  pm.params = p;
  for (int j = 1; j < n; ++j) pm.upper.push_back(r0[j]);
  for (int j = 2; j < n; ++j) pm.upper.push_back(r1[j]);
  if (n >= 4) {
    pm.next_i = 2;
    pm.next_j = 3;
  } else {
    pm.next_i = n;
    pm.next_j = n;
  }
  Label mx = 0;
  for (Label v : pm.upper) mx = std::max(mx, v);
  mx = std::max(mx, r0[0]);
  pm.alpha = 1;
  while (pm.alpha <= mx) pm.alpha <<= 1;
  return pm;
}

SecondRowParams params_of_rows(int n, int s_class, const std::vector<Label>& row0,
                               const std::vector<Label>& row1) {
  SecondRowParams p;
  p.s_class = s_class;
  const bool gt2 = s_class == 4;
  LabelSpan row0_span;
  if (gt2) row0_span.insert(1);
  int d = 0;
  for (int j = 1; j < n; ++j)
    if (row0[j] != 0) {
      ++d;
      row0_span.insert(row0[j]);
    }
  p.d = d;
  if (row0[1] != 0) {
    p.d = n - 1;
    p.v = n - 1;
    p.r = 0;
    p.f = 1;
    int t = 0, u = 0;
    for (int c = 2; c < n && row1[c] == 0; ++c) ++t;
    u = t;
    for (int c = 2 + t; c < n && row1[c] == row0[c]; ++c) ++u;
    p.t = t;
    p.u = u;
    return p;
  }
  int r = 0, v_minus_d = 0, t = 0, u_minus_t = 0;
  for (int c = 2; c < n; ++c) {
    if (row0[c] == 0) {
      if (row1[c] == 0) continue;  // B1
      if (row0_span.contains(row1[c]))
        ++r;  // B2
      else
        ++v_minus_d;  // B3
    } else {
      if (row1[c] == 0)
        ++t;  // B4
      else if (row1[c] == row0[c])
        ++u_minus_t;  // B5
      // else B6
    }
  }
  p.r = r;
  p.v = d + v_minus_d;
  p.t = t;
  p.u = t + u_minus_t;
  p.f = 1;
  if (gt2 && r > 0) {
    for (int c = 2; c < n; ++c)
      if (row0[c] == 0 && row1[c] != 0 && row0_span.contains(row1[c])) {
        p.f = row1[c] == 1 ? 1 : 2;
        break;
      }
  }
  return p;
}

QMatrix PartialMatrix::to_matrix() const {
  if (!complete()) throw std::logic_error("PartialMatrix::to_matrix: incomplete");
  QMatrix m(n, type);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set_sym(i, j, upper[idx++]);
  if (type == 1) {
    if (params.s_class == 4) m.at(0, 0) = 1;
    for (int i = 1; i < n; ++i) m.at(i, i) = m.at(0, i);
  }
  return m;
}

// ---------------------------------------------------------------------------
// The depth-first searcher
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxN = 11;

// Echelon span with label tracking, for the entry-span relabeling.
struct LabeledSpan {
  struct Row {
    Label val;
    Label lab;
  };
  std::vector<Row> rows;

  std::pair<Label, Label> reduce(Label v) const {
    Label lab = 0;
    for (const Row& r : rows) {
      if (v == 0) break;
      if ((v >> top_bit(r.val)) & 1u) {
        v ^= r.val;
        lab ^= r.lab;
      }
    }
    return {v, lab};
  }

  void insert(Label v, Label lab) {
    auto it = rows.begin();
    while (it != rows.end() && top_bit(it->val) > top_bit(v)) ++it;
    rows.insert(it, Row{v, lab});
  }
};

struct Searcher {
  int n = 0;
  Mask N = 0;
  int type = 0;
  SecondRowParams params;
  Policy policy = Policy::Standard;
  PruneMode prune = PruneMode::Full;
  FinalFilter ffilter = FinalFilter::Battery;
  std::pair<int, int> cut{-1, -1};

  Label M[kMaxN][kMaxN] = {};
  std::vector<Label> T;  // completion rows [0, 1<<rows_done)
  int rows_done = 0;
  // per completion row: kernel of the linear map c -> T[r][2^c]
  std::vector<std::vector<Mask>> kernels;
  std::vector<int> zeros;  // 1 << kernel dimension
  int occ[64] = {};
  int pure[64] = {};
  Label alpha = 1;
  std::vector<std::pair<int, int>> positions;  // free positions (i >= 2, i < j)

  // fresh-tail data per completed matrix row: smallest column index from
  // which every entry of the row is independent of its prefix
  int fresh_from[kMaxN] = {};

  std::vector<QMatrix> results;
  std::vector<PartialMatrix> partials;
  std::size_t nodes = 0;

  Label tat(Mask r, Mask c) const { return T[(std::size_t(r) << n) | c]; }
  Label& tat(Mask r, Mask c) { return T[(std::size_t(r) << n) | c]; }

  void place(int i, int j, Label v) {
    M[i][j] = M[j][i] = v;
    for (Label w = v; w; w &= w - 1) ++occ[std::countr_zero(w)];
    if (v && (v & (v - 1)) == 0) ++pure[std::countr_zero(v)];
    if (v == alpha) alpha <<= 1;
  }
  void unplace(int i, int j, Label v, Label old_alpha) {
    M[i][j] = M[j][i] = 0;
    for (Label w = v; w; w &= w - 1) --occ[std::countr_zero(w)];
    if (v && (v & (v - 1)) == 0) --pure[std::countr_zero(v)];
    alpha = old_alpha;
  }

  bool value_unique(Label v) const {
    if (v == 0 || (v & (v - 1)) != 0) return false;
    return occ[std::countr_zero(v)] == 1;
  }

  // Builds the completion block for matrix row i and the row metadata.
  void push_block(int i) {
    const Mask base = Mask{1} << i;
    for (Mask r = base; r < (base << 1); ++r) {
      if (r == base) {
        tat(r, 0) = 0;
        for (Mask c = 1; c < N; ++c) {
          const Mask cl = c & (0u - c);
          tat(r, c) = tat(r, c ^ cl) ^ M[i][std::countr_zero(cl)];
        }
      } else {
        const Mask rest = r ^ base;
        for (Mask c = 0; c < N; ++c) tat(r, c) = tat(rest, c) ^ tat(base, c);
      }
      std::vector<Mask> ker;
      LabeledSpan img;
      for (int c = 0; c < n; ++c) {
        auto [res, dom] = img.reduce(tat(r, Mask{1} << c));
        if (res != 0)
          img.insert(res, dom ^ (Label{1} << c));
        else
          ker.push_back(Mask(dom) ^ (Mask{1} << c));
      }
      zeros.push_back(1 << ker.size());
      kernels.push_back(std::move(ker));
    }
    // fresh-tail info for row i
    LabelSpan s;
    int ff = 0;
    for (int c = 0; c < n; ++c)
      if (!s.insert(M[i][c])) ff = c + 1;
    fresh_from[i] = ff;
    ++rows_done;
  }

  void pop_block() {
    --rows_done;
    const std::size_t keep = std::size_t(1) << rows_done;
    kernels.resize(keep);
    zeros.resize(keep);
  }

  // Common slot for rows a, b: fibers of equal values are kernel cosets, so
  // the property holds iff every mixed kernel vector (x, y) of the pairing
  // (x, y) -> T[a][x] ^ T[b][y] satisfies x ^ y in K_a + K_b.
  bool common_slot_pair(Mask a, Mask b) const {
    LabelSpan w;
    for (Mask k : kernels[a]) w.insert(k);
    for (Mask k : kernels[b]) w.insert(k);
    LabeledSpan d;
    for (int c = 0; c < n; ++c) {
      auto [res, dom] = d.reduce(tat(a, Mask{1} << c));
      if (res != 0) d.insert(res, dom ^ (Label{1} << c));
    }
    for (int c = 0; c < n; ++c) {
      auto [res, dom] = d.reduce(tat(b, Mask{1} << c));
      if (res != 0) {
        d.insert(res, dom ^ (Label{1} << (16 + c)));
      } else {
        const Mask x = Mask(dom & 0xffff);
        const Mask y = Mask(dom >> 16) ^ (Mask{1} << c);
        if (!w.contains(x ^ y)) return false;
      }
    }
    return true;
  }

  // Basis transformations touching only the built rows produce fully known
  // transformed prefixes; a lexicographically smaller one kills the branch.
  // Singles and pairs of simple transformations, relabeled on the fly.
  bool partial_battery_reject(int upto) const {
    const int lo = type == 1 ? 1 : 0;
    struct Op {
      bool swp;
      int i, j;
    };
    std::vector<Op> ops;
    for (int a = lo; a <= upto; ++a)
      for (int b = a + 1; b <= upto; ++b) ops.push_back({true, a, b});
    for (int a = lo; a <= upto; ++a)
      for (int b = 0; b <= upto; ++b)
        if (a != b) ops.push_back({false, a, b});

    std::array<Mask, kMaxN> id{};
    for (int a = 0; a < n; ++a) id[a] = Mask{1} << a;
    auto apply = [](std::array<Mask, kMaxN> m, const Op& op) {
      if (op.swp)
        std::swap(m[op.i], m[op.j]);
      else
        m[op.i] ^= m[op.j];
      return m;
    };
    // transformed entry (a, c): completion lookup for c <= upto, a column of
    // the built rows otherwise
    auto entry = [&](const std::array<Mask, kMaxN>& m, int a, int c) {
      if (c <= upto) return tat(m[a], m[c]);
      Label v = 0;
      for (Mask bits = m[a]; bits; bits &= bits - 1)
        v ^= M[std::countr_zero(bits)][c];
      return v;
    };
    auto beats = [&](const std::array<Mask, kMaxN>& m) {
      LabeledSpan basis;
      Label next = 1;
      for (int a = 0; a <= upto; ++a)
        for (int c = 0; c < n; ++c) {
          auto [res, lab] = basis.reduce(entry(m, a, c));
          if (res != 0) {
            basis.insert(res, lab ^ next);
            lab ^= next;
            next <<= 1;
          }
          if (lab != M[a][c]) return lab < M[a][c];
        }
      return false;
    };

    const bool pairs = upto <= 4;
    for (const Op& o1 : ops) {
      const auto m1 = apply(id, o1);
      if (beats(m1)) return true;
      if (!pairs) continue;
      for (const Op& o2 : ops)
        if (beats(apply(m1, o2))) return true;
    }
    return false;
  }

  // Validity of the completion rows contributed by matrix row i.
  bool block_valid(int i) const {
    const Mask base = Mask{1} << i;
    for (Mask r = base; r < (base << 1); ++r) {
      const int z = zeros[r];
      if (z == int(N)) return false;  // degenerate direction
      if (z < 4) return false;        // rigid or pythagorean
      if (policy == Policy::Standard) {
        if (params.s_class == 1 && z < 8) return false;
        if (params.s_class == 2 && tat(r, 1) == 0 && z < 8) return false;
      }
      for (Mask q = 1; q < r; ++q)
        if (!common_slot_pair(q, r)) return false;
      // first-row maximality: type 0 allows any element in front
      if (type == 0 && z > zeros[1]) return false;
      // second-row minimality: a slot-1 candidate must not beat the seeded
      // a_1 on leading zeros shared with the first row
      if (r >= 3 && M[0][1] == 0 && tat(r, 1) == 0) {
        auto shared_zero_dim = [&](Mask u, Mask v) {
          LabelSpan sum;
          for (Mask k : kernels[u]) sum.insert(k);
          for (Mask k : kernels[v]) sum.insert(k);
          return int(kernels[u].size() + kernels[v].size()) - sum.dim();
        };
        if (shared_zero_dim(1, r) > shared_zero_dim(1, 2)) return false;
      }
    }
    if (prune == PruneMode::Full && i >= 2 && partial_battery_reject(i))
      return false;
    return true;
  }

  // --- candidate generation -------------------------------------------------

  std::vector<Label> gen_candidates(int i, int j) const {
    std::vector<Label> out;
    if (prune == PruneMode::RedOnly) {
      for (Label v = 0; v <= alpha; ++v) out.push_back(v);
      return out;
    }
    // (a)/(b): forbidden top bits from the exclude-factors rules
    std::uint64_t forbidden = 0;
    for (int k = 0; k < i; ++k) {
      if (M[k][j] == 0) continue;
      bool ok = true;
      for (int l = 0; l < j && ok; ++l) {
        if (l == i) continue;
        if (M[k][l] != 0 && !value_unique(M[i][l])) ok = false;
      }
      if (ok) forbidden |= Label{1} << top_bit(M[k][j]);
    }
    for (int l = 0; l < j; ++l) {
      if (M[i][l] == 0) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) {
        if (M[k][l] != 0 && !value_unique(M[k][j])) ok = false;
      }
      if (ok) forbidden |= Label{1} << top_bit(M[i][l]);
    }
    // (d): adjacent-column monotonicity
    Label lower = 0;
    if (j - 1 > i) {
      bool equal_above = true;
      for (int k = 0; k < i && equal_above; ++k) equal_above = M[k][j - 1] == M[k][j];
      if (equal_above) lower = M[i][j - 1];
    }
    // (c): span constraints against completed rows with fresh tails
    struct SpanRule {
      LabelSpan span_k;
      bool force_in_span_i = false;
    };
    LabelSpan span_i;
    for (int l = 0; l < j; ++l) span_i.insert(M[i][l]);
    std::vector<SpanRule> rules;
    for (int k = 0; k < i; ++k) {
      if (fresh_from[k] > j) continue;
      SpanRule rule;
      for (int l = 0; l < j; ++l) rule.span_k.insert(M[k][l]);
      rule.force_in_span_i = span_i.contains(M[k][j]);
      rules.push_back(std::move(rule));
    }

    // nonrigid rows span at most n-2 dimensions (n-3 under the 8-zero cuts);
    // once a row prefix reaches its budget, new entries must stay in its span
    auto rank_bound = [&](int row) {
      int b = n - 2;
      if (policy == Policy::Standard) {
        if (params.s_class == 1) b = n - 3;
        if (params.s_class == 2 && M[row][0] == 0) b = n - 3;
      }
      return b;
    };
    LabelSpan span_j;
    span_j.insert(M[j][j]);
    for (int c = 0; c < i; ++c) span_j.insert(M[j][c]);
    const bool cap_i = span_i.dim() >= rank_bound(i);
    const bool cap_j = span_j.dim() >= rank_bound(j);
    if (span_i.dim() > rank_bound(i) || span_j.dim() > rank_bound(j)) return out;

    // one-step common-slot forcing: if a completed completion row holds a
    // value only at columns supported by the filled part of row i, the slot
    // must already be realizable
    std::vector<Label> pref_xor(std::size_t(2) << j, 0);
    for (Mask x = 1; x < (Mask{2} << j); ++x) {
      const Mask low = x & (0u - x);
      const int c = std::countr_zero(low);
      pref_xor[x] = pref_xor[x ^ low] ^ (c == j ? 0 : M[i][c]);
    }
    std::unordered_map<Label, bool> slot_kill;
    const Mask lowcols = (Mask{2} << j) - 1;
    std::unordered_map<Label, bool> row_ok;
    for (Mask rr = 1; rr < (Mask{1} << rows_done); ++rr) {
      // value fibers are kernel cosets; they stay within the known columns
      // exactly when the kernel does
      bool kernel_low = true;
      for (Mask k : kernels[rr]) kernel_low = kernel_low && (k & ~lowcols) == 0;
      if (!kernel_low) continue;
      row_ok.clear();
      for (Mask x = 0; x <= lowcols; ++x) {
        const Label val = tat(rr, x);
        if (val == 0 || val > alpha) continue;
        const bool ok = ((x >> j) & 1u) ? pref_xor[x] == 0 : pref_xor[x] == val;
        auto [it, fresh] = row_ok.try_emplace(val, ok);
        if (!fresh) it->second = it->second || ok;
      }
      for (const auto& [val, ok] : row_ok)
        if (!ok) slot_kill[val] = true;
    }
    // interchangeable later columns: the candidate must be minimal under the
    // induced label swaps
    struct BitSwap {
      std::uint64_t mask1 = 0, mask2 = 0;  // single-bit masks per affected row
      std::vector<std::pair<int, int>> bits;
    };
    std::vector<std::vector<std::pair<int, int>>> perms;
    for (int j1 = j + 1; j1 < n; ++j1)
      for (int j2 = j1 + 1; j2 < n; ++j2) {
        bool ok = true;
        std::vector<std::pair<int, int>> swaps;
        for (int k = 0; k < i && ok; ++k) {
          const Label a = M[k][j1], b = M[k][j2];
          if (a == b) continue;
          if (value_unique(a) && value_unique(b))
            swaps.emplace_back(std::countr_zero(a), std::countr_zero(b));
          else
            ok = false;
        }
        if (ok && !swaps.empty()) perms.push_back(std::move(swaps));
      }
    auto orbit_min = [&](Label v) {
      for (const auto& swaps : perms) {
        Label w = v;
        for (auto [b1, b2] : swaps) {
          const Label m1 = Label{1} << b1, m2 = Label{1} << b2;
          const bool h1 = w & m1, h2 = w & m2;
          w &= ~(m1 | m2);
          if (h1) w |= m2;
          if (h2) w |= m1;
        }
        if (w < v) return false;
      }
      return true;
    };

    bool any_force = false;
    for (const auto& rule : rules) any_force = any_force || rule.force_in_span_i;

    // candidate pool: the whole capped span when a span restriction is
    // active, otherwise the subsets of the unforbidden bits plus the fresh
    // power
    std::vector<Label> pool;
    if (cap_i || cap_j || any_force) {
      const LabelSpan& base = (cap_i || any_force) ? span_i : span_j;
      pool.push_back(0);
      for (Label r : base.rows()) {
        const std::size_t sz = pool.size();
        for (std::size_t p = 0; p < sz; ++p) pool.push_back(pool[p] ^ r);
      }
      std::sort(pool.begin(), pool.end());
      pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    } else {
      const Label free = (alpha - 1) & ~forbidden;
      Label t = 0;
      while (true) {
        pool.push_back(t);
        if (t == free) break;
        t = (t - free) & free;
      }
      pool.push_back(alpha);
    }

    for (Label v : pool) {
      if (v < lower || v > alpha) continue;
      if (v & forbidden) continue;
      const bool in_i = span_i.contains(v);
      if ((cap_i && !in_i) || (cap_j && !span_j.contains(v))) continue;
      bool ok = true;
      for (const auto& rule : rules) {
        if (rule.span_k.contains(v) && !in_i) ok = false;
        if (rule.force_in_span_i && !in_i) ok = false;
        if (!ok) break;
      }
      if (!ok) continue;
      if (!orbit_min(v)) continue;
      if (auto it = slot_kill.find(v); it != slot_kill.end()) continue;
      out.push_back(v);
    }
    return out;
  }

  // --- completion of a full matrix ------------------------------------------

  QMatrix snapshot() const {
    QMatrix a(n, type);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.at(i, j) = M[i][j];
    return a;
  }

  // Reduced form of a quaternionic matrix: entry-span relabeling in row-major
  // order. Agrees with reduce() whenever the matrix is quaternionic, which
  // every transform of a quaternionic matrix is.
  static QMatrix quick_reduce(const QMatrix& m) {
    LabeledSpan basis;
    Label next = 1;
    QMatrix out(m.n, m.type);
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j) {
        const Label v = m.at(i, j);
        auto [res, lab] = basis.reduce(v);
        if (res != 0) {
          basis.insert(res, lab ^ next);
          lab ^= next;
          next <<= 1;
        }
        out.at(i, j) = lab;
      }
    return out;
  }

  // All single simple transformations plus all products of two, applied with
  // reduction and compared lexicographically. Works on the completed
  // completion table: a transformed basis is a tuple of group masks, the
  // transformed matrix entry is a completion lookup, and since the completed
  // matrix is quaternionic those lookups are faithful class labels. The
  // relabeling walk therefore reproduces reduce() exactly.
  bool battery_reject(const QMatrix& a) const {
    const int lo = type == 1 ? 1 : 0;
    struct Op {
      bool swp;
      int i, j;
    };
    std::vector<Op> ops;
    for (int i = lo; i < n; ++i)
      for (int j = i + 1; j < n; ++j) ops.push_back({true, i, j});
    for (int i = lo; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) ops.push_back({false, i, j});

    std::array<Mask, kMaxN> id{};
    for (int i = 0; i < n; ++i) id[i] = Mask{1} << i;
    auto apply = [](std::array<Mask, kMaxN> m, const Op& op) {
      if (op.swp)
        std::swap(m[op.i], m[op.j]);
      else
        m[op.i] ^= m[op.j];
      return m;
    };
    // reduced matrix of the basis given by masks, compared against ref;
    // fills out when strictly smaller
    auto reduced_less = [&](const std::array<Mask, kMaxN>& m, const QMatrix& ref,
                            QMatrix* out) {
      LabeledSpan basis;
      Label next = 1;
      bool smaller = false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          auto [res, lab] = basis.reduce(tat(m[i], m[j]));
          if (res != 0) {
            basis.insert(res, lab ^ next);
            lab ^= next;
            next <<= 1;
          }
          if (out) out->at(i, j) = lab;
          if (!smaller && lab != ref.at(i, j)) {
            if (lab > ref.at(i, j)) return false;
            smaller = true;
            if (!out) return true;
          }
        }
      return smaller;
    };

    // greedy descent over the one- and two-step neighborhoods; any strict
    // improvement over the reduced incumbent rejects the candidate
    std::array<Mask, kMaxN> cur = id;
    QMatrix cur_red = a;
    bool improved = true;
    bool any = false;
    while (improved) {
      improved = false;
      for (const Op& o1 : ops) {
        const auto m1 = apply(cur, o1);
        QMatrix r1(n, type);
        if (reduced_less(m1, cur_red, &r1)) {
          cur = m1;
          cur_red = std::move(r1);
          improved = any = true;
          break;
        }
        for (const Op& o2 : ops) {
          const auto m2 = apply(m1, o2);
          QMatrix r2(n, type);
          if (reduced_less(m2, cur_red, &r2)) {
            cur = m2;
            cur_red = std::move(r2);
            improved = any = true;
            break;
          }
        }
        if (improved) break;
      }
    }
    return any;
  }

  void finalize() {
    const QMatrix a = snapshot();
    if (quick_reduce(a) != a) return;  // cannot be a reduced quaternionic matrix
    const BrauerPresentation bp = brauer_presentation(a);
    if (bp.qdim != span_dim_entries(a)) return;  // not quaternionic
    for (Label v : a.e)
      if (bp.relabel.at(v) != v) return;  // not reduced
    const int lv = level_from_matrix(a);
    if (params.s_class == 1 && lv != 1) return;
    if (params.s_class == 2 && lv != 2) return;
    if (params.s_class == 4 && lv < 4) return;
    if (ffilter == FinalFilter::Battery && battery_reject(a)) return;
    // definitional normality: the battery only accelerates this rejection
    if (canonical_form(a) != a) return;
    results.push_back(a);
  }

  // --- DFS -------------------------------------------------------------------

  PartialMatrix make_partial(std::size_t filled) const {
    PartialMatrix pm;
    pm.n = n;
    pm.type = type;
    pm.params = params;
    for (int j = 1; j < n; ++j) pm.upper.push_back(M[0][j]);
    for (int j = 2; j < n; ++j) pm.upper.push_back(M[1][j]);
    for (std::size_t p = 0; p < filled; ++p)
      pm.upper.push_back(M[positions[p].first][positions[p].second]);
    if (filled >= positions.size()) {
      pm.next_i = n;
      pm.next_j = n;
    } else {
      pm.next_i = positions[filled].first;
      pm.next_j = positions[filled].second;
    }
    pm.alpha = alpha;
    return pm;
  }

  void dfs(std::size_t idx) {
    ++nodes;
    if (idx == positions.size()) {
      finalize();
      return;
    }
    const auto [i, j] = positions[idx];
    const bool at_cut = cut.first == i && cut.second == j;
    const bool row_ends = j == n - 1;
    const int target_rows = (idx + 1 == positions.size()) ? n : positions[idx + 1].first;
    for (Label v : gen_candidates(i, j)) {
      const Label old_alpha = alpha;
      place(i, j, v);
      bool ok = true;
      int built = 0;
      if (row_ends) {
        while (rows_done < target_rows && ok) {
          push_block(rows_done);
          ++built;
          ok = block_valid(rows_done - 1);
        }
      }
      if (ok) {
        if (at_cut)
          partials.push_back(make_partial(idx + 1));
        else
          dfs(idx + 1);
      }
      while (built-- > 0) pop_block();
      unplace(i, j, v, old_alpha);
    }
  }

  // Initializes from a partial matrix; returns false if a completed block
  // fails the validity check.
  bool init(const PartialMatrix& pm) {
    n = pm.n;
    N = Mask{1} << n;
    type = pm.type;
    params = pm.params;
    T.assign(std::size_t(N) * N, 0);
    // completion row 0 is identically zero: its kernel is the whole space
    std::vector<Mask> full_kernel;
    for (int c = 0; c < n; ++c) full_kernel.push_back(Mask{1} << c);
    kernels.assign(1, std::move(full_kernel));
    zeros.assign(1, int(N));
    rows_done = 0;  // matrix rows with a built completion block
    if (type == 1 && params.s_class == 4) M[0][0] = 1;
    std::size_t idx = 0;
    std::vector<std::pair<int, int>> all_upper;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) all_upper.emplace_back(i, j);
    if (pm.upper.size() > all_upper.size())
      throw std::invalid_argument("partial matrix has too many entries");
    for (; idx < pm.upper.size(); ++idx) {
      auto [i, j] = all_upper[idx];
      place(i, j, pm.upper[idx]);
    }
    // the (red) bound covers every entry seen so far, including the diagonal
    Label mx = M[0][0];
    for (std::size_t k = 0; k < pm.upper.size(); ++k) mx = std::max(mx, pm.upper[k]);
    alpha = 1;
    while (alpha <= mx) alpha <<= 1;
    if (alpha != pm.alpha)
      throw CheckpointError("partial matrix tracker mismatch: alpha " +
                            std::to_string(alpha) + " != " + std::to_string(pm.alpha));
    // remaining diagonal entries follow from the first row
    if (type == 1)
      for (int i = 1; i < n; ++i) M[i][i] = M[0][i];
    // positions list: strictly upper with i >= 2
    positions.clear();
    for (int i = 2; i + 1 < n; ++i)
      for (int j = i + 1; j < n; ++j) positions.emplace_back(i, j);
    // next position must match
    std::size_t start = 0;
    if (pm.complete()) {
      start = positions.size();
    } else {
      bool found = false;
      for (std::size_t p = 0; p < positions.size(); ++p)
        if (positions[p] == std::make_pair(pm.next_i, pm.next_j)) {
          start = p;
          found = true;
          break;
        }
      if (!found) throw std::invalid_argument("partial matrix has a bad next position");
    }
    start_idx = start;
    // build the completion blocks for all complete matrix rows
    const int complete_rows = pm.complete() ? n : pm.next_i;
    for (int i = 0; i < complete_rows; ++i) {
      push_block(i);
      if (!block_valid(i)) return false;
    }
    return true;
  }

  std::size_t start_idx = 0;

  void run() {
    if (start_idx == positions.size() && cut.first < 0)
      finalize();
    else if (start_idx == positions.size())
      partials.push_back(make_partial(positions.size()));
    else
      dfs(start_idx);
  }
};

}  // namespace

PartialMatrix partial_from_matrix(const QMatrix& m) {
  PartialMatrix pm;
  pm.n = m.n;
  pm.type = m.type;
  pm.params.s_class = m.type == 0 ? 1 : (m.at(0, 0) == 0 ? 2 : 4);
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) pm.upper.push_back(m.at(i, j));
  pm.next_i = m.n;
  pm.next_j = m.n;
  Label mx = m.at(0, 0);
  for (Label v : pm.upper) mx = std::max(mx, v);
  pm.alpha = 1;
  while (pm.alpha <= mx) pm.alpha <<= 1;
  return pm;
}

std::vector<Label> candidates(const PartialMatrix& pm, PruneMode mode) {
  if (pm.complete()) return {};
  Searcher s;
  s.prune = mode;
  s.policy = Policy::None;
  if (!s.init(pm)) return {};
  return s.gen_candidates(pm.next_i, pm.next_j);
}

bool validity_check(const PartialMatrix& pm, Policy policy) {
  Searcher s;
  s.policy = policy;
  return s.init(pm);
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

namespace {

struct Task {
  int s_class;
  SecondRowParams params;
};

struct TaskOutput {
  std::vector<QMatrix> results;
  std::vector<PartialMatrix> partials;
  ParamTiming timing;
};

TaskOutput run_task(int n, const Task& task, const ClassifyOptions& opt,
                    std::pair<int, int> cut) {
  TaskOutput out;
  out.timing.params = task.params;
  const auto t0 = std::chrono::steady_clock::now();
  Searcher s;
  s.policy = opt.policy;
  s.prune = opt.prune;
  s.ffilter = opt.final_filter;
  s.cut = cut;
  if (s.init(seed_rows(n, task.params))) s.run();
  out.results = std::move(s.results);
  out.partials = std::move(s.partials);
  out.timing.nodes = s.nodes;
  out.timing.results = out.results.size();
  out.timing.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

TaskOutput run_resume_task(const PartialMatrix& pm, const ClassifyOptions& opt) {
  TaskOutput out;
  out.timing.params = pm.params;
  const auto t0 = std::chrono::steady_clock::now();
  Searcher s;
  s.policy = opt.policy;
  s.prune = opt.prune;
  s.ffilter = opt.final_filter;
  if (s.init(pm)) s.run();
  out.results = std::move(s.results);
  out.timing.nodes = s.nodes;
  out.timing.results = out.results.size();
  out.timing.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ClassifyResult merge_outputs(const std::vector<int>& classes,
                             const std::vector<Task>& tasks,
                             std::vector<TaskOutput>& outs) {
  ClassifyResult r;
  for (int s : classes) r.per_level[s];
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto& dst = r.per_level[tasks[i].s_class];
    for (auto& m : outs[i].results) dst.push_back(std::move(m));
    r.timings.push_back(outs[i].timing);
  }
  for (auto& [lvl, vec] : r.per_level) {
    std::sort(vec.begin(), vec.end());
    vec.erase(std::unique(vec.begin(), vec.end()), vec.end());
  }
  return r;
}

std::vector<Task> build_tasks(int n, const std::vector<int>& s_classes, Policy policy) {
  std::vector<int> classes = s_classes;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::vector<Task> tasks;
  for (int s : classes)
    for (const auto& p : enumerate_params(n, s, policy)) tasks.push_back({s, p});
  return tasks;
}

}  // namespace

ClassifyResult classify_serial(int n, const std::vector<int>& s_classes,
                               const ClassifyOptions& opt) {
  const auto tasks = build_tasks(n, s_classes, opt.policy);
  std::vector<TaskOutput> outs(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i)
    outs[i] = run_task(n, tasks[i], opt, {-1, -1});
  return merge_outputs(s_classes, tasks, outs);
}

ClassifyResult classify(int n, const std::vector<int>& s_classes,
                        const ClassifyOptions& opt) {
#ifdef NQM_HAS_OPENMP
  if (opt.workers > 1) {
    const auto tasks = build_tasks(n, s_classes, opt.policy);
    std::vector<TaskOutput> outs(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(opt.workers)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(tasks.size()); ++i)
      outs[i] = run_task(n, tasks[i], opt, {-1, -1});
    return merge_outputs(s_classes, tasks, outs);
  }
#endif
  return classify_serial(n, s_classes, opt);
}

Checkpoint partition(int n, const std::vector<int>& s_classes,
                     const ClassifyOptions& opt, std::pair<int, int> until) {
  Checkpoint cp;
  cp.n = n;
  cp.s_classes = s_classes;
  cp.policy = opt.policy;
  cp.until = until;
  const auto tasks = build_tasks(n, s_classes, opt.policy);
  for (const auto& task : tasks) {
    TaskOutput out = run_task(n, task, opt, until);
    for (auto& pm : out.partials) cp.records.push_back(std::move(pm));
  }
  return cp;
}

ClassifyResult resume(const Checkpoint& cp, const ClassifyOptions& opt) {
  ClassifyOptions o = opt;
  o.policy = cp.policy;
  std::vector<Task> tasks;
  std::vector<TaskOutput> outs(cp.records.size());
  for (const auto& pm : cp.records) tasks.push_back({pm.params.s_class, pm.params});
#ifdef NQM_HAS_OPENMP
  if (o.workers > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(o.workers)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(cp.records.size()); ++i)
      outs[i] = run_resume_task(cp.records[i], o);
  } else
#endif
  {
    for (std::size_t i = 0; i < cp.records.size(); ++i)
      outs[i] = run_resume_task(cp.records[i], o);
  }
  return merge_outputs(cp.s_classes, tasks, outs);
}

// ---------------------------------------------------------------------------
// Checkpoint files: one JSON object per line, versioned header
// ---------------------------------------------------------------------------

void write_checkpoint(const Checkpoint& cp, std::ostream& os) {
  nlohmann::json h;
  h["kind"] = "nqm-checkpoint";
  h["format_version"] = cp.version;
  h["order"] = cp.n;
  h["levels"] = cp.s_classes;
  h["policy"] = policy_name(cp.policy);
  h["until"] = {cp.until.first, cp.until.second};
  os << h.dump() << '\n';
  for (const auto& pm : cp.records) {
    nlohmann::json j;
    j["s_class"] = pm.params.s_class;
    j["params"] = {pm.params.d, pm.params.f, pm.params.r,
                   pm.params.v, pm.params.t, pm.params.u};
    j["entries_row_major"] = pm.upper;
    j["next_pos"] = {pm.next_i, pm.next_j};
    j["alpha"] = pm.alpha;
    os << j.dump() << '\n';
  }
}

Checkpoint read_checkpoint(std::istream& is) {
  Checkpoint cp;
  std::string line;
  if (!std::getline(is, line)) throw CheckpointError("empty checkpoint file");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("bad header: ") + e.what());
  }
  if (h.value("kind", "") != "nqm-checkpoint")
    throw CheckpointError("not a checkpoint file");
  if (h.value("format_version", -1) != 1)
    throw CheckpointError("format version mismatch");
  cp.version = 1;
  cp.n = h["order"].get<int>();
  cp.s_classes = h["levels"].get<std::vector<int>>();
  cp.policy = parse_policy(h["policy"].get<std::string>());
  cp.until = {h["until"][0].get<int>(), h["until"][1].get<int>()};
  std::size_t rec = 0;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      PartialMatrix pm;
      pm.n = cp.n;
      pm.params.s_class = j["s_class"].get<int>();
      pm.type = pm.params.s_class == 1 ? 0 : 1;
      const auto& p = j["params"];
      pm.params.d = p[0].get<int>();
      pm.params.f = p[1].get<int>();
      pm.params.r = p[2].get<int>();
      pm.params.v = p[3].get<int>();
      pm.params.t = p[4].get<int>();
      pm.params.u = p[5].get<int>();
      pm.upper = j["entries_row_major"].get<std::vector<Label>>();
      pm.next_i = j["next_pos"][0].get<int>();
      pm.next_j = j["next_pos"][1].get<int>();
      pm.alpha = j["alpha"].get<Label>();
      // tracker verification: recompute alpha from the entries
      Label mx = pm.params.s_class == 4 ? 1 : 0;
      for (Label v : pm.upper) mx = std::max(mx, v);
      Label want = 1;
      while (want <= mx) want <<= 1;
      if (want != pm.alpha)
        throw CheckpointError("record " + std::to_string(rec) + ": tracker mismatch");
      cp.records.push_back(std::move(pm));
    } catch (const CheckpointError&) {
      throw;
    } catch (const std::exception& e) {
      throw CheckpointError("record " + std::to_string(rec) + ": " + e.what());
    }
    ++rec;
  }
  return cp;
}

std::string render_timings_tsv(const ClassifyResult& r) {
  std::ostringstream os;
  os << "s_class\tparams\tseconds\tresults\tnodes\n";
  for (const auto& t : r.timings)
    os << t.params.s_class << '\t' << t.params.str() << '\t' << t.seconds << '\t'
       << t.results << '\t' << t.nodes << '\n';
  return os.str();
}

}  // namespace nqm
