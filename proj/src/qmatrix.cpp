#include "nqm/qmatrix.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <sstream>

#include <json.hpp>

namespace nqm {

namespace {

// Echelon basis with label tracking: each row stores a class value together
// with the label of that value under the linear labeling being built.
struct LabeledSpan {
  struct Row {
    Label val;
    Label lab;
  };
  std::vector<Row> rows;  // pivots strictly decreasing

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

  void clear() { rows.clear(); }
};

Completion completion_unchecked(const QMatrix& m) {
  Completion c;
  c.n = m.n;
  const Mask N = Mask{1} << m.n;
  c.t.assign(std::size_t(N) * N, 0);
  for (Mask r = 1; r < N; ++r) {
    const Mask low = r & (0u - r);
    const Mask rest = r ^ low;
    if (rest == 0) {
      const int i = std::countr_zero(low);
      for (Mask col = 1; col < N; ++col) {
        const Mask cl = col & (0u - col);
        c.at(r, col) = c.at(r, col ^ cl) ^ m.at(i, std::countr_zero(cl));
      }
    } else {
      for (Mask col = 0; col < N; ++col)
        c.at(r, col) = c.at(rest, col) ^ c.at(low, col);
    }
  }
  return c;
}

bool m1_ok(const QMatrix& m) {
  for (int i = 0; i < m.n; ++i) {
    const Label want = m.type == 1 ? m.at(0, i) : 0;
    if (m.at(i, i) != want) return false;
  }
  return true;
}

bool m2_ok(const QMatrix& m) {
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      if (m.at(i, j) != m.at(j, i)) return false;
  return true;
}

bool red_ok(const QMatrix& m) {
  Label bound = 1;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      const Label v = m.at(i, j);
      if (v > bound) return false;
      if (v == bound) bound <<= 1;
    }
  return true;
}

int sym_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // row-major over the upper triangle including the diagonal
  return i * n - i * (i - 1) / 2 + (j - i);
}

// rect(r, c): formal XOR, over the rectangle I_r x I_c, of one symbol per
// unordered matrix position. Mirror pairs cancel; diagonal positions survive.
std::vector<Label> rect_table(int n) {
  const Mask N = Mask{1} << n;
  std::vector<Label> rt(std::size_t(N) * N, 0);
  auto at = [&](Mask r, Mask c) -> Label& { return rt[(std::size_t(r) << n) | c]; };
  for (Mask r = 1; r < N; ++r) {
    const Mask low = r & (0u - r);
    const Mask rest = r ^ low;
    if (rest == 0) {
      const int i = std::countr_zero(low);
      for (Mask col = 1; col < N; ++col) {
        const Mask cl = col & (0u - col);
        at(r, col) = at(r, col ^ cl) ^ (Label{1} << sym_index(n, i, std::countr_zero(cl)));
      }
    } else {
      for (Mask col = 0; col < N; ++col) at(r, col) = at(rest, col) ^ at(low, col);
    }
  }
  return rt;
}

}  // namespace

std::unordered_map<Label, ColSet> Completion::row_dict(Mask r) const {
  std::unordered_map<Label, ColSet> d;
  const Mask N = Mask{1} << n;
  d.reserve(N);
  for (Mask c = 0; c < N; ++c) d[at(r, c)].set(int(c));
  return d;
}

int Completion::row_zeros(Mask r) const {
  int z = 0;
  const Mask N = Mask{1} << n;
  for (Mask c = 0; c < N; ++c) z += at(r, c) == 0;
  return z;
}

Completion completion(const QMatrix& m) {
  if (m.n < 1) throw AxiomError("completion: order must be at least 1");
  if (!m1_ok(m)) throw AxiomError("completion: diagonal rule (M1) violated");
  if (!m2_ok(m)) throw AxiomError("completion: symmetry (M2) violated");
  return completion_unchecked(m);
}

bool common_slot_ok(const Completion& c) {
  const Mask N = Mask{1} << c.n;
  std::vector<std::unordered_map<Label, ColSet>> dicts(N);
  for (Mask r = 0; r < N; ++r) dicts[r] = c.row_dict(r);
  for (Mask a = 1; a < N; ++a)
    for (Mask b = a + 1; b < N; ++b) {
      const auto& da = dicts[a];
      const auto& db = dicts[b];
      const auto& small = da.size() <= db.size() ? da : db;
      const auto& large = da.size() <= db.size() ? db : da;
      for (const auto& [v, cols] : small) {
        auto it = large.find(v);
        if (it != large.end() && !cols.intersects(it->second)) return false;
      }
    }
  return true;
}

AxiomReport check_axioms(const QMatrix& m) {
  AxiomReport r;
  if (m.n < 1) return r;
  r.m1 = m1_ok(m);
  r.m2 = m2_ok(m);
  r.red = red_ok(m);
  r.m3 = common_slot_ok(completion_unchecked(m));
  return r;
}

BrauerPresentation brauer_presentation(const QMatrix& m) {
  Completion c = completion(m);
  if (!common_slot_ok(c)) throw AxiomError("brauer_presentation: common slot (M3) violated");

  const int n = m.n;
  const Mask N = Mask{1} << n;
  const std::vector<Label> rt = rect_table(n);

  // Quotient of the free space on one symbol per matrix position by the
  // relations "equal completion values have equal rectangle sums".
  std::unordered_map<Label, Label> first_rect;
  first_rect.reserve(std::size_t(N) * 2);
  LabelSpan relations;
  for (Mask r = 0; r < N; ++r)
    for (Mask col = 0; col < N; ++col) {
      const Label v = c.at(r, col);
      const Label rect = rt[(std::size_t(r) << n) | col];
      auto [it, fresh] = first_rect.try_emplace(v, rect);
      if (!fresh) relations.insert(rect ^ it->second);
    }

  BrauerPresentation bp;
  bp.qdim = n * (n + 1) / 2 - relations.dim();

  // Greedy 2-Brauer basis from matrix entries in (i,j)-lexicographic order.
  LabeledSpan basis;
  int assigned = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Label beta = relations.reduce(first_rect.at(m.at(i, j)));
      auto [res, lab] = basis.reduce(beta);
      if (res != 0) {
        basis.insert(res, lab ^ (Label{1} << assigned));
        ++assigned;
      }
    }
  if (assigned != bp.qdim)
    throw AxiomError("brauer_presentation: entries do not span the 2-Brauer group");

  bp.relabel.reserve(first_rect.size());
  for (const auto& [v, rect] : first_rect) {
    auto [res, lab] = basis.reduce(relations.reduce(rect));
    if (res != 0) throw AxiomError("brauer_presentation: value outside entry span");
    bp.relabel.emplace(v, lab);
  }
  return bp;
}

int span_dim_entries(const QMatrix& m) { return span_dim(m.e); }

bool is_quaternionic(const QMatrix& m) {
  return brauer_presentation(m).qdim == span_dim_entries(m);
}

QMatrix reduce(const QMatrix& m) {
  const BrauerPresentation bp = brauer_presentation(m);
  QMatrix out(m.n, m.type);
  for (std::size_t k = 0; k < m.e.size(); ++k) out.e[k] = bp.relabel.at(m.e[k]);
  return out;
}

QMatrix apply_swap(const QMatrix& m, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= m.n || j >= m.n)
    throw std::invalid_argument("apply_swap: bad indices");
  if (m.type == 1 && (i == 0 || j == 0))
    throw std::invalid_argument("apply_swap: row 0 is pinned to -1 for type 1");
  QMatrix out = m;
  for (int k = 0; k < m.n; ++k) std::swap(out.at(i, k), out.at(j, k));
  for (int k = 0; k < m.n; ++k) std::swap(out.at(k, i), out.at(k, j));
  return out;
}

QMatrix apply_add(const QMatrix& m, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= m.n || j >= m.n)
    throw std::invalid_argument("apply_add: bad indices");
  if (m.type == 1 && i == 0)
    throw std::invalid_argument("apply_add: row 0 is pinned to -1 for type 1");
  QMatrix out = m;
  for (int k = 0; k < m.n; ++k) {
    if (k == i) continue;
    const Label v = m.at(i, k) ^ m.at(j, k);
    out.at(i, k) = v;
    out.at(k, i) = v;
  }
  out.at(i, i) = m.at(i, i) ^ m.at(j, j);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical (normal) form: backtracking over basis prefixes of S(M).
// ---------------------------------------------------------------------------

namespace {

struct CanonicalSearch {
  int n;
  int type;
  Mask N;
  const Completion* T;
  bool s_gt2 = false;
  int head_count = 0;           // slots [0, head_count) hold a basis of V(b0)
  int tail_start = 0;           // slots [tail_start, n) carry fresh row-0 labels
  Label base_fresh = 1;         // first label beyond the forced first row
  Label v00 = 0;                // completion value at (-1,-1), type 1 only
  std::vector<int> zeros_log;   // log2 of zero count per completion row
  std::vector<Label> forced_row0;

  std::vector<Mask> chosen;
  LabelSpan chosen_span;   // group-element span of the prefix
  LabelSpan gamma_span;    // values T[b0][b_j] over chosen tail slots (+ v00)

  std::vector<Label> best;  // incumbent, full n*n label matrix
  std::vector<Mask> best_basis;
  bool have_best = false;

  // structure automorphisms discovered from tie leaves, stored as full
  // mask maps; used to skip sibling candidates in the same orbit
  std::vector<std::vector<Mask>> autos;

  Label tail_power(int slot) const {
    return Label{1} << (slot - tail_start + (s_gt2 ? 1 : 0));
  }

  Label value(Mask a, Mask b) const { return T->at(a, b); }

  // Walks the undetermined part of the matrix in relabeling order, comparing
  // against the incumbent: 1 = can still win, 0 = exact tie (leaves only),
  // -1 = cannot beat. When `out` is given (leaf), stores exact labels.
  int walk(std::vector<Label>* out) const {
    const int k = int(chosen.size()) - 1;
    LabeledSpan solver;
    if (s_gt2) solver.insert(v00, 1);
    for (int j = tail_start; j <= k; ++j) {
      auto [res, lab] = solver.reduce(value(chosen[0], chosen[j]));
      solver.insert(res, lab ^ tail_power(j));
    }
    const int first_unchosen_tail = std::max(k + 1, tail_start);
    const Label reserved_min = first_unchosen_tail < n ? tail_power(first_unchosen_tail) : 0;

    bool exact = true;
    int fresh_count = 0;
    int verdict = 0;  // 0 tie so far, 1 can win, -1 cannot beat
    for (int i = 1; i < n && (out || verdict == 0); ++i) {
      // a basis holds at most dim V(b_i) elements of V(b_i), which caps the
      // zeros the row can still receive
      int zrem = -1;
      if (i <= k) {
        zrem = zeros_log[chosen[i]];
        for (int j = 0; j < i; ++j)
          if (value(chosen[i], chosen[j]) == 0) --zrem;
      }
      for (int j = i; j < n; ++j) {
        const std::size_t pos = std::size_t(i) * n + j;
        const bool known = j <= k;
        bool have_exact = false;
        Label v = 0;   // exact label
        Label lo = 0;  // lower bound when inexact
        if (known) {
          auto [res, lab] = solver.reduce(value(chosen[i], chosen[j]));
          if (res == 0) {
            have_exact = true;
            v = lab;
            if (v == 0 && zrem >= 0) --zrem;
          } else if (exact && reserved_min == 0) {
            v = base_fresh << fresh_count;
            have_exact = true;
            solver.insert(res, lab ^ v);
            ++fresh_count;
          } else {
            lo = reserved_min != 0 ? reserved_min : (base_fresh << fresh_count);
            exact = false;
          }
        } else {
          exact = false;
          if (zrem == 0) lo = 1;  // no zero capacity left in this row
        }
        if (out) {
          (*out)[pos] = v;
          (*out)[std::size_t(j) * n + i] = v;
        }
        if (!have_best || verdict != 0) continue;
        const Label inc = best[pos];
        if (have_exact) {
          if (v != inc) verdict = v < inc ? 1 : -1;
        } else {
          if (lo != inc) verdict = lo < inc ? 1 : -1;
          if (!known && verdict == 0 && lo == 0 && zrem > 0)
            --zrem;  // an unknown tie at zero consumes row capacity
        }
        if (verdict != 0 && !out) break;
      }
    }
    if (!have_best) return 1;
    return verdict;
  }

  // Linear map sending one basis tuple to another, as a full mask table.
  std::vector<Mask> basis_map(const std::vector<Mask>& from,
                              const std::vector<Mask>& to) const {
    LabeledSpan solver;
    for (int i = 0; i < n; ++i) solver.insert(from[i], Label{1} << i);
    std::vector<Mask> map(N, 0);
    for (Mask x = 0; x < N; ++x) {
      auto [res, tag] = solver.reduce(x);
      (void)res;
      Mask y = 0;
      for (Label t = tag; t; t &= t - 1) y ^= to[std::countr_zero(t)];
      map[x] = y;
    }
    return map;
  }

  void at_leaf() {
    std::vector<Label> mat(std::size_t(n) * n, 0);
    for (int j = 0; j < n; ++j) {
      mat[j] = forced_row0[j];
      mat[std::size_t(j) * n] = forced_row0[j];
    }
    const int verdict = walk(&mat);
    if (verdict == 0) {
      // same matrix from a different basis: a structure automorphism
      autos.push_back(basis_map(best_basis, chosen));
      return;
    }
    if (verdict < 0) return;
    best = std::move(mat);
    best_basis = chosen;
    have_best = true;
  }

  void descend() {
    const int k = int(chosen.size());
    if (k == n) {
      at_leaf();
      return;
    }
    std::vector<Mask> cands;
    if (k < head_count) {
      // basis of V(b0)
      const Mask b0 = chosen[0];
      for (Mask g = 1; g < N; ++g)
        if (value(b0, g) == 0 && !chosen_span.contains(g)) cands.push_back(g);
    } else {
      for (Mask g = 1; g < N; ++g)
        if (!gamma_span.contains(value(chosen[0], g)) && !chosen_span.contains(g))
          cands.push_back(g);
    }

    // Ascending by the would-be entries of the new column against the current
    // gamma solver; drives the greedy first leaf close to the minimum.
    LabeledSpan s0;
    if (s_gt2) s0.insert(v00, 1);
    for (int j = tail_start; j < k; ++j) {
      auto [res, lab] = s0.reduce(value(chosen[0], chosen[j]));
      if (res != 0) s0.insert(res, lab ^ tail_power(j));
    }
    auto key = [&](Mask g) {
      std::vector<Label> ks;
      ks.reserve(k);
      for (int i = 1; i <= k && i < n; ++i) {
        const Mask bi = std::size_t(i) < chosen.size() ? chosen[i] : g;
        auto [res, lab] = s0.reduce(value(bi, g));
        ks.push_back(res == 0 ? lab : (Label{1} << 62) + res);
      }
      return ks;
    };
    std::vector<std::pair<std::vector<Label>, Mask>> order;
    order.reserve(cands.size());
    for (Mask g : cands) order.emplace_back(key(g), g);
    std::sort(order.begin(), order.end());

    // orbit of the already-tried candidates under the prefix-fixing
    // automorphisms discovered so far; orbit members explore identical trees
    std::vector<char> tried_orbit(N, 0);
    auto close_orbit = [&]() {
      std::vector<const std::vector<Mask>*> fixing;
      for (const auto& phi : autos) {
        bool fixes = true;
        for (Mask c : chosen)
          if (phi[c] != c) {
            fixes = false;
            break;
          }
        if (fixes) fixing.push_back(&phi);
      }
      bool grew = true;
      while (grew) {
        grew = false;
        for (Mask x = 1; x < N; ++x) {
          if (!tried_orbit[x]) continue;
          for (const auto* phi : fixing)
            if (!tried_orbit[(*phi)[x]]) {
              tried_orbit[(*phi)[x]] = 1;
              grew = true;
            }
        }
      }
    };

    for (auto& [kk, g] : order) {
      close_orbit();
      if (tried_orbit[g]) continue;
      tried_orbit[g] = 1;
      chosen.push_back(g);
      chosen_span.insert(g);
      const bool tail = k >= tail_start;
      if (tail) gamma_span.insert(value(chosen[0], g));
      if (walk(nullptr) > 0) descend();
      if (tail) {
        gamma_span.clear();
        if (s_gt2) gamma_span.insert(v00);
        for (std::size_t j = tail_start; j + 1 < chosen.size(); ++j)
          gamma_span.insert(value(chosen[0], chosen[j]));
      }
      chosen.pop_back();
      chosen_span.clear();
      for (Mask c : chosen) chosen_span.insert(c);
    }
  }
};

}  // namespace

QMatrix canonical_form(const QMatrix& m) {
  if (m.n < 1) throw AxiomError("canonical_form: order must be at least 1");
  const QMatrix mr = reduce(m);  // validates M1-M3
  if (brauer_presentation(mr).qdim != span_dim_entries(mr))
    throw AxiomError("canonical_form: matrix is not quaternionic");
  if (m.n == 1) return mr;

  CanonicalSearch cs;
  cs.n = m.n;
  cs.type = m.type;
  cs.N = Mask{1} << m.n;
  Completion T = completion(mr);
  cs.T = &T;

  cs.zeros_log.assign(cs.N, 0);
  for (Mask r = 0; r < cs.N; ++r) cs.zeros_log[r] = std::countr_zero(Mask(T.row_zeros(r)));

  std::vector<Mask> b0_candidates;
  int x;
  if (m.type == 1) {
    cs.v00 = T.at(1, 1);
    cs.s_gt2 = cs.v00 != 0;
    x = cs.zeros_log[1];
    b0_candidates.push_back(1);
  } else {
    x = 0;
    for (Mask a = 1; a < cs.N; ++a) x = std::max(x, cs.zeros_log[a]);
    for (Mask a = 1; a < cs.N; ++a)
      if (cs.zeros_log[a] == x) b0_candidates.push_back(a);
  }
  cs.head_count = cs.s_gt2 ? x + 1 : x;
  cs.tail_start = cs.head_count;
  const int d = cs.n - cs.tail_start;
  cs.base_fresh = Label{1} << (d + (cs.s_gt2 ? 1 : 0));

  cs.forced_row0.assign(cs.n, 0);
  if (cs.s_gt2) cs.forced_row0[0] = 1;
  for (int j = cs.tail_start; j < cs.n; ++j) cs.forced_row0[j] = cs.tail_power(j);

  for (Mask b0 : b0_candidates) {
    cs.chosen.assign(1, b0);
    cs.chosen_span.clear();
    cs.chosen_span.insert(b0);
    cs.gamma_span.clear();
    if (cs.s_gt2) cs.gamma_span.insert(cs.v00);
    cs.descend();
  }

  QMatrix out(m.n, m.type);
  out.e = cs.best;
  return out;
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

std::string triangle_body(const QMatrix& m) {
  std::ostringstream os;
  os << '(';
  if (m.n == 1) {
    os << m.at(0, 0);
  } else {
    for (int i = 0; i + 1 < m.n; ++i) {
      if (i) os << "; ";
      for (int j = i + 1; j < m.n; ++j) {
        if (j > i + 1) os << ',';
        os << m.at(i, j);
      }
    }
  }
  os << ')';
  return os.str();
}

std::string format_matrix(const QMatrix& m, MatrixFormat f) {
  if (f == MatrixFormat::Json) {
    nlohmann::json j;
    j["order"] = m.n;
    j["type"] = m.type;
    auto& rows = j["rows"];
    for (int i = 0; i < m.n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int jj = 0; jj < m.n; ++jj) row.push_back(m.at(i, jj));
      rows.push_back(std::move(row));
    }
    return j.dump();
  }
  std::ostringstream os;
  os << "type=" << m.type << '\n';
  if (m.type == 1 && m.n > 1) os << "m00=" << m.at(0, 0) << '\n';
  os << triangle_body(m);
  return os.str();
}

namespace {

std::vector<std::vector<Label>> parse_triangle_rows(const std::string& body) {
  auto open = body.find('(');
  auto close = body.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw ParseError("triangle body must be parenthesized");
  std::string inner = body.substr(open + 1, close - open - 1);
  std::vector<std::vector<Label>> rows;
  std::string chunk;
  std::istringstream is(inner);
  bool trailing_empty_ok = true;
  while (std::getline(is, chunk, ';')) {
    std::vector<Label> row;
    std::string tok;
    std::istringstream rs(chunk);
    while (std::getline(rs, tok, ',')) {
      std::erase_if(tok, [](char c) { return c == ' ' || c == '\t'; });
      if (tok.empty()) throw ParseError("empty entry in triangle row");
      Label v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError("non-integer token '" + tok + "'");
      row.push_back(v);
    }
    if (row.empty()) {
      if (trailing_empty_ok && is.eof()) break;  // tolerate "...; )"
      throw ParseError("empty triangle row");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

QMatrix matrix_from_triangle(const std::string& body, int type, Label m00) {
  auto rows = parse_triangle_rows(body);
  if (rows.empty()) {
    QMatrix m(1, type);
    m.at(0, 0) = type == 1 ? m00 : 0;
    return m;
  }
  const int n = int(rows.size()) + 1;
  for (int i = 0; i + 1 < n; ++i)
    if (int(rows[i].size()) != n - 1 - i)
      throw ParseError("ragged triangle: row " + std::to_string(i));
  QMatrix m(n, type);
  for (int i = 0; i + 1 < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set_sym(i, j, rows[i][j - i - 1]);
  if (type == 1) {
    m.at(0, 0) = m00;
    for (int i = 1; i < n; ++i) m.at(i, i) = m.at(0, i);
  }
  return m;
}

QMatrix parse_matrix(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError("empty matrix text");
  if (text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.contains("order") || !j.contains("type") || !j.contains("rows"))
      throw ParseError("JSON matrix needs order, type, rows");
    const int n = j["order"].get<int>();
    QMatrix m(n, j["type"].get<int>());
    const auto& rows = j["rows"];
    if (int(rows.size()) != n) throw ParseError("JSON rows count mismatch");
    for (int i = 0; i < n; ++i) {
      if (int(rows[i].size()) != n) throw ParseError("JSON ragged row");
      for (int jj = 0; jj < n; ++jj) m.at(i, jj) = rows[i][jj].get<Label>();
    }
    if (!m2_ok(m)) throw ParseError("JSON matrix is not symmetric");
    return m;
  }

  int type = 0;
  bool have_type = false;
  Label m00 = 0;
  bool have_m00 = false;
  std::string body;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string s = line.substr(b, e - b + 1);
    if (s.rfind("type=", 0) == 0) {
      type = std::stoi(s.substr(5));
      have_type = true;
    } else if (s.rfind("m00=", 0) == 0) {
      m00 = std::stoull(s.substr(4));
      have_m00 = true;
    } else if (s.rfind("level=", 0) == 0) {
      const std::string lv = s.substr(6);
      if (lv == "1") {
        type = 0;
        m00 = 0;
      } else if (lv == "2") {
        type = 1;
        m00 = 0;
      } else {
        type = 1;
        m00 = 1;
      }
      have_type = have_m00 = true;
    } else {
      body += s;
    }
  }
  if (!have_type) throw ParseError("missing type header");
  auto rows = parse_triangle_rows(body);
  if (rows.size() == 1 && rows[0].size() == 1 && !have_m00) {
    // single-entry body without m00 header: the 1x1 matrix "(v)"
    QMatrix m(1, type);
    m.at(0, 0) = rows[0][0];
    if (type == 0 && m.at(0, 0) != 0) throw ParseError("type 0 needs zero diagonal");
    return m;
  }
  if (type == 1 && !have_m00 && !rows.empty())
    throw ParseError("type 1 triangle needs an m00= or level= header");
  return matrix_from_triangle(body, type, m00);
}

}  // namespace nqm
