#include "nqm/spec_ast.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace nqm {

using Kind = StructureSpec::Kind;
using LV = StructureSpec::LocalVariant;

int order_of(const StructureSpec& s) {
  switch (s.kind) {
    case Kind::L0:
      return 0;
    case Kind::L10:
    case Kind::L11:
    case Kind::L1:
      return 1;
    case Kind::Local:
      return s.local_n;
    case Kind::Delta:
      return order_of(s.children[0]) + 1;
    case Kind::Product: {
      int n = 0;
      for (const auto& c : s.children) n += order_of(c);
      return n;
    }
  }
  return 0;
}

namespace {

int kind_rank(const StructureSpec& s) {
  switch (s.kind) {
    case Kind::L0: return 0;
    case Kind::L1: return 1;
    case Kind::L10: return 2;
    case Kind::L11: return 3;
    case Kind::Local: return 4;
    case Kind::Delta: return 5;
    case Kind::Product: return 6;
  }
  return 7;
}

int spec_cmp(const StructureSpec& a, const StructureSpec& b) {
  if (int c = order_of(a) - order_of(b); c != 0) return c;
  if (int c = kind_rank(a) - kind_rank(b); c != 0) return c;
  if (a.kind == Kind::Local) {
    if (int c = a.local_n - b.local_n; c != 0) return c;
    return int(a.local_variant) - int(b.local_variant);
  }
  for (std::size_t i = 0; i < a.children.size() && i < b.children.size(); ++i)
    if (int c = spec_cmp(a.children[i], b.children[i]); c != 0) return c;
  return int(a.children.size()) - int(b.children.size());
}

}  // namespace

bool spec_less(const StructureSpec& a, const StructureSpec& b) {
  return spec_cmp(a, b) < 0;
}

StructureSpec canonicalize(const StructureSpec& s) {
  switch (s.kind) {
    case Kind::L0:
    case Kind::L10:
    case Kind::L11:
    case Kind::L1:
    case Kind::Local:
      return s;
    case Kind::Delta: {
      StructureSpec c = canonicalize(s.children[0]);
      if (c.kind == Kind::L0) return StructureSpec::atom(Kind::L10);
      if (c.kind == Kind::L1)
        return StructureSpec::product(
            {StructureSpec::atom(Kind::L1), StructureSpec::atom(Kind::L1)});
      return StructureSpec::delta(std::move(c));
    }
    case Kind::Product: {
      std::vector<StructureSpec> flat;
      for (const auto& ch : s.children) {
        StructureSpec c = canonicalize(ch);
        if (c.kind == Kind::L0) continue;
        if (c.kind == Kind::Product)
          for (auto& g : c.children) flat.push_back(std::move(g));
        else
          flat.push_back(std::move(c));
      }
      if (flat.empty()) return StructureSpec::atom(Kind::L0);
      if (flat.size() == 1) return flat[0];
      std::sort(flat.begin(), flat.end(), spec_less);
      return StructureSpec::product(std::move(flat));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Parsing and formatting
// ---------------------------------------------------------------------------

namespace {

struct SpecParser {
  const std::string& t;
  std::size_t pos = 0;

  explicit SpecParser(const std::string& text) : t(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("spec parse error at position " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos < t.size() && t[pos] == c;
  }

  int read_number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos == start) fail("expected a number");
    return std::stoi(t.substr(start, pos - start));
  }

  StructureSpec parse_expr() {
    StructureSpec first = parse_term();
    std::vector<StructureSpec> factors{std::move(first)};
    while (true) {
      skip_ws();
      if (pos < t.size() && (t[pos] == 'x' || t[pos] == 'X' || t[pos] == '*')) {
        ++pos;
        factors.push_back(parse_term());
      } else {
        break;
      }
    }
    if (factors.size() == 1) return std::move(factors[0]);
    return StructureSpec::product(std::move(factors));
  }

  StructureSpec parse_term() {
    skip_ws();
    StructureSpec base;
    if (peek_is('(')) {
      ++pos;
      base = parse_expr();
      skip_ws();
      if (!peek_is(')')) fail("expected ')'");
      ++pos;
    } else {
      base = parse_atom();
    }
    while (true) {
      skip_ws();
      if (pos < t.size() && t[pos] == 'D') {
        ++pos;
        int k = 1;
        skip_ws();
        if (pos < t.size() && (t[pos] == '_' || std::isdigit(static_cast<unsigned char>(t[pos])))) {
          if (t[pos] == '_') ++pos;
          k = read_number();
        }
        for (int i = 0; i < k; ++i) base = StructureSpec::delta(std::move(base));
      } else {
        break;
      }
    }
    return base;
  }

  StructureSpec parse_atom() {
    skip_ws();
    if (pos >= t.size() || t[pos] != 'L') fail("expected an atom starting with 'L'");
    ++pos;
    const int n = read_number();
    if (pos < t.size() && t[pos] == ',') {
      ++pos;
      const int eps = read_number();
      if (eps != 0 && eps != 1) fail("local variant must be 0 or 1");
      if (n < 4 || n % 2 != 0) fail("local type L<n>,<e> needs even n >= 4");
      return StructureSpec::local(n, eps == 0 ? LV::Even0 : LV::Even1);
    }
    switch (n) {
      case 0: return StructureSpec::atom(Kind::L0);
      case 1: return StructureSpec::atom(Kind::L1);
      case 10: return StructureSpec::atom(Kind::L10);
      case 11: return StructureSpec::atom(Kind::L11);
      default:
        if (n >= 3 && n % 2 == 1) return StructureSpec::local(n, LV::Odd);
        fail("even local types need a ,0 or ,1 suffix");
    }
  }
};

void format_rec(const StructureSpec& s, std::ostringstream& os) {
  switch (s.kind) {
    case Kind::L0: os << "L0"; return;
    case Kind::L10: os << "L10"; return;
    case Kind::L11: os << "L11"; return;
    case Kind::L1: os << "L1"; return;
    case Kind::Local:
      os << 'L' << s.local_n;
      if (s.local_variant == LV::Even0) os << ",0";
      if (s.local_variant == LV::Even1) os << ",1";
      return;
    case Kind::Delta: {
      int k = 1;
      const StructureSpec* c = &s.children[0];
      while (c->kind == Kind::Delta) {
        ++k;
        c = &c->children[0];
      }
      if (c->kind == Kind::Product) {
        os << '(';
        format_rec(*c, os);
        os << ')';
      } else {
        format_rec(*c, os);
      }
      os << 'D';
      if (k > 1) os << '_' << k;
      return;
    }
    case Kind::Product: {
      for (std::size_t i = 0; i < s.children.size(); ++i) {
        if (i) os << " x ";
        format_rec(s.children[i], os);
      }
      return;
    }
  }
}

}  // namespace

StructureSpec parse_spec(const std::string& text) {
  SpecParser p(text);
  StructureSpec s = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return canonicalize(s);
}

std::string format_spec(const StructureSpec& s) {
  std::ostringstream os;
  format_rec(s, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation to quaternionic matrices
// ---------------------------------------------------------------------------

namespace {

QMatrix local_matrix(int n, LV v) {
  auto antidiag = [](QMatrix& m, int lo, int hi) {
    for (int i = lo; i <= hi; ++i) m.set_sym(i, lo + hi - i, 1);
  };
  if (v == LV::Even0) {
    QMatrix m(n, 0);
    antidiag(m, 0, n - 1);
    return m;
  }
  if (v == LV::Even1) {
    QMatrix m(n, 1);
    m.set_sym(0, n - 1, 1);
    antidiag(m, 1, n - 2);
    m.at(n - 1, n - 1) = 1;
    return m;
  }
  QMatrix m(n, 1);
  m.at(0, 0) = 1;
  antidiag(m, 1, n - 1);
  return m;
}

constexpr int kPairShift = 32;

// Group extension S[x]: quaternions become pairs (old label, group element).
QMatrix eval_delta(const QMatrix& a) {
  const int m = a.n;
  QMatrix out(m + 1, a.type);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.at(i, j) = a.at(i, j) << kPairShift;
  for (int i = 0; i < m; ++i) out.set_sym(i, m, Label{1} << i);
  out.at(m, m) = a.type == 1 ? 1 : 0;
  return reduce(out);
}

// Direct product: quaternions are pairs, -1 is the pair of the minus ones.
QMatrix eval_product(const QMatrix& a, const QMatrix& b) {
  const int m = a.n, k = b.n;
  const int type = (a.type || b.type) ? 1 : 0;
  const Completion ta = completion(a);
  const Completion tb = completion(b);
  const Mask ma = a.type == 1 ? 1 : 0;
  const Mask mb = b.type == 1 ? 1 : 0;

  std::vector<std::pair<Mask, Mask>> basis;
  LabelSpan span;
  auto try_add = [&](Mask u, Mask v) {
    const Label enc = Label(u) | (Label(v) << 16);
    if (span.insert(enc)) basis.emplace_back(u, v);
  };
  if (type == 1) try_add(ma, mb);
  for (int i = 0; i < m; ++i) try_add(Mask{1} << i, 0);
  for (int j = 0; j < k; ++j) try_add(0, Mask{1} << j);
  if (int(basis.size()) != m + k)
    throw std::logic_error("eval_product: basis construction failed");

  QMatrix out(m + k, type);
  for (int i = 0; i < m + k; ++i)
    for (int j = i; j < m + k; ++j) {
      const Label la = ta.at(basis[i].first, basis[j].first);
      const Label lb = tb.at(basis[i].second, basis[j].second);
      out.set_sym(i, j, (la << kPairShift) | lb);
    }
  return reduce(out);
}

}  // namespace

QMatrix eval(const StructureSpec& spec) {
  const StructureSpec s = canonicalize(spec);
  switch (s.kind) {
    case Kind::L0:
      throw std::invalid_argument("eval: the order-0 structure has no matrix");
    case Kind::L10:
      return QMatrix(1, 0);
    case Kind::L11:
      return QMatrix(1, 1);
    case Kind::L1: {
      QMatrix m(1, 1);
      m.at(0, 0) = 1;
      return m;
    }
    case Kind::Local:
      return local_matrix(s.local_n, s.local_variant);
    case Kind::Delta:
      return eval_delta(eval(s.children[0]));
    case Kind::Product: {
      QMatrix acc = eval(s.children[0]);
      for (std::size_t i = 1; i < s.children.size(); ++i)
        acc = eval_product(acc, eval(s.children[i]));
      return acc;
    }
  }
  throw std::logic_error("eval: unreachable");
}

// ---------------------------------------------------------------------------
// Table 1 invariants
// ---------------------------------------------------------------------------

namespace {

ExtNat ext_max(ExtNat a, ExtNat b) {
  if (a.inf || b.inf) return ExtNat::infinity();
  return {std::max(a.v, b.v), false};
}

}  // namespace

InvariantVector invariants_recursive(const StructureSpec& spec) {
  const StructureSpec s = canonicalize(spec);
  switch (s.kind) {
    case Kind::L0:
      return {{1}, {1}, {1}, 0, 0};
    case Kind::L10:
      return {{1}, {2}, {2}, 1, 1};
    case Kind::L11:
      return {{2}, {2}, {2}, 1, 1};
    case Kind::L1:
      return {ExtNat::infinity(), {1}, {0}, 0, 0};
    case Kind::Local: {
      const int n = s.local_n;
      if (s.local_variant == LV::Odd) return {{4}, {4}, {4}, n - 1, n - 1};
      if (s.local_variant == LV::Even0) return {{1}, {2}, {4}, n, n - 1};
      return {{2}, {3}, {4}, n - 1, n - 1};
    }
    case Kind::Delta: {
      const InvariantVector c = invariants_recursive(s.children[0]);
      InvariantVector r;
      r.s = c.s;
      r.p = c.s.inf ? c.p : ExtNat{c.s.v + 1, false};
      r.u = c.u.inf ? c.u : ExtNat{2 * c.u.v, false};
      r.d1 = c.s.is(1) ? c.d1 + 1 : c.d1;
      // the new generator is 1-rigid; a pythagorean base keeps -1 0-rigid
      r.d_min = order_of(s.children[0]) == 0 ? 1 : std::min(c.d_min, 1);
      return r;
    }
    case Kind::Product: {
      InvariantVector r = invariants_recursive(s.children[0]);
      for (std::size_t i = 1; i < s.children.size(); ++i) {
        const InvariantVector c = invariants_recursive(s.children[i]);
        r.s = ext_max(r.s, c.s);
        r.p = ext_max(r.p, c.p);
        r.u = ext_max(r.u, c.u);
        r.d1 += c.d1;
        r.d_min += c.d_min;
      }
      return r;
    }
  }
  throw std::logic_error("invariants_recursive: unreachable");
}

int level_class_of(const StructureSpec& s) {
  const ExtNat lv = invariants_recursive(s).s;
  if (lv.is(1)) return 1;
  if (lv.is(2)) return 2;
  return 4;
}

// ---------------------------------------------------------------------------
// Generation of the elementary type universe
// ---------------------------------------------------------------------------

namespace {

// All multisets of indecomposables (grouped by order) with total order n.
void multisets_rec(const std::vector<std::vector<StructureSpec>>& pool, int order,
                   int max_order, std::vector<StructureSpec>& current,
                   std::vector<std::vector<StructureSpec>>& out) {
  if (order == 0) {
    out.push_back(current);
    return;
  }
  for (int j = std::min(order, max_order); j >= 1; --j) {
    for (const auto& ind : pool[j]) {
      // enforce a nonincreasing factor sequence to list each multiset once
      if (!current.empty()) {
        const StructureSpec& last = current.back();
        if (order_of(last) == j && spec_less(last, ind)) continue;
        if (order_of(last) < j) continue;
      }
      current.push_back(ind);
      multisets_rec(pool, order - j, max_order, current, out);
      current.pop_back();
    }
  }
}

}  // namespace

std::vector<StructureSpec> generate_all(int n) {
  std::vector<std::vector<StructureSpec>> ets(n + 1);
  std::vector<std::vector<StructureSpec>> indec(n + 1);
  ets[0] = {StructureSpec::atom(Kind::L0)};
  for (int m = 1; m <= n; ++m) {
    // nondegenerate indecomposables of order m
    if (m == 1) {
      indec[m] = {StructureSpec::atom(Kind::L1)};
    } else if (m == 2) {
      indec[m] = {StructureSpec::delta(StructureSpec::atom(Kind::L10)),
                  StructureSpec::delta(StructureSpec::atom(Kind::L11))};
    } else {
      if (m % 2 == 1) {
        indec[m].push_back(StructureSpec::local(m, LV::Odd));
      } else {
        indec[m].push_back(StructureSpec::local(m, LV::Even0));
        indec[m].push_back(StructureSpec::local(m, LV::Even1));
      }
      for (const auto& t : ets[m - 1])
        indec[m].push_back(canonicalize(StructureSpec::delta(t)));
    }

    // combine: radical part L_{1,eps}^r times nondegenerate factors
    std::vector<StructureSpec> result;
    for (int rad = 0; rad <= m; ++rad) {
      std::vector<std::vector<StructureSpec>> combos;
      std::vector<StructureSpec> cur;
      multisets_rec(indec, m - rad, m, cur, combos);
      for (auto& factors : combos) {
        bool all_level1 = true;
        for (const auto& f : factors)
          if (!invariants_recursive(f).s.is(1)) all_level1 = false;
        auto build = [&](Kind eps_atom) {
          std::vector<StructureSpec> parts = factors;
          for (int i = 0; i < rad; ++i) parts.push_back(StructureSpec::atom(eps_atom));
          return canonicalize(StructureSpec::product(std::move(parts)));
        };
        if (rad == 0) {
          if (!factors.empty()) result.push_back(build(Kind::L0));
        } else {
          if (all_level1) result.push_back(build(Kind::L10));
          result.push_back(build(Kind::L11));
        }
      }
    }
    std::sort(result.begin(), result.end(), spec_less);
    ets[m] = std::move(result);
  }
  return ets[n];
}

std::vector<StructureSpec> filter_target_class(const std::vector<StructureSpec>& specs,
                                               int n, Policy policy) {
  std::vector<StructureSpec> out;
  for (const auto& s : specs) {
    if (order_of(s) != n) continue;
    // nondegenerate: no top-level radical factor
    bool degen = s.kind == Kind::L10 || s.kind == Kind::L11;
    if (s.kind == Kind::Product)
      for (const auto& c : s.children)
        degen = degen || c.kind == Kind::L10 || c.kind == Kind::L11;
    if (degen) continue;
    const InvariantVector iv = invariants_recursive(s);
    if (iv.d_min < 2) continue;  // pythagorean or rigid
    if (policy == Policy::Standard) {
      if (iv.s.is(1) && iv.d_min == 2) continue;
      if (iv.s.is(4) && iv.d1 == 2) continue;
      if (iv.s.is(2)) {
        const Structure st = from_matrix(eval(s));
        bool cut = false;
        for (Mask a : value_group(st, st.minus_one)) {
          if (a == 0) continue;
          if (value_group(st, a).size() == 4) cut = true;
        }
        if (cut) continue;
      }
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace nqm
