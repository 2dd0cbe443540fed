#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "nqm/qmatrix.hpp"

using namespace nqm;

namespace {

QMatrix make(int n, int type, std::initializer_list<Label> rows) {
  QMatrix m(n, type);
  auto it = rows.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = *it++;
  return m;
}

// The two 5x5 matrices of the linkage example.
QMatrix linkage_m() {
  return make(5, 1,
              {1, 2, 4,  8,  16,   //
               2, 2, 0,  0,  32,   //
               4, 0, 4,  64, 128,  //
               8, 0, 64, 8,  256,  //
               16, 32, 128, 256, 16});
}
QMatrix linkage_m_prime() {
  return make(5, 1,
              {1, 2, 4,  8,  16,  //
               2, 2, 0,  0,  32,  //
               4, 0, 4,  33, 64,  //
               8, 0, 33, 8,  128, //
               16, 32, 64, 128, 16});
}

QMatrix l3_matrix() { return make(3, 1, {1, 0, 0, 0, 0, 1, 0, 1, 0}); }

// Random transformation chain applied to a matrix.
QMatrix scramble(QMatrix m, int steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int lo = m.type == 1 ? 1 : 0;
  for (int s = 0; s < steps; ++s) {
    const bool swap = rng() & 1;
    int i = lo + int(rng() % (m.n - lo));
    int j = int(rng() % m.n);
    if (swap) {
      if (j <= lo && i <= lo) continue;
      if (i == j) continue;
      if (m.type == 1 && (i == 0 || j == 0)) continue;
      m = apply_swap(m, i, j);
    } else {
      if (i == j) continue;
      m = apply_add(m, i, j);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("completion of the order-3 example") {
  const QMatrix m = make(3, 1, {0, 1, 2, 1, 1, 0, 2, 0, 2});
  const Completion c = completion(m);
  const Label row3[] = {0, 1, 0, 1, 2, 3, 2, 3};
  const Label row5[] = {0, 2, 1, 3, 0, 2, 1, 3};
  for (Mask x = 0; x < 8; ++x) {
    CHECK(c.at(3, x) == row3[x]);
    CHECK(c.at(5, x) == row5[x]);
  }
}

TEST_CASE("completion of the zero matrix is zero") {
  for (int n : {1, 2, 4}) {
    const QMatrix m(n, 0);
    const Completion c = completion(m);
    for (Label v : c.t) CHECK(v == 0);
  }
}

TEST_CASE("completion agrees with the double-product definition") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 25; ++rep) {
    QMatrix m(3, int(rng() & 1));
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) m.set_sym(i, j, rng() & 7);
    if (m.type == 1) {
      m.at(0, 0) = rng() & 1;
      for (int i = 1; i < 3; ++i) m.at(i, i) = m.at(0, i);
    }
    const Completion c = completion(m);
    for (Mask r = 0; r < 8; ++r)
      for (Mask col = 0; col < 8; ++col) {
        Label want = 0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            if (((r >> i) & 1) && ((col >> j) & 1)) want ^= m.at(i, j);
        CHECK(c.at(r, col) == want);
      }
    // bilinearity
    for (Mask r = 0; r < 8; ++r)
      for (Mask a = 0; a < 8; ++a)
        for (Mask b = 0; b < 8; ++b)
          CHECK(c.at(r, a ^ b) == (c.at(r, a) ^ c.at(r, b)));
  }
}

TEST_CASE("axiom report") {
  const QMatrix bad = make(3, 1, {0, 1, 2, 1, 1, 0, 2, 0, 2});
  const AxiomReport rb = check_axioms(bad);
  CHECK(rb.m1);
  CHECK(rb.m2);
  CHECK_FALSE(rb.m3);  // the paper's (M3) violation example

  const AxiomReport rg = check_axioms(l3_matrix());
  CHECK(rg.all());

  const AxiomReport rz = check_axioms(QMatrix(4, 0));
  CHECK(rz.all());
}

TEST_CASE("red bound is checked along the row-major walk") {
  QMatrix m(2, 1);
  m.at(0, 0) = 1;
  m.set_sym(0, 1, 4);  // skips the label 2
  m.at(1, 1) = 4;
  CHECK_FALSE(check_axioms(m).red);
}

TEST_CASE("brauer presentation on the linkage example") {
  const QMatrix m = linkage_m();
  CHECK(check_axioms(m).pre3());
  const BrauerPresentation bp = brauer_presentation(m);
  CHECK(bp.qdim == 9);  // Qdim(S) = 1 + ((1+1)+2) + 4
  CHECK(span_dim_entries(m) == 9);
  CHECK(is_quaternionic(m));

  const QMatrix mp = linkage_m_prime();
  CHECK(check_axioms(mp).pre3());
  CHECK(brauer_presentation(mp).qdim == 9);
  CHECK(span_dim_entries(mp) == 8);
  CHECK_FALSE(is_quaternionic(mp));
}

TEST_CASE("brauer presentation trivia") {
  CHECK(brauer_presentation(QMatrix(3, 0)).qdim == 0);
  QMatrix l1(1, 1);
  l1.at(0, 0) = 1;
  CHECK(brauer_presentation(l1).qdim == 1);
  CHECK(brauer_presentation(l1).relabel.at(0) == 0);
}

TEST_CASE("reduce relabels the computation-difficulties pair") {
  const QMatrix a = make(7, 1,
                         {1, 0, 0,  0, 2,   4,   8,    //
                          0, 0, 0,  0, 2,   16,  32,   //
                          0, 0, 0,  64, 0,  0,   0,    //
                          0, 0, 64, 0,  0,  0,   0,    //
                          2, 2, 0,  0,  2,  33,  128,  //
                          4, 16, 0, 0,  33, 4,   256,  //
                          8, 32, 0, 0,  128, 256, 8});
  const QMatrix b = make(7, 1,
                         {1, 0, 0,  0, 2,   4,   8,    //
                          0, 0, 0,  0, 2,   16,  32,   //
                          0, 0, 0,  64, 0,  0,   0,    //
                          0, 0, 64, 0,  0,  0,   0,    //
                          2, 2, 0,  0,  2,  128, 256,  //
                          4, 16, 0, 0,  128, 4,  512,  //
                          8, 32, 0, 0,  256, 512, 8});
  CHECK(reduce(a) == b);
  CHECK(reduce(b) == b);  // idempotent

  // reduction preserves the completion zero pattern exactly
  const Completion ca = completion(a), cb = completion(reduce(a));
  for (std::size_t i = 0; i < ca.t.size(); ++i)
    CHECK((ca.t[i] == 0) == (cb.t[i] == 0));
}

TEST_CASE("reduce of the linkage variant replaces 33 by a fresh power") {
  const QMatrix r = reduce(linkage_m_prime());
  CHECK(r == linkage_m());
  CHECK(is_quaternionic(r));
}

TEST_CASE("simple transformations") {
  const QMatrix m = l3_matrix();
  CHECK(apply_swap(apply_swap(m, 1, 2), 1, 2) == m);
  CHECK(apply_add(apply_add(m, 2, 1), 2, 1) == m);
  CHECK_THROWS(apply_swap(m, 0, 1));  // type 1 pins row 0
  CHECK_THROWS(apply_add(m, 0, 1));

  const QMatrix l1sq = make(2, 1, {1, 2, 2, 2});
  const QMatrix added = apply_add(l1sq, 1, 0);
  CHECK(added == make(2, 1, {1, 3, 3, 3}));
  // zero pattern of the completion is preserved up to relabeling
  const Completion c0 = completion(l1sq), c1 = completion(reduce(added));
  for (std::size_t i = 0; i < c0.t.size(); ++i)
    CHECK((c0.t[i] == 0) == (c1.t[i] == 0));
}

TEST_CASE("canonical form of local and tiny matrices") {
  CHECK(canonical_form(l3_matrix()) == l3_matrix());
  CHECK(canonical_form(QMatrix(1, 0)) == QMatrix(1, 0));
  QMatrix l1(1, 1);
  l1.at(0, 0) = 1;
  CHECK(canonical_form(l1) == l1);
  CHECK(canonical_form(QMatrix(3, 0)) == QMatrix(3, 0));
}

TEST_CASE("canonical form is invariant under random transformations") {
  const QMatrix base = l3_matrix();
  for (int rep = 0; rep < 30; ++rep) {
    const QMatrix scrambled = scramble(base, 100, 1000 + rep);
    CHECK(canonical_form(scrambled) == base);
  }
  const QMatrix big = linkage_m();
  const QMatrix canon = canonical_form(big);
  CHECK(canonical_form(canonical_form(big)) == canonical_form(big));
  for (int rep = 0; rep < 10; ++rep)
    CHECK(canonical_form(scramble(big, 40, 77 + rep)) == canon);
}

TEST_CASE("completion diagonal follows the type") {
  // type 0: table[I][I] = 0; type 1: table[I][I] = table[1][I]
  const QMatrix t0 = make(3, 0, {0, 0, 1, 0, 0, 2, 1, 2, 0});
  const Completion c0 = completion(t0);
  for (Mask I = 0; I < 8; ++I) CHECK(c0.at(I, I) == 0);
  const QMatrix t1 = linkage_m();
  const Completion c1 = completion(t1);
  for (Mask I = 0; I < 32; ++I) CHECK(c1.at(I, I) == c1.at(1, I));
}

TEST_CASE("distinct 2-powers of a reduced quaternionic matrix form the basis") {
  for (const QMatrix& m : {linkage_m(), l3_matrix()}) {
    const int qdim = brauer_presentation(m).qdim;
    std::set<Label> powers;
    for (Label v : m.e)
      if (v && (v & (v - 1)) == 0) powers.insert(v);
    std::set<Label> want;
    for (int k = 0; k < qdim; ++k) want.insert(Label{1} << k);
    CHECK(powers == want);
  }
}

TEST_CASE("reduce of any m1-m3 matrix is quaternionic") {
  CHECK(is_quaternionic(reduce(linkage_m_prime())));
  const QMatrix odd = make(2, 0, {0, 3, 3, 0});
  CHECK(is_quaternionic(reduce(odd)));
  CHECK(reduce(odd) == make(2, 0, {0, 1, 1, 0}));
}

namespace {

// Reference canonical form: minimum over every basis of the relabeled matrix.
QMatrix brute_canonical(const QMatrix& m) {
  const QMatrix mr = reduce(m);
  const Completion t = completion(mr);
  const int n = m.n;
  const Mask N = Mask{1} << n;
  std::vector<Mask> basis;
  QMatrix best;
  bool have = false;
  auto relabeled = [&]() {
    QMatrix out(n, m.type);
    std::vector<std::pair<Label, Label>> rows;  // value pivot, label
    Label next = 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Label v = t.at(basis[i], basis[j]);
        Label lab = 0;
        for (auto& [pv, pl] : rows)
          if (v && (v >> top_bit(pv)) & 1) {
            v ^= pv;
            lab ^= pl;
          }
        if (v != 0) {
          rows.emplace_back(v, lab ^ next);
          lab ^= next;
          next <<= 1;
        }
        out.at(i, j) = lab;
      }
    return out;
  };
  auto rec = [&](auto&& self) -> void {
    if (int(basis.size()) == n) {
      QMatrix cand = relabeled();
      if (!have || cand < best) {
        best = std::move(cand);
        have = true;
      }
      return;
    }
    LabelSpan span;
    for (Mask b : basis) span.insert(b);
    for (Mask g = 1; g < N; ++g)
      if (!span.contains(g)) {
        basis.push_back(g);
        self(self);
        basis.pop_back();
      }
  };
  if (m.type == 1) basis.push_back(1);
  rec(rec);
  return best;
}

}  // namespace

TEST_CASE("canonical form equals the all-bases minimum at small orders") {
  // order-3 matrices of several shapes, plus scrambles
  std::vector<QMatrix> seeds = {
      l3_matrix(),
      make(3, 0, {0, 0, 1, 0, 0, 2, 1, 2, 0}),
      make(3, 1, {1, 2, 4, 2, 2, 8, 4, 8, 4}),
      make(3, 1, {0, 1, 2, 1, 1, 4, 2, 4, 2}),
      make(3, 0, {0, 1, 2, 1, 0, 4, 2, 4, 0}),
      QMatrix(3, 1),
      make(2, 1, {1, 2, 2, 2}),
  };
  for (const QMatrix& s : seeds) {
    CHECK(canonical_form(s) == brute_canonical(s));
    for (int rep = 0; rep < 4; ++rep) {
      const QMatrix sc = scramble(s, 25, 500 + rep);
      CHECK(canonical_form(sc) == brute_canonical(sc));
    }
  }
  // one order-4 case with a nontrivial head
  const QMatrix m4 = make(4, 1,
                          {1, 0, 0, 2,  //
                           0, 0, 2, 0,  //
                           0, 2, 0, 0,  //
                           2, 0, 0, 2});
  CHECK(canonical_form(m4) == brute_canonical(m4));
  CHECK(canonical_form(scramble(m4, 30, 9)) == brute_canonical(m4));
}

TEST_CASE("matrix text round trips") {
  const QMatrix m = l3_matrix();
  const std::string txt = format_matrix(m);
  CHECK(parse_matrix(txt) == m);
  CHECK(triangle_body(m) == "(0,0; 1)");

  const QMatrix j = parse_matrix(format_matrix(linkage_m(), MatrixFormat::Json));
  CHECK(j == linkage_m());

  // appendix-style: level header resolves type and M00
  const QMatrix l60 =
      parse_matrix("level=1\n(0,0,0,0,1; 0,0,1,0; 1,0,0; 0,0; 0)");
  CHECK(l60.n == 6);
  CHECK(l60.type == 0);
  CHECK(l60.at(0, 5) == 1);
  CHECK(l60.at(2, 3) == 1);

  // 1x1 per the small-structure convention
  const QMatrix one = parse_matrix("type=1\n(1)");
  CHECK(one.n == 1);
  CHECK(one.at(0, 0) == 1);

  CHECK_THROWS_AS(parse_matrix("type=0\n(1,2; 3"), ParseError);
  CHECK_THROWS_AS(parse_matrix("type=0\n(1,x; 3)"), ParseError);
  CHECK_THROWS_AS(parse_matrix("{\"order\":2,\"type\":0,\"rows\":[[0,1],[2,0]]}"),
                  ParseError);
}
