#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "nqm/spec_ast.hpp"
#include "nqm/structure.hpp"

using namespace nqm;

namespace {

QMatrix make(int n, int type, std::initializer_list<Label> rows) {
  QMatrix m(n, type);
  auto it = rows.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = *it++;
  return m;
}

Structure l1() {
  QMatrix m(1, 1);
  m.at(0, 0) = 1;
  return from_matrix(m);
}

Structure l3() { return from_matrix(make(3, 1, {1, 0, 0, 0, 0, 1, 0, 1, 0})); }

}  // namespace

TEST_CASE("from_matrix basics") {
  const Structure s = l1();
  CHECK(s.minus_one == 1);
  CHECK(s.q(1, 1) == 1);
  CHECK(level(s).inf);  // L1 has infinite level
  CHECK(pythagoras(s).is(1));

  const Structure z = from_matrix(QMatrix(3, 0));
  CHECK(radical(z).size() == 8);  // totally degenerate
  CHECK(is_degenerate(z));
  CHECK(level(z).is(1));
}

TEST_CASE("axiom brute force on structure tables") {
  CHECK(q_axioms_ok(l1()));
  CHECK(q_axioms_ok(l3()));
  CHECK(q_axioms_ok(from_matrix(QMatrix(2, 1))));
  CHECK(q_axioms_ok(from_matrix(eval(parse_spec("L10D x L11D")))));
}

TEST_CASE("value groups") {
  const Structure s = l3();
  // identity has the full group as value group
  CHECK(value_group(s, 0).size() == 8);
  // local type: every nontrivial element is (n-1)-rigid
  for (Mask a = 1; a < 8; ++a) CHECK(value_group(s, a).size() == 4);

  // group extension: V(ax) = {1, -ax}
  const Structure ext = from_matrix(eval(parse_spec("L11D")));
  // x is the second generator (mask 2); -x has mask 3
  const auto vx = value_group(ext, 2);
  CHECK(vx.size() == 2);
  CHECK(vx[0] == 0);
  CHECK(vx[1] == (ext.minus_one ^ 2));
}

TEST_CASE("binary representation sets") {
  const Structure s = l3();
  for (Mask a = 0; a < 8; ++a) {
    for (Mask b = 0; b < 8; ++b) {
      const auto d = rep_binary(s, a, b);
      CHECK(std::find(d.begin(), d.end(), a) != d.end());
      CHECK(std::find(d.begin(), d.end(), b) != d.end());
    }
    // D(<1,b>) = V(-b)
    for (Mask b = 0; b < 8; ++b) {
      const auto d = rep_binary(s, 0, b);
      const auto v = value_group(s, s.minus_one ^ b);
      CHECK(d == v);
    }
  }
}

TEST_CASE("rep_set agrees with the chain-isometry closure at order <= 3") {
  // oracle: BFS closure of binary moves over form tuples
  auto oracle = [](const Structure& s, Form phi) {
    std::set<Form> seen;
    std::vector<Form> queue;
    std::sort(phi.begin(), phi.end());
    seen.insert(phi);
    queue.push_back(phi);
    while (!queue.empty()) {
      Form cur = queue.back();
      queue.pop_back();
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (std::size_t j = i + 1; j < cur.size(); ++j)
          for (Mask u = 0; u < s.size(); ++u) {
            const Mask w = Mask(cur[i] ^ cur[j] ^ u);
            if (s.q(u, w) != s.q(cur[i], cur[j])) continue;
            Form next = cur;
            next[i] = u;
            next[j] = w;
            std::sort(next.begin(), next.end());
            if (seen.insert(next).second) queue.push_back(next);
          }
    }
    std::set<Mask> rep;
    for (const Form& f : seen)
      for (Mask a : f) rep.insert(a);
    return rep;
  };

  for (const char* txt : {"L3", "L11D_2", "L1 x L10D", "L10 x L11D"}) {
    const Structure s = from_matrix(eval(parse_spec(txt)));
    for (Form phi : {Form{0, 1}, Form{1, 2, 3}, Form{0, 0, 5}}) {
      for (Mask& a : phi) a &= s.size() - 1;
      const auto got = rep_set(s, phi);
      const auto want = oracle(s, phi);
      CHECK(std::set<Mask>(got.begin(), got.end()) == want);
    }
  }
}

TEST_CASE("levels from Table 1") {
  CHECK(level(from_matrix(eval(parse_spec("L4,1")))).is(2));
  CHECK(level(from_matrix(eval(parse_spec("L3")))).is(4));
  CHECK(level(l1()).inf);
  CHECK(level(from_matrix(eval(parse_spec("L11D")))).is(2));
  CHECK(pythagoras(from_matrix(eval(parse_spec("L4,1")))).is(3));
  CHECK(pythagoras(from_matrix(eval(parse_spec("L11D")))).is(3));
}

TEST_CASE("level read off the matrix") {
  CHECK(level_from_matrix(eval(parse_spec("L4,0"))) == 1);
  CHECK(level_from_matrix(eval(parse_spec("L3"))) == 4);
  CHECK(level_from_matrix(eval(parse_spec("L4,1"))) == 2);
  CHECK(level_from_matrix(eval(parse_spec("L1 x L10D"))) == 8);  // infinite level
  CHECK_THROWS(level_from_matrix(QMatrix(2, 0)));               // degenerate
}

TEST_CASE("rigidity profiles") {
  const RigidityProfile rp = rigidity_profile(l3());
  CHECK(rp.d1 == 2);
  CHECK(rp.d_min == 2);

  // pythagorean iff d1 = 0
  const Structure p = from_matrix(eval(parse_spec("L1 x L1")));
  CHECK(rigidity_profile(p).d1 == 0);
  CHECK(rigidity_profile(p).d_min == 0);
  CHECK(pythagoras(p).is(1));

  const Structure l40 = from_matrix(eval(parse_spec("L4,0")));
  CHECK(rigidity_profile(l40).d1 == 4);
  CHECK(rigidity_profile(l40).d_min == 3);
}

TEST_CASE("hasse and witt invariants") {
  for (const char* txt : {"L3", "L11D_2", "L4,1"}) {
    const Structure s = from_matrix(eval(parse_spec(txt)));
    const Mask mo = s.minus_one;
    // h(H) = q(1,-1) = 0
    CHECK(hasse_invariant(s, Form{0, mo}) == 0);
    CHECK(hasse_invariant(s, Form{3}) == 0);
    // w(c<<a,b>>) = q(a,b) exhaustively
    for (Mask a = 0; a < s.size(); ++a)
      for (Mask b = 0; b < s.size(); ++b)
        for (Mask c = 0; c < s.size(); ++c) {
          const Form pf = {c, Mask(c ^ mo ^ a), Mask(c ^ mo ^ b),
                           Mask(c ^ a ^ b)};
          CHECK(witt_invariant(s, pf) == s.q(a, b));
        }
    // h(phi + psi) = h(phi) * h(psi) * q(det phi, det psi)
    const Form phi = {1, 2}, psi = {3, Mask(mo)};
    CHECK(hasse_invariant(s, Form{1, 2, 3, Mask(mo)}) ==
          (hasse_invariant(s, phi) ^ hasse_invariant(s, psi) ^
           s.q(det_form(s, phi), det_form(s, psi))));
  }
}

TEST_CASE("isotropy and hyperbolicity") {
  const Structure s = l3();
  const Mask mo = s.minus_one;
  CHECK(is_isotropic(s, Form{0, mo}));  // hyperbolic plane
  CHECK(is_hyperbolic(s, Form{0, mo}));
  CHECK_FALSE(is_isotropic(s, Form{5}));
  // a 2-fold Pfister form is isotropic iff its quaternion vanishes
  for (Mask a = 0; a < 8; ++a)
    for (Mask b = 0; b < 8; ++b) {
      const Form pf = {0, Mask(mo ^ a), Mask(mo ^ b), Mask(a ^ b)};
      CHECK(is_isotropic(s, pf) == (s.q(a, b) == 0));
    }
}

TEST_CASE("ap3 for small generated structures") {
  for (const char* txt : {"L3", "L11D_2", "L4,1", "L1 x L3", "L10D x L11D"}) {
    const Structure s = from_matrix(eval(parse_spec(txt)));
    CHECK(ap3_check(s));
  }
}

TEST_CASE("q(a,1) = 0 and q(a,a) = q(a,-1)") {
  for (const char* txt : {"L3", "L4,0", "L11D_2"}) {
    const Structure s = from_matrix(eval(parse_spec(txt)));
    for (Mask a = 0; a < s.size(); ++a) {
      CHECK(s.q(a, 0) == 0);
      CHECK(s.q(a, a) == s.q(a, s.minus_one));
    }
  }
}
