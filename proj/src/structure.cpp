#include "nqm/structure.hpp"

#include <algorithm>
#include <set>

namespace nqm {

namespace {

std::vector<Mask> set_to_vec(const std::vector<char>& in) {
  std::vector<Mask> out;
  for (Mask a = 0; a < Mask(in.size()); ++a)
    if (in[a]) out.push_back(a);
  return out;
}

// One step of the representation chain: D(phi + <a>) from D(phi).
std::vector<char> extend_rep(const Structure& s, const std::vector<char>& d, Mask a) {
  const Mask N = s.size();
  std::vector<char> out(N, 0);
  for (Mask b = 0; b < N; ++b) {
    if (!d[b]) continue;
    const Label target = s.q(b, a);
    for (Mask c = 0; c < N; ++c)
      if (s.q(c, b ^ a ^ c) == target) out[c] = 1;
  }
  return out;
}

}  // namespace

Structure from_matrix(const QMatrix& m) {
  Completion c = completion(m);
  if (!common_slot_ok(c)) throw AxiomError("from_matrix: common slot (M3) violated");
  Structure s;
  s.n = m.n;
  s.minus_one = m.type == 1 ? 1 : 0;
  s.table = std::move(c);
  return s;
}

std::vector<Mask> value_group(const Structure& s, Mask a) {
  std::vector<Mask> v;
  for (Mask b = 0; b < s.size(); ++b)
    if (s.q(a, b) == 0) v.push_back(b);
  return v;
}

std::vector<Mask> rep_binary(const Structure& s, Mask a, Mask b) {
  const Label target = s.q(a, b);
  std::vector<Mask> out;
  for (Mask c = 0; c < s.size(); ++c)
    if (s.q(c, a ^ b ^ c) == target) out.push_back(c);
  return out;
}

std::vector<Mask> rep_set(const Structure& s, const Form& phi) {
  if (phi.empty()) throw std::invalid_argument("rep_set: zero-dimensional form");
  const Mask N = s.size();
  std::vector<char> d(N, 0);
  d[phi[0]] = 1;
  for (std::size_t k = 1; k < phi.size(); ++k) d = extend_rep(s, d, phi[k]);
  return set_to_vec(d);
}

namespace {

// Chain of D(k x <1>) until -1 appears (level) or the chain stabilizes
// (Pythagoras number).
std::pair<ExtNat, ExtNat> level_and_pythagoras(const Structure& s) {
  const Mask N = s.size();
  std::vector<char> d(N, 0);
  d[0] = 1;
  std::uint64_t k = 1;
  ExtNat lvl = ExtNat::infinity();
  ExtNat pyth = ExtNat::infinity();
  if (s.minus_one == 0) lvl = {1, false};
  while (true) {
    std::vector<char> nd = extend_rep(s, d, 0);
    ++k;
    if (lvl.inf && nd[s.minus_one]) lvl = {k, false};
    if (nd == d) {
      pyth = {k - 1, false};
      break;
    }
    d = std::move(nd);
  }
  return {lvl, pyth};
}

}  // namespace

ExtNat level(const Structure& s) { return level_and_pythagoras(s).first; }
ExtNat pythagoras(const Structure& s) { return level_and_pythagoras(s).second; }

std::vector<Mask> radical(const Structure& s) {
  std::vector<Mask> out;
  const Mask N = s.size();
  for (Mask a = 0; a < N; ++a) {
    bool allzero = true;
    for (Mask b = 0; b < N && allzero; ++b) allzero = s.q(a, b) == 0;
    if (allzero) out.push_back(a);
  }
  return out;
}

bool is_degenerate(const Structure& s) { return radical(s).size() > 1; }

int level_from_matrix(const QMatrix& m) {
  Structure s = from_matrix(m);
  if (is_degenerate(s))
    throw std::invalid_argument("level_from_matrix: matrix is degenerate");
  bool diag_zero = true;
  for (int i = 0; i < m.n; ++i) diag_zero = diag_zero && m.at(i, i) == 0;
  if (diag_zero) return 1;
  if (m.at(0, 0) == 0) return 2;
  // level 4 iff some pair I, J of elements of V(-1) pairs to the value 1
  const Mask N = s.size();
  std::vector<Mask> v1;
  for (Mask a = 0; a < N; ++a)
    if (s.q(1, a) == 0) v1.push_back(a);
  for (Mask a : v1)
    for (Mask b : v1)
      if (s.q(a, b) == m.at(0, 0)) return 4;
  return 8;
}

RigidityProfile rigidity_profile(const Structure& s) {
  RigidityProfile r;
  const Mask N = s.size();
  r.d_min = s.n + 1;
  for (Mask a = 1; a < N; ++a) {
    int z = 0;
    for (Mask b = 0; b < N; ++b) z += s.q(a, b) == 0;
    const int dim = std::countr_zero(Mask(z));
    r.dims.push_back(dim);
    r.d_min = std::min(r.d_min, dim);
  }
  if (s.minus_one == 0) {
    r.d1 = s.n;
  } else {
    int z = 0;
    for (Mask b = 0; b < N; ++b) z += s.q(s.minus_one, b) == 0;
    r.d1 = std::countr_zero(Mask(z));
  }
  if (r.d1 == 0) r.d_min = 0;  // pythagorean: -1 itself is 0-rigid
  r.strictly_k_rigid = r.d_min;
  return r;
}

Mask det_form(const Structure& s, const Form& phi) {
  (void)s;
  Mask d = 0;
  for (Mask a : phi) d ^= a;
  return d;
}

Mask disc_form(const Structure& s, const Form& phi) {
  const std::size_t n = phi.size();
  Mask d = det_form(s, phi);
  if ((n * (n - 1) / 2) % 2 == 1) d ^= s.minus_one;
  return d;
}

Label hasse_invariant(const Structure& s, const Form& phi) {
  Label h = 0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    for (std::size_t j = i + 1; j < phi.size(); ++j) h ^= s.q(phi[i], phi[j]);
  return h;
}

Label witt_invariant(const Structure& s, const Form& phi) {
  const Mask det = det_form(s, phi);
  Mask c;
  switch (phi.size() % 8) {
    case 1:
    case 2:
      c = 0;  // the element 1
      break;
    case 3:
    case 4:
      c = s.minus_one ^ det;
      break;
    case 5:
    case 6:
      c = s.minus_one;
      break;
    default:
      c = det;
      break;
  }
  return hasse_invariant(s, phi) ^ s.q(s.minus_one, c);
}

bool is_isotropic(const Structure& s, const Form& phi) {
  if (phi.size() < 2) return false;
  Form rest(phi.begin() + 1, phi.end());
  const Mask want = s.minus_one ^ phi[0];
  for (Mask a : rep_set(s, rest))
    if (a == want) return true;
  return is_isotropic(s, rest);
}

namespace {

// phi = <b> + psi for some psi, constructed through the representation chain.
// Requires b in D(phi).
Form split_off(const Structure& s, const Form& phi, Mask b) {
  if (phi.size() == 1) return {};
  Form head(phi.begin(), phi.end() - 1);
  const Mask a = phi.back();
  // find c in D(head) with b in D(<c,a>)
  const Mask N = s.size();
  std::vector<char> d(N, 0);
  d[head[0]] = 1;
  for (std::size_t k = 1; k < head.size(); ++k) d = extend_rep(s, d, head[k]);
  for (Mask c = 0; c < N; ++c) {
    if (!d[c]) continue;
    if (s.q(b, c ^ a ^ b) == s.q(c, a)) {
      Form chi = split_off(s, head, c);
      chi.push_back(a ^ b ^ c);  // <c,a> = <b, abc>
      return chi;
    }
  }
  throw std::logic_error("split_off: element not represented");
}

}  // namespace

namespace {

// phi isotropic: returns psi with phi = H + psi.
Form split_hyperbolic(const Structure& s, const Form& phi) {
  Form rest(phi.begin() + 1, phi.end());
  const Mask want = s.minus_one ^ phi[0];
  for (Mask a : rep_set(s, rest))
    if (a == want) return split_off(s, rest, want);
  Form inner = split_hyperbolic(s, rest);
  inner.insert(inner.begin(), phi[0]);
  return inner;
}

}  // namespace

int witt_index(const Structure& s, Form phi) {
  int idx = 0;
  while (is_isotropic(s, phi)) {
    phi = split_hyperbolic(s, phi);
    ++idx;
  }
  return idx;
}

bool is_hyperbolic(const Structure& s, const Form& phi) {
  if (phi.size() % 2 != 0) return false;
  return witt_index(s, phi) == int(phi.size() / 2);
}

bool ap3_check(const Structure& s) {
  const Mask N = s.size();
  for (Mask a = 0; a < N; ++a)
    for (Mask b = 0; b < N; ++b)
      for (Mask a2 = 0; a2 < N; ++a2)
        for (Mask b2 = 0; b2 < N; ++b2) {
          const Form phi = {a, b, Mask(a ^ b), a2, b2,
                            Mask(s.minus_one ^ a2 ^ b2)};
          if (witt_invariant(s, phi) != 0) continue;
          if (!is_hyperbolic(s, phi)) return false;
        }
  return true;
}

bool q_axioms_ok(const Structure& s) {
  const Mask N = s.size();
  // Q1, Q2
  for (Mask a = 0; a < N; ++a) {
    if (s.q(a, s.minus_one ^ a) != 0) return false;
    for (Mask b = a; b < N; ++b)
      if (s.q(a, b) != s.q(b, a)) return false;
  }
  // Q3 both directions (automatic for completions, asserted anyway)
  for (Mask a = 0; a < N; ++a)
    for (Mask b = 0; b < N; ++b)
      for (Mask c = 0; c < N; ++c)
        if ((s.q(a, b) == s.q(a, c)) != (s.q(a, b ^ c) == 0)) return false;
  // Q4 via the common slot property on row dictionaries
  return common_slot_ok(s.table);
}

}  // namespace nqm
