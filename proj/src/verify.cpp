#include "nqm/verify.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nqm/structure.hpp"

namespace nqm {

std::string EtcReport::summary() const {
  std::ostringstream os;
  os << "etc_verify order " << n << " policy " << policy_name(policy) << ": "
     << (pass ? "PASS" : "FAIL");
  for (int lvl : {1, 2, 4}) {
    const auto g = generated.count(lvl) ? generated.at(lvl) : 0;
    const auto e = enumerated.count(lvl) ? enumerated.at(lvl) : 0;
    os << "  level" << (lvl == 4 ? ">=4" : lvl == 2 ? "=2" : "=1") << ": " << e << "/"
       << g;
  }
  if (!missing.empty()) os << "  missing=" << missing.size();
  if (!extra.empty()) os << "  extra=" << extra.size();
  return os.str();
}

std::string EtcReport::json() const {
  nlohmann::json j;
  j["order"] = n;
  j["policy"] = policy_name(policy);
  j["pass"] = pass;
  for (const auto& [lvl, c] : generated) j["generated"][std::to_string(lvl)] = c;
  for (const auto& [lvl, c] : enumerated) j["enumerated"][std::to_string(lvl)] = c;
  for (const auto& m : missing) j["missing"].push_back(triangle_body(m));
  for (const auto& m : extra) j["extra"].push_back(triangle_body(m));
  return j.dump();
}

EtcReport etc_verify(int n, Policy policy, int workers) {
  EtcReport rep;
  rep.n = n;
  rep.policy = policy;

  // generation side
  std::map<int, std::set<QMatrix>> gen;
  const auto specs = filter_target_class(generate_all(n), n, policy);
  for (const auto& s : specs)
    gen[level_class_of(s)].insert(canonical_form(eval(s)));
  for (const auto& [lvl, set] : gen) rep.generated[lvl] = set.size();

  // enumeration side
  ClassifyOptions opt;
  opt.policy = policy;
  opt.workers = workers;
  const ClassifyResult enumr = classify(n, {1, 2, 4}, opt);
  for (const auto& [lvl, vec] : enumr.per_level) rep.enumerated[lvl] = vec.size();

  rep.pass = true;
  for (int lvl : {1, 2, 4}) {
    std::set<QMatrix> g = gen.count(lvl) ? gen.at(lvl) : std::set<QMatrix>{};
    std::vector<QMatrix> e =
        enumr.per_level.count(lvl) ? enumr.per_level.at(lvl) : std::vector<QMatrix>{};
    for (const auto& m : e)
      if (!g.count(m)) {
        rep.extra.push_back(m);
        rep.pass = false;
      }
    std::set<QMatrix> es(e.begin(), e.end());
    for (const auto& m : g)
      if (!es.count(m)) {
        rep.missing.push_back(m);
        rep.pass = false;
      }
  }
  return rep;
}

std::vector<AppendixLine> load_appendix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open appendix data: " + path);
  std::vector<AppendixLine> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    AppendixLine al;
    std::string star;
    if (!std::getline(is, star, '\t')) continue;
    std::string lvl;
    al.starred = star == "*";
    if (!std::getline(is, lvl, '\t') || !std::getline(is, al.spec_text, '\t') ||
        !std::getline(is, al.triangle))
      throw std::runtime_error("bad appendix line: " + line);
    al.level_class = std::stoi(lvl);
    lines.push_back(std::move(al));
  }
  return lines;
}

std::string AppendixReport::summary() const {
  std::ostringstream os;
  os << "appendix_check: " << (pass ? "PASS" : "FAIL") << "  lines=" << lines;
  for (const auto& [lvl, c] : per_level)
    os << "  level" << (lvl == 4 ? ">2" : lvl == 2 ? "=2" : "=1") << "=" << c << "(*"
       << (starred_per_level.count(lvl) ? starred_per_level.at(lvl) : 0) << ")";
  for (const auto& m : mismatches) os << "\n  " << m;
  return os.str();
}

AppendixReport appendix_check(const std::string& path) {
  AppendixReport rep;
  const auto lines = load_appendix(path);
  rep.lines = lines.size();
  rep.pass = true;

  // standard-policy survivors per level, for the asterisk semantics
  std::map<int, std::set<std::string>> kept;
  const auto all6 = generate_all(6);
  for (const auto& s : filter_target_class(all6, 6, Policy::Standard))
    kept[level_class_of(s)].insert(format_spec(s));

  for (const auto& al : lines) {
    rep.per_level[al.level_class]++;
    if (al.starred) rep.starred_per_level[al.level_class]++;
    StructureSpec spec;
    QMatrix canon;
    try {
      spec = parse_spec(al.spec_text);
      canon = canonical_form(eval(spec));
    } catch (const std::exception& e) {
      rep.mismatches.push_back(al.spec_text + ": " + e.what());
      rep.pass = false;
      continue;
    }
    if (order_of(spec) != 6) {
      rep.mismatches.push_back(al.spec_text + ": order != 6");
      rep.pass = false;
    }
    if (level_class_of(spec) != al.level_class) {
      rep.mismatches.push_back(al.spec_text + ": level class mismatch");
      rep.pass = false;
    }
    const std::string got = triangle_body(canon);
    if (got != al.triangle) {
      rep.mismatches.push_back(al.spec_text + ": triangle " + got + " != " + al.triangle);
      rep.pass = false;
    }
    const bool excluded = !kept[al.level_class].count(format_spec(spec));
    if (excluded != al.starred) {
      rep.mismatches.push_back(al.spec_text + ": asterisk mismatch");
      rep.pass = false;
    }
  }
  return rep;
}

std::string CrosscheckReport::summary() const {
  std::ostringstream os;
  os << "invariant_crosscheck: " << (pass ? "PASS" : "FAIL")
     << "  specs=" << specs_checked;
  for (const auto& f : failures) os << "\n  " << f;
  return os.str();
}

CrosscheckReport invariant_crosscheck(int n_max) {
  CrosscheckReport rep;
  rep.pass = true;
  auto fail = [&](const std::string& msg) {
    rep.failures.push_back(msg);
    rep.pass = false;
  };
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& spec : generate_all(n)) {
      ++rep.specs_checked;
      const std::string name = format_spec(spec);
      const InvariantVector iv = invariants_recursive(spec);
      const QMatrix m = eval(spec);
      const Structure st = from_matrix(m);

      if (level(st) != iv.s) fail(name + ": level mismatch");
      if (pythagoras(st) != iv.p) fail(name + ": pythagoras mismatch");
      const RigidityProfile rp = rigidity_profile(st);
      if (rp.d1 != iv.d1) fail(name + ": d1 mismatch");
      if (rp.d_min != iv.d_min) fail(name + ": d_min mismatch");

      if (!is_degenerate(st)) {
        const int lv = level_from_matrix(canonical_form(m));
        const ExtNat want = iv.s;
        if (lv == 1 && !want.is(1)) fail(name + ": matrix level 1 mismatch");
        if (lv == 2 && !want.is(2)) fail(name + ": matrix level 2 mismatch");
        if (lv == 4 && !want.is(4)) fail(name + ": matrix level 4 mismatch");
        if (lv == 8 && (want.is(1) || want.is(2) || want.is(4)))
          fail(name + ": matrix level >=8 mismatch");
      }

      // Qdim additivity over the outermost construction
      if (spec.kind == StructureSpec::Kind::Delta) {
        const auto& child = spec.children[0];
        if (order_of(child) >= 1) {
          const int q1 = brauer_presentation(eval(child)).qdim;
          const int q2 = brauer_presentation(m).qdim;
          if (q2 != q1 + order_of(child)) fail(name + ": Qdim extension rule");
        }
      } else if (spec.kind == StructureSpec::Kind::Product) {
        int sum = 0;
        bool ok = true;
        for (const auto& c : spec.children) {
          if (order_of(c) < 1) {
            ok = false;
            break;
          }
          sum += brauer_presentation(eval(c)).qdim;
        }
        if (ok && brauer_presentation(m).qdim != sum)
          fail(name + ": Qdim product rule");
      }

      if (n <= 4 && !ap3_check(st)) fail(name + ": AP3");
    }
  }
  return rep;
}

}  // namespace nqm
