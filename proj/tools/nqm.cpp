#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nqm/counting.hpp"
#include "nqm/search.hpp"
#include "nqm/spec_ast.hpp"
#include "nqm/structure.hpp"
#include "nqm/verify.hpp"

namespace {

using namespace nqm;

int default_workers() {
  if (const char* env = std::getenv("NQM_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

QMatrix matrix_from_arg(const std::string& spec_text, const std::string& matrix_file) {
  if (!spec_text.empty()) return eval(parse_spec(spec_text));
  return parse_matrix(read_file(matrix_file));
}

void emit_results(const ClassifyResult& res, const std::string& out_file,
                  const std::string& summary_file) {
  for (const auto& [lvl, vec] : res.per_level) {
    std::cout << "level " << (lvl == 4 ? ">=4" : std::to_string(lvl)) << ": " << vec.size()
              << " matrices\n";
    for (const auto& m : vec) std::cout << "  " << triangle_body(m) << "\n";
  }
  std::size_t total = 0;
  for (const auto& [lvl, vec] : res.per_level) total += vec.size();
  std::cout << "total: " << total << "\n";
  if (!out_file.empty()) {
    std::ofstream out(out_file);
    for (const auto& [lvl, vec] : res.per_level)
      for (const auto& m : vec) {
        nlohmann::json j;
        j["matrix"] = triangle_body(m);
        j["type"] = m.type;
        j["level"] = lvl;
        const std::vector<Label> r0(m.e.begin(), m.e.begin() + m.n);
        const std::vector<Label> r1(m.e.begin() + m.n, m.e.begin() + 2 * m.n);
        const SecondRowParams p = params_of_rows(m.n, lvl, r0, r1);
        j["params"] = {p.d, p.f, p.r, p.v, p.t, p.u};
        out << j.dump() << "\n";
      }
  }
  if (!summary_file.empty()) {
    std::ofstream out(summary_file);
    out << render_timings_tsv(res);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification engine for finite quaternionic structures"};
  app.require_subcommand(1);

  // ---- count ----
  auto* count = app.add_subcommand("count", "Counting table for elementary types");
  int count_max = 9;
  std::string count_format = "tsv";
  count->add_option("--max-order", count_max, "largest order to tabulate");
  count->add_option("--format", count_format, "tsv, csv or json")
      ->check(CLI::IsMember({"tsv", "csv", "json"}));

  // ---- enumerate ----
  auto* enumr = app.add_subcommand("enumerate", "Search for normal quaternionic matrices");
  int en_order = 0;
  std::string en_levels = "1,2,4";
  std::string en_policy = "standard";
  int en_workers = default_workers();
  std::string en_partition, en_resume, en_out, en_summary;
  enumr->add_option("--order", en_order, "order of the matrices");
  enumr->add_option("--levels", en_levels, "comma-separated level classes from {1,2,4}");
  enumr->add_option("--policy", en_policy, "standard or none")
      ->check(CLI::IsMember({"standard", "none"}));
  enumr->add_option("--workers", en_workers, "worker count");
  enumr->add_option("--partition-until", en_partition, "truncate the search at i,j");
  enumr->add_option("--resume", en_resume, "resume from a checkpoint file");
  enumr->add_option("--out", en_out, "result file (JSON lines) or checkpoint target");
  enumr->add_option("--summary", en_summary, "per-parameter runtime TSV");

  // ---- normalize ----
  auto* norm = app.add_subcommand("normalize", "Normal form of a structure or matrix");
  std::string no_spec, no_matrix;
  norm->add_option("--spec", no_spec, "structure expression");
  norm->add_option("--matrix", no_matrix, "matrix file (triangle or JSON)");

  // ---- invariants ----
  auto* inv = app.add_subcommand("invariants", "Invariants of an elementary type");
  std::string iv_spec;
  bool iv_direct = false;
  inv->add_option("--spec", iv_spec, "structure expression")->required();
  inv->add_flag("--direct", iv_direct, "recompute on the structure and compare");

  // ---- check ----
  auto* chk = app.add_subcommand("check", "Axiom report for a matrix");
  std::string ck_matrix;
  chk->add_option("--matrix", ck_matrix, "matrix file")->required();

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "Elementary-type verification for an order");
  int ve_order = 0;
  std::string ve_policy = "standard";
  bool ve_appendix = false;
  std::string ve_appendix_file = "data/appendix_order6.txt";
  int ve_workers = default_workers();
  ver->add_option("--order", ve_order, "order to verify")->required();
  ver->add_option("--policy", ve_policy, "standard or none")
      ->check(CLI::IsMember({"standard", "none"}));
  ver->add_flag("--appendix", ve_appendix, "also check the bundled order-6 list");
  ver->add_option("--appendix-file", ve_appendix_file, "appendix data path");
  ver->add_option("--workers", ve_workers, "worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*count) {
      std::cout << render_count_table(count_table(count_max), count_format);
      return 0;
    }

    if (*enumr) {
      ClassifyOptions opt;
      opt.policy = parse_policy(en_policy);
      opt.workers = en_workers;
      if (!en_resume.empty()) {
        std::ifstream in(en_resume);
        if (!in) throw std::runtime_error("cannot open checkpoint " + en_resume);
        const Checkpoint cp = read_checkpoint(in);
        std::cerr << "resuming " << cp.records.size() << " partial matrices\n";
        emit_results(resume(cp, opt), en_out, en_summary);
        return 0;
      }
      if (en_order < 3) throw std::runtime_error("--order must be at least 3");
      std::vector<int> levels;
      std::stringstream ls(en_levels);
      std::string tok;
      while (std::getline(ls, tok, ',')) levels.push_back(std::stoi(tok));
      if (!en_partition.empty()) {
        const auto comma = en_partition.find(',');
        if (comma == std::string::npos)
          throw std::runtime_error("--partition-until expects i,j");
        const std::pair<int, int> until{std::stoi(en_partition.substr(0, comma)),
                                        std::stoi(en_partition.substr(comma + 1))};
        const Checkpoint cp = partition(en_order, levels, opt, until);
        std::cerr << "partition at (" << until.first << "," << until.second << "): "
                  << cp.records.size() << " partial matrices\n";
        if (en_out.empty()) {
          write_checkpoint(cp, std::cout);
        } else {
          std::ofstream out(en_out);
          write_checkpoint(cp, out);
        }
        return 0;
      }
      emit_results(classify(en_order, levels, opt), en_out, en_summary);
      return 0;
    }

    if (*norm) {
      if (no_spec.empty() == no_matrix.empty())
        throw std::runtime_error("normalize needs exactly one of --spec/--matrix");
      const QMatrix canon = canonical_form(matrix_from_arg(no_spec, no_matrix));
      std::cout << format_matrix(canon) << "\n";
      return 0;
    }

    if (*inv) {
      const StructureSpec spec = parse_spec(iv_spec);
      const InvariantVector v = invariants_recursive(spec);
      std::cout << "spec: " << format_spec(spec) << "\n"
                << "s=" << v.s.str() << " p=" << v.p.str() << " u=" << v.u.str()
                << " d1=" << v.d1 << " d_min=" << v.d_min << "\n";
      if (iv_direct) {
        const Structure st = from_matrix(eval(spec));
        const RigidityProfile rp = rigidity_profile(st);
        const bool agree = level(st) == v.s && pythagoras(st) == v.p &&
                           rp.d1 == v.d1 && rp.d_min == v.d_min;
        std::cout << "direct: s=" << level(st).str() << " p=" << pythagoras(st).str()
                  << " d1=" << rp.d1 << " d_min=" << rp.d_min
                  << " agreement=" << (agree ? "yes" : "NO") << "\n";
        if (!agree) return 1;
      }
      return 0;
    }

    if (*chk) {
      const QMatrix m = parse_matrix(read_file(ck_matrix));
      const AxiomReport rep = check_axioms(m);
      std::cout << "order=" << m.n << " type=" << m.type << "\n"
                << "m1=" << rep.m1 << " m2=" << rep.m2 << " m3=" << rep.m3
                << " red=" << rep.red << "\n";
      if (rep.pre3()) {
        const BrauerPresentation bp = brauer_presentation(m);
        bool reduced_fixed = rep.red;
        for (Label v : m.e) reduced_fixed = reduced_fixed && bp.relabel.at(v) == v;
        const bool quat = bp.qdim == span_dim_entries(m);
        const Structure st = from_matrix(m);
        std::cout << "level=" << level(st).str() << " qdim=" << bp.qdim
                  << " reduced=" << reduced_fixed << " quaternionic=" << quat << "\n";
      }
      return 0;
    }

    if (*ver) {
      const Policy pol = parse_policy(ve_policy);
      const EtcReport rep = etc_verify(ve_order, pol, ve_workers);
      std::cout << rep.summary() << "\n" << rep.json() << "\n";
      bool pass = rep.pass;
      if (ve_appendix) {
        const AppendixReport ar = appendix_check(ve_appendix_file);
        std::cout << ar.summary() << "\n";
        pass = pass && ar.pass;
      }
      return pass ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
