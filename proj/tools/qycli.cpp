// qycli: command-line front end for the qyw library.
//
// Every subcommand prints one JSON report (schema "qyw/1") on stdout.
// Exit codes: 0 ok, 1 fail, 2 usage or input error.

#include <chrono>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qyw/classify.hpp"
#include "qyw/repforge.hpp"
#include "qyw/rttcore.hpp"

namespace {

using nlohmann::json;
using namespace qyw;

struct Report {
  std::string status = "ok";  // ok | fail | not-finite | none
  json result = json::object();
  std::string reason;
  json witness;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(item);
  return out;
}

std::vector<QRat> parse_params(const std::string& s) {
  std::vector<QRat> out;
  for (const std::string& x : split(s, ',')) out.push_back(parse_param(x));
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (const std::string& x : split(s, ',')) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(x, &pos);
    } catch (const std::exception&) {
      throw UsageError("not an integer: '" + x + "'");
    }
    if (x.find_first_not_of(" \t", pos) != std::string::npos) throw UsageError("not an integer: '" + x + "'");
    out.push_back(v);
  }
  return out;
}

PairParam parse_pair(const std::string& s) {
  std::vector<QRat> v = parse_params(s);
  if (v.size() != 2) throw UsageError("a pair is written 'alpha,beta', got '" + s + "'");
  return PairParam{v[0], v[1]};
}

// "a,b;c,d"
std::vector<PairParam> parse_pairs(const std::string& s) {
  std::vector<PairParam> out;
  for (const std::string& p : split(s, ';')) out.push_back(parse_pair(p));
  return out;
}

ModuleRep load_module(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open module file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("module file '" + path + "' is not valid JSON: " + e.what());
  }
  return module_from_json(j);
}

json module_summary(const ModuleRep& m) {
  json j{{"algebra", m.pres->name()}, {"dim", m.dim}, {"cap", m.cap}};
  if (m.highest) j["highest"] = *m.highest;
  return j;
}

// Writes the module to `out` when given, otherwise embeds it in the result.
void emit_module(Report& r, const ModuleRep& m, const std::string& out) {
  r.result = module_summary(m);
  if (out.empty()) {
    r.result["module"] = module_to_json(m);
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write '" + out + "'");
  f << module_to_json(m).dump(1) << '\n';
  r.result["file"] = out;
}

void set_drinfeld(Report& r, const ClassifyResult& c) {
  if (const auto* d = std::get_if<DrinfeldResult>(&c)) {
    r.result = drinfeld_to_json(*d);
  } else {
    r.status = "not-finite";
    r.reason = std::get<NotFD>(c).reason;
  }
}

// Factored highest weight of a tensor product of gl2 evaluation modules.
FactoredHW gl2_pairs_hw(const std::vector<PairParam>& pairs) {
  FactoredHW hw{{FactoredRational::constant(QRat(1)), FactoredRational::constant(QRat(1))},
                {FactoredRational::constant(QRat(1)), FactoredRational::constant(QRat(1))}};
  for (const PairParam& p : pairs) {
    hw.first[0] = hw.first[0] * FactoredRational::linear_inv(p.alpha, p.alpha.inv());
    hw.first[1] = hw.first[1] * FactoredRational::linear_inv(p.beta, p.beta.inv());
    hw.second[0] = hw.second[0] * FactoredRational::linear(p.alpha.inv(), p.alpha);
    hw.second[1] = hw.second[1] * FactoredRational::linear(p.beta.inv(), p.beta);
  }
  return hw;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qycli: exact computations with RTT presentations, modules and Drinfeld polynomials"};
  app.require_subcommand(1);
  bool timing = false;
  app.add_flag("--timing", timing, "Add elapsed milliseconds to the report (makes output non-reproducible)");

  Report rep;
  std::function<void()> action;

  // --- identity suites ---
  int n = 2;
  auto* ybe = app.add_subcommand("ybe", "Yang-Baxter residual of the constant R-matrix");
  ybe->add_option("--n", n, "Matrix size N")->required()->check(CLI::Range(2, 6));
  ybe->callback([&] {
    action = [&] {
      Mat res = ybe_check(n);
      rep.result = {{"n", n}, {"residual", res.nnz()}};
      if (!res.is_zero()) {
        rep.status = "fail";
        rep.reason = "nonzero Yang-Baxter residual";
        rep.witness = mat_to_json(res);
      }
    };
  });

  auto* trig = app.add_subcommand("trig-id", "Unitarity and swap identities of the trigonometric R-matrix");
  trig->add_option("--n", n, "Matrix size N")->required()->check(CLI::Range(2, 5));
  trig->callback([&] {
    action = [&] {
      MatUV inv = trig_inverse_check(n), sw = trig_swap_check(n);
      rep.result = {{"n", n}, {"inverse_zero", inv.is_zero()}, {"swap_zero", sw.is_zero()}};
      if (!inv.is_zero() || !sw.is_zero()) {
        rep.status = "fail";
        rep.reason = !inv.is_zero() ? "inverse identity fails" : "swap identity fails";
        rep.witness = (!inv.is_zero() ? inv : sw).str();
      }
    };
  });

  // --- straightening ---
  std::string algebra, expr, strategy = "leftmost";
  int cap = 8;
  auto* st = app.add_subcommand("straighten", "Rewrite an expression in the ordered PBW basis");
  st->add_option("--algebra", algebra, "Presentation name, e.g. uqgl:2, yqsp:2")->required();
  st->add_option("--expr", expr, "Expression such as \"t[1,1;0]*t[2,1;0]\"")->required();
  st->add_option("--cap", cap, "Largest level allowed in the input")->check(CLI::NonNegativeNumber);
  st->add_option("--strategy", strategy, "Redex choice")->check(CLI::IsMember({"leftmost", "rightmost"}));
  st->callback([&] {
    action = [&] {
      auto p = Presentation::make(algebra);
      const Strategy s = strategy == "rightmost" ? Strategy::rightmost : Strategy::leftmost;
      NCPoly x = p->parse(expr);
      NCPoly y = p->has_levels() ? p->straighten(x, cap, s) : p->straighten(x, s);
      rep.result = p->str(y);
    };
  });

  int maxlen = 4, trials = 200, max_level = 2;
  std::uint64_t seed = 1;
  auto* conf = app.add_subcommand("confluence", "Random words normalized under two rewriting strategies");
  conf->add_option("--algebra", algebra, "Presentation name")->required();
  conf->add_option("--maxlen", maxlen, "Maximal word length")->check(CLI::Range(1, 12));
  conf->add_option("--trials", trials, "Number of random words")->check(CLI::NonNegativeNumber);
  conf->add_option("--seed", seed, "Random seed");
  conf->add_option("--max-level", max_level, "Largest generator level")->check(CLI::NonNegativeNumber);
  conf->callback([&] {
    action = [&] {
      auto p = Presentation::make(algebra);
      ConfluenceReport c = confluence_fuzz(*p, maxlen, trials, seed, max_level);
      rep.result = {{"algebra", algebra}, {"trials", c.trials}, {"seed", seed},
                    {"disagreements", c.disagreements.size()}};
      if (!c.disagreements.empty()) {
        rep.status = "fail";
        rep.reason = "strategies disagree";
        rep.witness = c.disagreements;
      }
    };
  });

  int m_level = 1, word_cap = 2;
  auto* kap = app.add_subcommand("kappa-check", "Linear independence of kappa images of ordered monomials");
  kap->add_option("--n", n, "N (only 2 is supported at desk scale)")->required()->check(CLI::Range(2, 2));
  kap->add_option("--m", m_level, "Level cap")->required()->check(CLI::Range(0, 2));
  kap->add_option("--word-cap", word_cap, "Monomial length cap")->check(CLI::Range(0, 3));
  kap->callback([&] {
    action = [&] {
      KappaReport k = kappa_independence_check(n, m_level, word_cap);
      rep.result = {{"n", n}, {"m", m_level}, {"monomials", k.monomials}, {"rank", k.rank},
                    {"independent", k.independent}};
      if (!k.independent) {
        rep.status = "fail";
        rep.reason = "rank below monomial count";
      }
    };
  });

  // --- modules ---
  std::string kind, a_text, b_text, out_file;
  std::vector<std::string> module_files;
  int depth = 12;
  auto* mod = app.add_subcommand("module", "Build and transform modules");
  mod->require_subcommand(1);
  auto* mb = mod->add_subcommand("build", "Finite-dimensional U_q(gl_2) or U'_q(sp_2) module");
  mb->add_option("--kind", kind, "gl2 (t11 = a, t22 = b) or sp2 (s21 = a, s12 = b)")
      ->required()
      ->check(CLI::IsMember({"gl2", "sp2"}));
  mb->add_option("--a", a_text, "First parameter, e.g. q^2")->required();
  mb->add_option("--b", b_text, "Second parameter, e.g. -q^3")->required();
  mb->add_option("--depth", depth, "Verma search depth")->check(CLI::PositiveNumber);
  mb->add_option("-o,--out", out_file, "Write the module JSON to this file");
  mb->callback([&] {
    action = [&] {
      const QRat a = parse_param(a_text, true), b = parse_param(b_text, true);
      BuildResult br = kind == "gl2" ? gl2_finite_module(a, b, depth) : uqsp2_module(a, b, depth);
      if (const auto* nf = std::get_if<NotFinite>(&br)) {
        rep.status = "not-finite";
        rep.reason = "no singular vector up to depth " + std::to_string(nf->depth);
        return;
      }
      emit_module(rep, std::get<ModuleRep>(br), out_file);
    };
  });
  auto* me = mod->add_subcommand("eval", "Evaluation module (affine for gl, twisted for sp)");
  me->add_option("--module", module_files, "Module file")->required()->expected(1);
  me->add_option("--cap", cap, "Series cap")->check(CLI::NonNegativeNumber);
  me->add_option("-o,--out", out_file, "Output file");
  me->callback([&] {
    action = [&] {
      ModuleRep m = load_module(module_files.at(0));
      const Algebra alg = m.pres->algebra();
      if (alg == Algebra::uqgl) emit_module(rep, eval_affine(m, cap), out_file);
      else if (alg == Algebra::uqsp) emit_module(rep, twisted_eval(m, cap), out_file);
      else throw UsageError("eval needs a uqgl or uqsp module, got " + m.pres->name());
    };
  });
  auto* mt = mod->add_subcommand("tensor", "Tensor product of affine modules");
  mt->add_option("--module", module_files, "Module files (two or more, in order)")->required()->expected(2, 8);
  mt->add_option("-o,--out", out_file, "Output file");
  mt->callback([&] {
    action = [&] {
      ModuleRep acc = load_module(module_files.at(0));
      for (std::size_t i = 1; i < module_files.size(); ++i) acc = tensor(acc, load_module(module_files[i]));
      emit_module(rep, acc, out_file);
    };
  });
  auto* mr = mod->add_subcommand("restrict", "Restriction of a U_q(gl^_2n) module to the twisted q-Yangian");
  mr->add_option("--module", module_files, "Module file")->required()->expected(1);
  mr->add_option("-o,--out", out_file, "Output file");
  mr->callback([&] {
    action = [&] { emit_module(rep, twisted_restrict(load_module(module_files.at(0))), out_file); };
  });

  std::string module_file;
  auto* ver = app.add_subcommand("verify", "Check every defining relation on a module");
  ver->add_option("--module", module_file, "Module file")->required();
  ver->callback([&] {
    action = [&] {
      ModuleRep m = load_module(module_file);
      ResidualReport r = verify_relations(m);
      rep.result = module_summary(m);
      rep.result["checked"] = r.checked;
      rep.result["failures"] = r.failures;
      if (!r.ok()) {
        rep.status = "fail";
        rep.reason = "relation residual is nonzero";
        rep.witness = {{"relation", r.worst_label}, {"nonzeros", r.worst_nnz}};
      }
    };
  });

  // --- classification ---
  std::string pairs_text, list_a, list_b;
  int dmax = -1;
  auto* cls = app.add_subcommand("classify", "Drinfeld polynomials of a highest weight");
  cls->add_option("--kind", kind, "gl2, glN, sp2 or sp2n")->required()->check(CLI::IsMember({"gl2", "glN", "sp2", "sp2n"}));
  cls->add_option("--pairs", pairs_text, "gl2: tensor factors \"alpha,beta;alpha,beta\"");
  cls->add_option("--m", list_a, "glN: exponents m_1 >= ... >= m_N of an evaluation module");
  cls->add_option("--mu", list_a, "sp2/sp2n: mu_i");
  cls->add_option("--mup", list_b, "sp2/sp2n: mu'_i");
  cls->add_option("--module", module_file, "Classify the highest weight of a module file instead");
  cls->add_option("--dmax", dmax, "Degree bound for series reconstruction (default: largest the cap allows)")
      ->check(CLI::Range(0, 8));
  cls->callback([&] {
    action = [&] {
      const bool sp = kind == "sp2" || kind == "sp2n";
      if (!module_file.empty()) {
        ModuleRep m = load_module(module_file);
        HighestWeightData hw = highest_weight_of(m);
        if (dmax < 0) dmax = (m.cap - 1) / 2;
        if (sp && m.pres->algebra() != Algebra::yqsp) throw UsageError("sp classification needs a yqsp module");
        if (!sp && m.pres->algebra() != Algebra::uqaff) throw UsageError("gl classification needs a uqaff module");
        set_drinfeld(rep, sp ? classify_sp2n_series(hw.first, hw.second, dmax)
                             : classify_glN_series(hw.first, hw.second, dmax, m.pres->extended()));
        return;
      }
      if (kind == "gl2") {
        if (pairs_text.empty()) throw UsageError("classify --kind gl2 needs --pairs or --module");
        set_drinfeld(rep, classify_glN(gl2_pairs_hw(parse_pairs(pairs_text))));
      } else if (kind == "glN") {
        if (list_a.empty()) throw UsageError("classify --kind glN needs --m or --module");
        FactoredHW hw;
        for (int mi : parse_ints(list_a)) {
          hw.first.push_back(FactoredRational::linear_inv(QRat::q_pow(mi), QRat::q_pow(-mi)));
          hw.second.push_back(FactoredRational::linear(QRat::q_pow(-mi), QRat::q_pow(mi)));
        }
        set_drinfeld(rep, classify_glN(hw));
      } else {
        if (list_a.empty() || list_b.empty()) throw UsageError("classify --kind " + kind + " needs --mu and --mup");
        const std::vector<QRat> mu = parse_params(list_a), mup = parse_params(list_b);
        if (kind == "sp2" && mu.size() != 1) throw UsageError("sp2 takes one mu and one mu'");
        FdcoResult f = fdco_check(mu, mup);
        json ps = json::array();
        for (const auto& p : f.p) ps.push_back(p ? json(*p) : json(nullptr));
        if (!f.finite) {
          rep.status = "not-finite";
          rep.reason = "mu'_i + q^(2p_i+1) mu_i = 0 has no nondecreasing solution p_i >= 0";
          rep.witness = {{"p", ps}};
          return;
        }
        std::vector<int> p;
        for (const auto& x : f.p) p.push_back(*x);
        rep.result = drinfeld_to_json(drinfeld_sp2n_eval(p, mu));
        rep.result["p"] = ps;
      }
    };
  });

  std::string pair1, pair2;
  auto* spi = app.add_subcommand("spiral", "q-spirals");
  spi->require_subcommand(1);
  auto* gp = spi->add_subcommand("gp", "General position of the q-spirals of two pairs");
  gp->add_option("--pair1", pair1, "alpha,beta")->required();
  gp->add_option("--pair2", pair2, "alpha,beta")->required();
  gp->callback([&] {
    action = [&] {
      const PairParam p1 = parse_pair(pair1), p2 = parse_pair(pair2);
      const QSpiral s1 = qspiral_from_pair(p1), s2 = qspiral_from_pair(p2);
      rep.result = {{"spiral1", s1.str()},
                    {"spiral2", s2.str()},
                    {"general_position", general_position(s1, s2)},
                    {"irreducible_affine", irr_predicate_affine({p1, p2})},
                    {"irreducible_twisted", irr_predicate_twisted({p1, p2})}};
    };
  });

  auto* dri = app.add_subcommand("drinfeld", "Closed-form Drinfeld polynomials");
  dri->require_subcommand(1);
  auto* esp = dri->add_subcommand("eval-sp", "Evaluation module V(mu; mu') of Y'_q(sp_2n) with parameters p");
  esp->add_option("--p", list_a, "p_1 <= ... <= p_n")->required();
  esp->add_option("--mu", list_b, "mu_1, ..., mu_n")->required();
  esp->callback([&] {
    action = [&] { rep.result = drinfeld_to_json(drinfeld_sp2n_eval(parse_ints(list_a), parse_params(list_b))); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "qycli: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  json command = json::array();
  for (int i = 1; i < argc; ++i) command.push_back(argv[i]);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    action();
  } catch (const UsageError& e) {
    std::cerr << "qycli: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "qycli: " << e.what() << '\n';
    return 2;
  }
  json out{{"schema", "qyw/1"}, {"command", command}, {"status", rep.status}, {"result", rep.result}};
  if (!rep.reason.empty()) out["reason"] = rep.reason;
  if (!rep.witness.is_null()) out["witness"] = rep.witness;
  if (timing)
    out["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << out.dump(2) << '\n';
  return rep.status == "fail" ? 1 : 0;
}
