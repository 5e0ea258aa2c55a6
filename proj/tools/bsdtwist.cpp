#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/harness.hpp"

using namespace bsdtwist;
using json = nlohmann::ordered_json;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int precision_bits = static_cast<int>(default_precision());
  long hecke_bound = 13;
  long d_search_max = 200;
  unsigned threads = 1;
  long manin_constant = 1;
  bool json_out = false;
  std::string out_path;
};

struct CurveArgs {
  std::string invariants;
  std::string label;
  std::string db;
};

void add_curve_options(CLI::App* cmd, CurveArgs& c) {
  cmd->add_option("--curve", c.invariants, "a1,a2,a3,a4,a6");
  cmd->add_option("--label", c.label, "curve label in the --db file, e.g. 11a1");
  cmd->add_option("--db", c.db, "curve database file");
}

EllipticCurve resolve_curve(const CurveArgs& c) {
  if (!c.label.empty()) {
    if (c.db.empty()) throw Usage("--label requires --db");
    return find_curve(parse_db(c.db), c.label).curve();
  }
  if (c.invariants.empty()) throw Usage("give --curve or --label with --db");
  std::array<Int, 5> a;
  std::stringstream ss(c.invariants);
  std::string tok;
  std::size_t i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i == 5 || tok.empty() || a[i].set_str(tok, 10) != 0) throw Usage("malformed --curve '" + c.invariants + "'");
    ++i;
  }
  if (i != 5) throw Usage("--curve needs five comma-separated integers");
  try {
    return EllipticCurve(a);
  } catch (const Error&) {
    throw Usage("--curve does not define an elliptic curve");
  }
}

std::vector<long> parse_list(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (tok.empty() || pos != tok.size()) throw Usage("malformed list '" + s + "'");
    out.push_back(v);
  }
  return out;
}

// The newform factor of E at its conductor.
const NewformFactor& factor_of(const EllipticCurve& E, const Config& cfg, std::vector<NewformFactor>& store) {
  store = decompose(conductor(E).get_si());
  return match_curve(store, E, cfg.hecke_bound);
}

LRatio algebraic_part(const NewformFactor& f) {
  return is_prime(Int(f.level)) ? lratio_plus(f) : lratio_plus_general(f);
}

void print(const json& j, const std::string& text, const Config& cfg) {
  if (cfg.json_out)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

template <class Row>
void output(const Report<Row>& rep, const Config& cfg) {
  if (!cfg.out_path.empty()) {
    emit(rep, cfg.json_out ? Format::Json : Format::Csv, cfg.out_path);
    return;
  }
  std::cout << (cfg.json_out ? to_json(rep) : to_csv(rep));
  if (!cfg.json_out)
    for (const auto& [k, v] : rep.summary) std::cerr << k << " = " << v << "\n";
}

std::string matrix_text(const IntMatrix& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << "  [";
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << "]\n";
  }
  return out.str();
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_si());
    rows.push_back(r);
  }
  return rows;
}

template <class V>
std::string join(const V& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

json rat_list(const RatVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted L-values, Brandt modules and analytic Sha scans"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--precision", cfg.precision_bits, "working precision in bits (default from BSDTWIST_PRECISION or 128)")
      ->check(CLI::Range(64, 1 << 20));
  app.add_option("--hecke-bound", cfg.hecke_bound, "primes used to match a curve to a newform")
      ->check(CLI::Range(2L, 1000L));
  app.add_option("--d-max", cfg.d_search_max, "largest D tried by hypothesis (*) searches")->check(CLI::Range(3L, 100000L));
  app.add_option("--threads", cfg.threads, "worker threads for scans")->check(CLI::Range(1u, 256u));
  app.add_option("--manin", cfg.manin_constant, "Manin constant of the optimal curve")->check(CLI::Range(1L, 1000L));
  app.add_flag("--json", cfg.json_out, "JSON output");
  app.add_option("--out", cfg.out_path, "write the report to this file");

  CurveArgs lr_curve;
  auto* lr = app.add_subcommand("lratio", "L(E, 1) / Omega^+ as an exact rational");
  add_curve_options(lr, lr_curve);

  CurveArgs tw_curve;
  long tw_D = 0;
  auto* tw = app.add_subcommand("twist-lratio", "twisted index of E at -D with a numeric cross-check");
  add_curve_options(tw, tw_curve);
  tw->add_option("-D", tw_D, "-D is the fundamental discriminant")->required();

  long br_N = 0, br_D = 0;
  std::string br_matrices;
  bool br_gross = false;
  auto* br = app.add_subcommand("brandt", "Brandt module of prime level N");
  br->add_option("-N", br_N, "prime level")->required();
  br->add_option("--matrices", br_matrices, "comma-separated m for B(m)");
  br->add_option("-D", br_D, "discriminant for --gross");
  br->add_flag("--gross", br_gross, "print the Gross vectors chi_D and chi0_D");

  long sq_N = 0, sq_D = 0;
  auto* sq = app.add_subcommand("squareness", "compare the modular-symbol and quaternion paths");
  sq->add_option("-N", sq_N, "prime level")->required();
  sq->add_option("-D", sq_D, "fundamental discriminant -D")->required();

  std::string sc_db;
  long sc_bound = 130000;
  bool sc_star_star = false;
  auto* sc = app.add_subcommand("scan-conj25", "torsion, Tamagawa and Sha data of twists");
  sc->add_option("--db", sc_db, "curve database file")->required();
  sc->add_option("--bound", sc_bound, "largest N D^2");
  sc->add_flag("--star-star", sc_star_star, "admit D by hypothesis (**) instead of gcd(N, D) = 1");

  std::string st_db;
  long st_cbound = 700, st_bound = 130000;
  auto* st = app.add_subcommand("scan-star", "search D for each odd prime dividing sha_an");
  st->add_option("--db", st_db, "curve database file")->required();
  st->add_option("--conductor-bound", st_cbound, "largest conductor");
  st->add_option("--bound", st_bound, "largest N D^2");

  std::string pa_db;
  long pa_cbound = 1000;
  auto* pa = app.add_subcommand("parity", "q-adic orders of lratio and sha_an at prime level");
  pa->add_option("--db", pa_db, "curve database file")->required();
  pa->add_option("--conductor-bound", pa_cbound, "largest conductor");

  std::string t1_db;
  auto* t1 = app.add_subcommand("table1", "twist data for 14a1, 21a1, 27a1 and 105a1");
  t1->add_option("--db", t1_db, "curve database file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto prec = static_cast<mpfr_prec_t>(cfg.precision_bits);
  ScanOptions opt;
  opt.threads = cfg.threads;
  opt.precision = prec;

  try {
    if (*lr) {
      EllipticCurve E = resolve_curve(lr_curve);
      std::vector<NewformFactor> store;
      const NewformFactor& f = factor_of(E, cfg, store);
      Rat v = algebraic_part(f).value * cfg.manin_constant;
      print({{"level", f.level}, {"lratio", v.get_str()}}, v.get_str() + "\n", cfg);
    } else if (*tw) {
      EllipticCurve E = resolve_curve(tw_curve);
      std::vector<NewformFactor> store;
      const NewformFactor& f = factor_of(E, cfg, store);
      LRatio t;
      bool vanishes = false;
      try {
        t = twisted_index(f, tw_D);
      } catch (const Error& e) {
        if (e.code() != Errc::ZeroTwist) throw;
        vanishes = true;
      }
      Rat odd = vanishes ? Rat(0) : away_from({2}, t.value);
      LValue L = numeric_L1(quadratic_twist(E, -tw_D), 1e-20, prec);
      Real numeric = L.value * sqrt(Real(tw_D, prec)) / real_periods(E, prec).omega_minus_im;
      std::ostringstream text;
      bool agrees = false;
      double ratio = 0;
      if (vanishes) {
        agrees = std::fabs(L.value.to_double()) < 1e-10;
        text << "twisted_index = 0 (pi(e_D) vanishes)\n";
      } else {
        ratio = Rat(t.value).get_d() / numeric.to_double();
        double e = std::log2(std::fabs(ratio));
        agrees = std::fabs(e - std::round(e)) < 1e-6;
      }
      if (!vanishes)
        text << "twisted_index = " << t.value.get_str() << (t.two_ambiguity ? " (up to a power of 2)" : "") << "\n"
             << "odd part = " << odd.get_str() << "\n";
      text << "numeric L(E_-D, 1) sqrt(D) / Omega^- = " << numeric.to_string(15) << "\n";
      if (!vanishes) text << "exact / numeric = " << ratio << (agrees ? " (a power of 2)" : " (NOT a power of 2)") << "\n";
      print({{"level", f.level},
             {"D", tw_D},
             {"twisted_index", t.value.get_str()},
             {"two_ambiguity", t.two_ambiguity},
             {"odd_part", odd.get_str()},
             {"numeric", numeric.to_string(15)},
             {"power_of_two_ratio", agrees}},
            text.str(), cfg);
      if (!agrees) return 1;
    } else if (*br) {
      BrandtModule m(br_N);
      json j{{"N", br_N}, {"classes", m.size()}, {"weights", m.weights()}};
      std::ostringstream text;
      text << "N = " << br_N << ", " << m.size() << " ideal classes, weights " << join(m.weights()) << "\n";
      if (!br_matrices.empty()) {
        json mats = json::object();
        for (long k : parse_list(br_matrices)) {
          if (k < 1) throw Usage("--matrices entries must be positive");
          IntMatrix B = m.brandt_matrix(k);
          text << "B(" << k << ") =\n" << matrix_text(B);
          mats[std::to_string(k)] = matrix_json(B);
        }
        j["matrices"] = mats;
      }
      if (br_gross) {
        if (br_D == 0) throw Usage("--gross requires -D");
        GrossVector g = gross_vector(m, br_D);
        std::vector<std::string> chi, chi0;
        for (const auto& x : g.chi) chi.push_back(x.get_str());
        for (const auto& x : g.chi0) chi0.push_back(x.get_str());
        text << "embedding numbers h_i(-" << br_D << ") = " << join(g.embedding_numbers) << "\n"
             << "chi_D = " << join(chi) << "\n"
             << "chi0_D = " << join(chi0) << "\n"
             << "deg chi0_D = " << BrandtModule::deg(g.chi0).get_str() << "\n";
        j["D"] = br_D;
        j["embedding_numbers"] = g.embedding_numbers;
        j["chi"] = rat_list(g.chi);
        j["chi0"] = rat_list(g.chi0);
        j["deg_chi0"] = BrandtModule::deg(g.chi0).get_str();
      }
      print(j, text.str(), cfg);
    } else if (*sq) {
      output(squareness_report(sq_N, sq_D), cfg);
    } else if (*sc) {
      opt.rule = sc_star_star ? CoprimeRule::StarStar : CoprimeRule::Gcd;
      output(scan_conjecture(parse_db(sc_db), sc_bound, opt), cfg);
    } else if (*st) {
      output(scan_hypothesis_star(parse_db(st_db), st_cbound, st_bound, opt), cfg);
    } else if (*pa) {
      output(parity_findings(parse_db(pa_db), pa_cbound, cfg.d_search_max, opt), cfg);
    } else if (*t1) {
      output(table1(parse_db(t1_db), prec), cfg);
    }
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
