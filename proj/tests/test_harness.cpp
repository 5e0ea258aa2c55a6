#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/harness.hpp"
#include "curve_fixture.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace bsdtwist;

namespace {

const std::vector<CurveRecord>& fixture_db() {
  static const std::vector<CurveRecord> db = parse_db("tests/data/curves.txt");
  return db;
}

template <class F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::Internal;
}

// Verdicts recomputed with machine integers.
struct Verdicts {
  bool holds, odd_cp, strict, cp;
};
Verdicts oracle_verdicts(long torsion, long cp, long sha) {
  long t2 = torsion * torsion, odd = t2;
  while (odd % 2 == 0) odd /= 2;
  return {(sha * cp) % odd == 0, cp % odd == 0, (sha * cp) % t2 == 0, cp % t2 == 0};
}

// Cremona label order: shorter class labels first, then alphabetical.
bool label_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
    return std::make_tuple(std::stol(s.substr(0, i)), j - i, s.substr(i, j - i));
  };
  return split(a) < split(b);
}

std::string random_text(testgen::Gen& g) {
  const std::string alphabet = "ab,\" \n1-/";
  std::string s;
  for (long k = g.uniform(0, 8); k > 0; --k) s += alphabet[g.uniform(0, alphabet.size() - 1)];
  return s;
}

}  // namespace

TEST_CASE("parse_db") {
  SUBCASE("single record") {
    std::istringstream in("11 a 1 0 -1 1 -10 -20 0 5\n");
    auto db = parse_db(in);
    REQUIRE(db.size() == 1);
    CHECK(db[0].label() == "11a1");
    CHECK(db[0].conductor == 11);
    CHECK(db[0].a == std::array<Int, 5>{0, -1, 1, -10, -20});
    CHECK(db[0].rank == 0);
    CHECK(db[0].torsion == 5);
  }
  SUBCASE("empty input and comments") {
    std::istringstream empty("");
    CHECK(parse_db(empty).empty());
    std::istringstream comments("# header\n\n   \n37 a 1 0 0 1 -1 0 1 1  # trailing\n");
    auto db = parse_db(comments, true);
    REQUIRE(db.size() == 1);
    CHECK(db[0].label() == "37a1");
  }
  SUBCASE("malformed lines carry the line number") {
    for (const std::string bad : {"11 a 1 0 -1 1 -10 -20 0", "11 a 1 0 -1 1 -10 x 0 5", "11 A 1 0 -1 1 -10 -20 0 5",
                                  "11 a 0 0 -1 1 -10 -20 0 5", "11 a 1 0 0 0 0 0 0 1"}) {
      std::istringstream in("# ok\n11 a 1 0 -1 1 -10 -20 0 5\n" + bad + "\n");
      try {
        parse_db(in);
        FAIL("accepted: " << bad);
      } catch (const Error& e) {
        CHECK(e.code() == Errc::ParseError);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
      }
    }
  }
  SUBCASE("validation") {
    std::istringstream wrong_n("12 a 1 0 -1 1 -10 -20 0 5\n");
    CHECK(error_of([&] { parse_db(wrong_n, true); }) == Errc::ValidationError);
    std::istringstream wrong_t("11 a 1 0 -1 1 -10 -20 0 3\n");
    CHECK(error_of([&] { parse_db(wrong_t, true); }) == Errc::ValidationError);
    std::istringstream unchecked("11 a 1 0 -1 1 -10 -20 0 3\n");
    CHECK(parse_db(unchecked).size() == 1);
    CHECK(error_of([] { parse_db(std::string("/nonexistent/curves.txt")); }) == Errc::IoError);
  }
  SUBCASE("fixture agrees with an independent reader") {
    auto ref = testfix::load_curves();
    const auto& db = fixture_db();
    REQUIRE(db.size() == ref.size());
    for (std::size_t i = 0; i < db.size(); ++i) {
      CHECK(db[i].conductor == ref[i].N);
      CHECK(db[i].iso == ref[i].iso);
      CHECK(db[i].index == ref[i].index);
      for (int k = 0; k < 5; ++k) CHECK(db[i].a[k] == ref[i].a[k]);
      CHECK(db[i].torsion == ref[i].torsion);
    }
    CHECK(find_curve(db, "105a1").conductor == 105);
    CHECK(error_of([&] { find_curve(db, "11z9"); }) == Errc::NoMatch);
  }
  SUBCASE("fixture validates below conductor 300") {
    std::ifstream in("tests/data/curves.txt");
    std::ostringstream part;
    for (std::string line; std::getline(in, line);) {
      std::istringstream ls(line);
      long N = 0;
      if (line.empty() || line[0] == '#' || !(ls >> N) || N < 300) part << line << "\n";
    }
    std::istringstream pin(part.str());
    CHECK(parse_db(pin, true).size() > 500);
  }
}

TEST_CASE("verdicts are a function of the numeric fields") {
  testgen::Gen g(2024);
  for (int it = 0; it < 2000; ++it) {
    ReportRow r;
    r.torsion = g.uniform(1, 16);
    r.cp = g.uniform(1, 400);
    r.sha_an = g.uniform(1, 30);
    r.derive_verdicts();
    Verdicts v = oracle_verdicts(r.torsion, r.cp.get_si(), r.sha_an.get_si());
    CHECK(r.conj25_holds == v.holds);
    CHECK(r.conj25_odd_part_divides_cp == v.odd_cp);
    CHECK(r.conj25_strict == v.strict);
    CHECK(r.torsion_sq_divides_cp == v.cp);
    // strict implies odd-part; cp-only implies the sha version.
    if (r.conj25_strict) CHECK(r.conj25_holds);
    if (r.conj25_odd_part_divides_cp) CHECK(r.conj25_holds);
  }
}

TEST_CASE("verify_conj25") {
  const auto& db = fixture_db();
  SUBCASE("reference twist table") {
    auto t = table1(db);
    REQUIRE(t.rows.size() == 4);
    const std::vector<std::tuple<std::string, long, long, long, long>> expect = {
        {"14a1", 3, 6, 36, 1}, {"21a1", 7, 4, 8, 1}, {"27a1", 3, 3, 1, 1}, {"105a1", 11, 2, 2, 4}};
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& [label, D, tors, cp, sha] = expect[i];
      CHECK(t.rows[i].label == label);
      CHECK(t.rows[i].D == D);
      CHECK(t.rows[i].torsion == tors);
      CHECK(t.rows[i].cp == cp);
      CHECK(t.rows[i].sha_an == sha);
    }
    CHECK(t.rows[0].conj25_holds);
    CHECK(t.rows[0].conj25_odd_part_divides_cp);
    CHECK(t.rows[1].conj25_holds);
    CHECK_FALSE(t.rows[1].conj25_strict);
    CHECK_FALSE(t.rows[2].conj25_holds);  // gcd(27, 3) > 1
    CHECK(t.rows[3].conj25_holds);
    CHECK_FALSE(t.rows[3].torsion_sq_divides_cp);
  }
  SUBCASE("filters and errors") {
    const auto& E11 = find_curve(db, "11a1");
    CHECK(error_of([&] { verify_conj25(find_curve(db, "21a1"), 7); }) == Errc::NotCoprime);
    CHECK(error_of([&] { verify_conj25(E11, 5); }) == Errc::NotFundamental);
    // (-7 | 11) = +1 puts the twist at root number -1.
    CHECK(error_of([&] { verify_conj25(E11, 7); }) == Errc::RankPositiveTwist);
    // Every short model of 11a1 has discriminant divisible by 3.
    CHECK(error_of([&] { verify_conj25(E11, 3, CoprimeRule::StarStar); }) == Errc::NotCoprime);
    auto r = verify_conj25(E11, 23, CoprimeRule::StarStar);
    CHECK(r.twist_conductor == 11 * 23 * 23);
  }
}

TEST_CASE("scan_conjecture") {
  const auto& db = fixture_db();
  std::vector<CurveRecord> small;
  for (const auto& r : db)
    if (r.conductor <= 200) small.push_back(r);

  ScanOptions one;
  auto rep = scan_conjecture(small, 2000, one);
  CHECK(rep.summary.at("fails") == 0);
  CHECK(rep.rows.size() > 20);
  CHECK(rep.summary.at("rows") + rep.summary.at("skipped_rank_positive") + rep.summary.at("skipped_other") ==
        rep.summary.at("pairs"));

  SUBCASE("rows in canonical order, admissible and self-consistent") {
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      const auto& a = rep.rows[i - 1];
      const auto& b = rep.rows[i];
      CHECK((label_less(a.label, b.label) || (a.label == b.label && a.D < b.D)));
    }
    for (const auto& r : rep.rows) {
      const auto& E = find_curve(db, r.label);
      CHECK(E.index == 1);
      CHECK(gcd_long(E.conductor, r.D) == 1);
      CHECK(E.conductor * r.D * r.D <= 2000);
      CHECK(is_fundamental_discriminant(Int(-r.D)));
      if (r.D % 2 == 1) CHECK(r.twist_conductor == Int(E.conductor) * r.D * r.D);
      Verdicts v = oracle_verdicts(r.torsion, r.cp.get_si(), r.sha_an.get_si());
      CHECK(r.conj25_holds == v.holds);
      // The twist's torsion divides #E_{-D}(F_p) for small good primes.
      EllipticCurve T = quadratic_twist(E.curve(), -r.D);
      std::array<long, 5> a;
      for (int k = 0; k < 5; ++k) a[k] = T.ainvs()[k].get_si();
      for (long p : {5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L})
        if (r.twist_conductor % p != 0) CHECK((p + 1 - testfix::naive_ap(a, p)) % r.torsion == 0);
    }
  }
  SUBCASE("deterministic across thread counts") {
    ScanOptions three;
    three.threads = 3;
    CHECK(to_json(scan_conjecture(small, 2000, three)) == to_json(rep));
    CHECK(to_csv(scan_conjecture(small, 2000, one)) == to_csv(rep));
  }
  SUBCASE("bound 0 gives an empty report") {
    auto empty = scan_conjecture(db, 0);
    CHECK(empty.rows.empty());
    CHECK(empty.summary.at("pairs") == 0);
  }
  SUBCASE("star-star rule admits only pairs passing hypothesis (**)") {
    ScanOptions ss;
    ss.rule = CoprimeRule::StarStar;
    auto r2 = scan_conjecture(small, 2000, ss);
    for (const auto& r : r2.rows) CHECK(hypothesis_star_star(find_curve(db, r.label).curve(), r.D));
    CHECK(r2.summary.at("fails") == 0);
  }
}

TEST_CASE("scan_hypothesis_star") {
  const auto& db = fixture_db();
  ScanOptions opt;
  opt.threads = 2;
  auto rep = scan_hypothesis_star(db, 700, 130000, opt);
  CHECK(rep.summary.at("first_odd_sha_conductor") == 681);
  REQUIRE_FALSE(rep.rows.empty());
  std::set<std::string> labels;
  for (const auto& r : rep.rows) {
    labels.insert(r.label);
    CHECK(r.p % 2 == 1);
    CHECK(is_prime(Int(r.p)));
    CHECK(r.sha_an % r.p == 0);
    CHECK(r.conductor >= 681);
    const auto& E = find_curve(db, r.label);
    CHECK(E.rank == 0);
    if (!r.found) continue;
    CHECK(hypothesis_star_star(E.curve(), r.D));
    CHECK(E.conductor * r.D * r.D <= 130000);
    Rat tw = sha_an(quadratic_twist(E.curve(), -r.D));
    CHECK(tw == Rat(r.twist_sha_an));
    CHECK(r.p_divides_twist_sha == (r.twist_sha_an % r.p == 0));
    // Smaller admissible D lose the twist L-value to the sign of the functional equation.
    for (long D = 3; D < r.D; ++D)
      if (is_fundamental_discriminant(Int(-D)) && hypothesis_star_star(E.curve(), D))
        CHECK(root_number(quadratic_twist(E.curve(), -D)) == -1);
  }
  CHECK(labels.count("681b1") == 1);

  // Curves of smaller conductor have sha_an free of odd primes.
  for (const auto& E : db)
    if (E.index == 1 && E.rank == 0 && E.conductor < 681 && E.conductor % 97 == 0) {
      Rat s = sha_an(E.curve());
      CHECK(away_from({2}, s) == 1);
    }
}

TEST_CASE("parity findings at fixture scale") {
  auto rep = parity_findings(fixture_db(), 1000, 100);
  CHECK(rep.summary.at("curves") > 20);
  CHECK(rep.summary.at("counterexamples") == 0);
  for (const auto& r : rep.rows) {
    CHECK(r.ord_q_sha == valuation(r.sha_an, Int(r.q)));
    CHECK(r.both_even == (r.ord_q_lratio % 2 == 0 && r.ord_q_sha % 2 == 0));
  }
}

TEST_CASE("squareness_check") {
  const std::vector<std::pair<long, long>> pairs = {{11, 3}, {11, 4}, {11, 15}, {17, 3}, {17, 20},
                                                    {19, 24}, {37, 8}, {37, 15}, {43, 4}, {67, 4}};
  long verdicts = 0;
  for (const auto& [N, D] : pairs) {
    auto rep = squareness_report(N, D);
    REQUIRE_FALSE(rep.rows.empty());
    for (const auto& r : rep.rows) {
      CAPTURE(N);
      CAPTURE(D);
      REQUIRE_FALSE(r.lhs_zero);
      Rat nd = 1;
      for (int i = 0; i < 2 * r.dim; ++i) nd *= r.n;
      CHECK(r.lhs == r.lratio * r.twisted_index * nd);
      CHECK(r.rhs == r.brandt_index * r.brandt_index);
      CHECK(r.verdict == (r.equal && r.square));
      CHECK(is_perfect_square(r.rhs_away));
      // The two paths differ exactly by the Eisenstein part of the denominator of lratio.
      std::set<long> S{2};
      for (const Int& p : prime_divisors(Int(D))) S.insert(p.get_si());
      CHECK(r.lhs_away == r.rhs_away * away_from(S, Rat(r.lratio.get_den())));
      verdicts += r.verdict;
    }
  }
  CHECK(verdicts >= 4);
  SUBCASE("exact agreement away from Eisenstein primes") {
    auto r = squareness_report(17, 3).rows.at(0);
    CHECK(r.verdict);
    CHECK(r.lhs_away == 1);
  }
  SUBCASE("Heegner-type vanishing on both paths") {
    for (const auto& [N, D] : std::vector<std::pair<long, long>>{{11, 7}, {37, 3}, {19, 23}}) {
      auto f = decompose(N).at(N == 37 ? 1 : 0);
      auto r = squareness_check(N, f, D);
      if (kronecker(Int(-D), Int(N)) == 1) {
        CHECK(r.lhs_zero);
        CHECK(r.rhs_zero);
      }
      CHECK(r.lhs_zero == r.rhs_zero);
      CHECK(r.verdict == (r.lhs_zero && r.rhs_zero));
    }
  }
  SUBCASE("errors") {
    auto f37 = decompose(37);
    const NewformFactor& rank1 = lratio_plus(f37[0]).value == 0 ? f37[0] : f37[1];
    CHECK(error_of([&] { squareness_check(37, rank1, 8); }) == Errc::ZeroLValue);
    CHECK(error_of([&] { squareness_check(35, decompose(11).at(0), 3); }) == Errc::NotPrime);
    CHECK(error_of([&] { squareness_check(decompose(11).at(0), BrandtModule(17), 3); }) ==
          Errc::EigenvalueMismatch);
  }
}

TEST_CASE("report emission") {
  testgen::Gen g(77);
  SUBCASE("csv round trip for every row type") {
    Conj25Report a;
    StarReport b;
    ParityReport c;
    SquarenessReport d;
    for (int i = 0; i < 40; ++i) {
      ReportRow r;
      r.label = std::to_string(g.uniform(11, 999)) + "a1";
      r.D = g.uniform(3, 100);
      r.twist_conductor = Int(g.uniform(1, 1000000)) * Int("100000000000000000000");
      r.torsion = g.uniform(1, 16);
      r.cp = g.uniform(1, 100);
      r.sha_an = g.uniform(1, 50);
      r.derive_verdicts();
      r.notes = random_text(g);
      a.rows.push_back(r);
      StarRow s;
      s.label = r.label;
      s.conductor = g.uniform(11, 999);
      s.p = 3;
      s.sha_an = 9;
      s.found = g.uniform(0, 1);
      s.D = s.found ? r.D : 0;
      if (s.found) s.twist_sha_an = g.uniform(1, 9);
      s.notes = random_text(g);
      b.rows.push_back(s);
      ParityRow p;
      p.label = r.label;
      p.q = 5;
      p.lratio = Rat(g.uniform(-50, 50)) / g.uniform(1, 30);
      p.notes = random_text(g);
      c.rows.push_back(p);
      SquarenessRecord q;
      q.N = 11;
      q.lratio = Rat(1) / 5;
      q.lhs_away = Rat(g.uniform(1, 99)) / g.uniform(1, 99);
      q.verdict = g.uniform(0, 1);
      q.notes = random_text(g);
      d.rows.push_back(q);
    }
    auto rt = [](const auto& rep) {
      using Row = typename std::decay_t<decltype(rep.rows)>::value_type;
      std::istringstream in(to_csv(rep));
      return parse_csv<Row>(in) == rep.rows;
    };
    CHECK(rt(a));
    CHECK(rt(b));
    CHECK(rt(c));
    CHECK(rt(d));
  }
  SUBCASE("json schema") {
    auto t = table1(fixture_db());
    auto doc = nlohmann::json::parse(to_json(t));
    CHECK(doc["schema_version"] == 1);
    REQUIRE(doc["rows"].size() == 4);
    CHECK(doc["rows"][3]["label"] == "105a1");
    CHECK(doc["rows"][3]["sha_an"] == 4);
    CHECK(doc["rows"][3]["conj25_holds"] == true);
    CHECK(doc["summary"]["rows"] == 4);
    auto ordered = nlohmann::ordered_json::parse(to_json(t));
    std::vector<std::string> keys;
    for (const auto& [k, v] : ordered["rows"][0].items()) keys.push_back(k);
    CHECK(keys == ReportRow::fields());
    // An independent reader recomputes the verdicts from the emitted numbers.
    for (const auto& row : doc["rows"]) {
      Verdicts v = oracle_verdicts(row["torsion"], row["cp"], row["sha_an"]);
      CHECK(row["conj25_holds"] == v.holds);
      CHECK(row["conj25_odd_part_divides_cp"] == v.odd_cp);
    }
  }
  SUBCASE("empty reports") {
    Conj25Report empty;
    auto doc = nlohmann::json::parse(to_json(empty));
    CHECK(doc["rows"].empty());
    CHECK(doc.contains("summary"));
    CHECK(doc.contains("config"));
    std::istringstream in(to_csv(empty));
    CHECK(parse_csv<ReportRow>(in).empty());
    std::istringstream bad("label,D\n");
    CHECK(error_of([&] { parse_csv<ReportRow>(bad); }) == Errc::ParseError);
  }
  SUBCASE("emit") {
    auto t = table1(fixture_db());
    const auto dir = std::filesystem::temp_directory_path();
    const std::string path = (dir / "bsdtwist_emit_test.csv").string();
    emit(t, Format::Csv, path);
    std::ifstream in(path);
    CHECK(parse_csv<ReportRow>(in) == t.rows);
    std::remove(path.c_str());
    CHECK(error_of([&] { emit(t, Format::Json, "/nonexistent/dir/out.json"); }) == Errc::IoError);
  }
}
