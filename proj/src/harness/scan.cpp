#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <thread>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/harness.hpp"

namespace bsdtwist {

namespace {

// Runs fn(0..n-1) on up to `threads` workers; results are stored by index, so the outcome does
// not depend on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

Int odd_part(Int x) {
  while (x != 0 && x % 2 == 0) x /= 2;
  return x;
}

bool divides(const Int& a, const Int& b) { return a != 0 && b % a == 0; }

std::string rule_name(CoprimeRule r) {
  switch (r) {
    case CoprimeRule::Gcd: return "gcd";
    case CoprimeRule::StarStar: return "star-star";
    case CoprimeRule::Any: return "any";
  }
  return "";
}

// Curves sorted by (N, label) with index 1, taken as the optimal curve of each class.
std::vector<const CurveRecord*> optimal_curves(const std::vector<CurveRecord>& db, long max_conductor) {
  std::vector<const CurveRecord*> out;
  for (const auto& r : db)
    if (r.index == 1 && r.conductor <= max_conductor) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const CurveRecord* x, const CurveRecord* y) {
    return std::make_pair(x->conductor, x->iso.size()) < std::make_pair(y->conductor, y->iso.size()) ||
           (x->conductor == y->conductor && x->iso.size() == y->iso.size() && x->iso < y->iso);
  });
  return out;
}

bool admissible(const CurveRecord& E, long D, CoprimeRule rule) {
  switch (rule) {
    case CoprimeRule::Gcd: return gcd_long(E.conductor, D) == 1;
    case CoprimeRule::StarStar: return hypothesis_star_star(E.curve(), D);
    case CoprimeRule::Any: return true;
  }
  return false;
}

std::vector<long> fundamental_D(long N, long nd2_bound) {
  std::vector<long> out;
  for (long D = 3; N * D * D <= nd2_bound; ++D)
    if (is_fundamental_discriminant(Int(-D))) out.push_back(D);
  return out;
}

Int integral_sha(const Rat& sha, const std::string& what) {
  if (sha.get_den() != 1) throw Error(Errc::RoundingAmbiguous, what + ": analytic Sha " + sha.get_str());
  return sha.get_num();
}

std::string pair_name(const CurveRecord& E, long D) { return E.label() + " D=" + std::to_string(D); }

}  // namespace

void ReportRow::derive_verdicts() {
  const Int t2 = Int(torsion) * torsion;
  const Int prod = sha_an * cp;
  conj25_holds = divides(odd_part(t2), prod);
  conj25_odd_part_divides_cp = divides(odd_part(t2), cp);
  conj25_strict = divides(t2, prod);
  torsion_sq_divides_cp = divides(t2, cp);
}

ReportRow verify_conj25(const CurveRecord& E, long D, CoprimeRule rule, mpfr_prec_t prec) {
  if (D <= 0 || !is_fundamental_discriminant(Int(-D)))
    throw Error(Errc::NotFundamental, "-" + std::to_string(D) + " is not a fundamental discriminant");
  if (!admissible(E, D, rule))
    throw Error(Errc::NotCoprime, pair_name(E, D) + " fails the " + rule_name(rule) + " condition");
  EllipticCurve T = quadratic_twist(E.curve(), -D);
  BsdData b;
  try {
    b = bsd_data(T, prec);
  } catch (const Error& e) {
    if (e.code() != Errc::RankPositive) throw;
    throw Error(Errc::RankPositiveTwist, pair_name(E, D) + ": twist L-value vanishes");
  }
  ReportRow r;
  r.label = E.label();
  r.D = D;
  r.twist_conductor = b.conductor;
  r.torsion = b.torsion;
  r.cp = b.tamagawa;
  r.sha_an = integral_sha(b.sha, pair_name(E, D));
  if (gcd_long(E.conductor, D) != 1) r.notes = "gcd(N, D) > 1";
  r.derive_verdicts();
  return r;
}

Conj25Report scan_conjecture(const std::vector<CurveRecord>& db, long nd2_bound, const ScanOptions& opt) {
  struct Task {
    const CurveRecord* E;
    long D;
  };
  std::vector<Task> tasks;
  for (const CurveRecord* E : optimal_curves(db, nd2_bound))
    for (long D : fundamental_D(E->conductor, nd2_bound))
      if (admissible(*E, D, opt.rule)) tasks.push_back({E, D});

  std::vector<std::optional<ReportRow>> rows(tasks.size());
  std::vector<std::pair<Errc, std::string>> errs(tasks.size());
  parallel_for(tasks.size(), opt.threads, [&](std::size_t i) {
    try {
      rows[i] = verify_conj25(*tasks[i].E, tasks[i].D, opt.rule, opt.precision);
    } catch (const Error& e) {
      errs[i] = {e.code(), pair_name(*tasks[i].E, tasks[i].D) + ": " + e.what()};
    }
  });

  Conj25Report rep;
  rep.config = {{"nd2_bound", std::to_string(nd2_bound)},
                {"rule", rule_name(opt.rule)},
                {"precision", std::to_string(opt.precision)}};
  long holds = 0, fails = 0, strict_fails = 0, cp_only_fails = 0, rank_pos = 0, other = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (rows[i]) {
      const ReportRow& r = *rows[i];
      (r.conj25_holds ? holds : fails)++;
      if (!r.conj25_strict) ++strict_fails;
      if (!r.conj25_odd_part_divides_cp) ++cp_only_fails;
      rep.rows.push_back(r);
    } else {
      (errs[i].first == Errc::RankPositiveTwist ? rank_pos : other)++;
      rep.skipped.push_back(errs[i].second);
    }
  }
  rep.summary = {{"pairs", static_cast<long>(tasks.size())},
                 {"rows", static_cast<long>(rep.rows.size())},
                 {"holds", holds},
                 {"fails", fails},
                 {"strict_fails", strict_fails},
                 {"odd_part_cp_fails", cp_only_fails},
                 {"skipped_rank_positive", rank_pos},
                 {"skipped_other", other}};
  return rep;
}

StarReport scan_hypothesis_star(const std::vector<CurveRecord>& db, long conductor_bound, long nd2_bound,
                                const ScanOptions& opt) {
  std::vector<const CurveRecord*> curves;
  for (const CurveRecord* E : optimal_curves(db, conductor_bound))
    if (E->rank == 0) curves.push_back(E);

  std::vector<std::optional<Int>> sha(curves.size());
  std::vector<std::string> sha_err(curves.size());
  parallel_for(curves.size(), opt.threads, [&](std::size_t i) {
    try {
      sha[i] = integral_sha(bsdtwist::sha_an(curves[i]->curve(), opt.precision), curves[i]->label());
    } catch (const Error& e) {
      sha_err[i] = curves[i]->label() + ": " + e.what();
    }
  });

  struct Task {
    const CurveRecord* E;
    Int sha;
    long p;
  };
  std::vector<Task> tasks;
  StarReport rep;
  long first = 0;
  std::string first_label;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (!sha[i]) {
      rep.skipped.push_back(sha_err[i]);
      continue;
    }
    for (const Int& p : prime_divisors(*sha[i])) {
      if (p == 2) continue;
      tasks.push_back({curves[i], *sha[i], p.get_si()});
      if (first == 0) {
        first = curves[i]->conductor;
        first_label = curves[i]->label();
      }
    }
  }

  std::vector<StarRow> rows(tasks.size());
  parallel_for(tasks.size(), opt.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    StarRow& r = rows[i];
    r.label = t.E->label();
    r.conductor = t.E->conductor;
    r.p = t.p;
    r.sha_an = t.sha;
    const EllipticCurve E = t.E->curve();
    for (long D : fundamental_D(t.E->conductor, nd2_bound)) {
      if (!hypothesis_star_star(E, D)) continue;
      try {
        BsdData b = bsd_data(quadratic_twist(E, -D), opt.precision);
        r.D = D;
        r.found = true;
        r.twist_sha_an = integral_sha(b.sha, pair_name(*t.E, D));
        r.p_divides_twist_sha = r.twist_sha_an % t.p == 0;
        break;
      } catch (const Error& e) {
        if (e.code() == Errc::RankPositive) continue;
        r.notes = pair_name(*t.E, D) + ": " + e.what();
        break;
      }
    }
    if (!r.found && r.notes.empty()) r.notes = "no D in range";
  });

  long found = 0, coprime = 0, prime_tuples = 0, prime_found = 0, prime_coprime = 0;
  for (const auto& r : rows) {
    const bool prime = is_prime(Int(r.conductor));
    prime_tuples += prime;
    if (r.found) {
      ++found;
      prime_found += prime;
      if (!r.p_divides_twist_sha) {
        ++coprime;
        prime_coprime += prime;
      }
    }
  }
  rep.rows = std::move(rows);
  rep.config = {{"conductor_bound", std::to_string(conductor_bound)},
                {"nd2_bound", std::to_string(nd2_bound)},
                {"precision", std::to_string(opt.precision)}};
  if (!first_label.empty()) rep.config["first_odd_sha_label"] = first_label;
  rep.summary = {{"curves", static_cast<long>(curves.size())},
                 {"tuples", static_cast<long>(rep.rows.size())},
                 {"found", found},
                 {"p_coprime_to_twist_sha", coprime},
                 {"prime_level_tuples", prime_tuples},
                 {"prime_level_found", prime_found},
                 {"prime_level_p_coprime", prime_coprime},
                 {"first_odd_sha_conductor", first},
                 {"skipped", static_cast<long>(rep.skipped.size())}};
  return rep;
}

ParityReport parity_findings(const std::vector<CurveRecord>& db, long conductor_bound, long Dmax,
                             const ScanOptions& opt) {
  std::vector<const CurveRecord*> curves;
  for (const CurveRecord* E : optimal_curves(db, conductor_bound))
    if (E->rank == 0 && is_prime(Int(E->conductor))) curves.push_back(E);

  std::vector<std::optional<Int>> sha(curves.size());
  std::vector<std::string> err(curves.size());
  parallel_for(curves.size(), opt.threads, [&](std::size_t i) {
    try {
      sha[i] = integral_sha(bsdtwist::sha_an(curves[i]->curve(), opt.precision), curves[i]->label());
    } catch (const Error& e) {
      err[i] = curves[i]->label() + ": " + e.what();
    }
  });

  ParityReport rep;
  std::map<long, std::vector<NewformFactor>> spaces;
  long qualifying = 0, counterexamples = 0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (!sha[i]) {
      rep.skipped.push_back(err[i]);
      continue;
    }
    const CurveRecord& E = *curves[i];
    const Int n = winding_multiple(E.conductor);
    for (const Int& qz : prime_divisors(*sha[i])) {
      if (qz == 2 || n % qz == 0) continue;
      ParityRow r;
      r.label = E.label();
      r.conductor = E.conductor;
      r.q = qz.get_si();
      r.sha_an = *sha[i];
      r.ord_q_sha = valuation(*sha[i], qz);
      try {
        auto it = spaces.find(E.conductor);
        if (it == spaces.end()) it = spaces.emplace(E.conductor, decompose(E.conductor)).first;
        const NewformFactor& f = match_curve(it->second, E.curve());
        r.lratio = lratio_plus(f).value;
        r.ord_q_lratio = valuation(r.lratio, qz);
        auto D = hypothesis_star_search(f, r.q, Dmax);
        r.D_star = D.value_or(0);
        if (!D) r.notes = "hypothesis (*) not met for D <= " + std::to_string(Dmax);
      } catch (const Error& e) {
        r.notes = e.what();
      }
      r.both_even = r.ord_q_lratio % 2 == 0 && r.ord_q_sha % 2 == 0;
      if (r.D_star != 0) {
        ++qualifying;
        if (!r.both_even) ++counterexamples;
      }
      rep.rows.push_back(std::move(r));
    }
  }
  rep.config = {{"conductor_bound", std::to_string(conductor_bound)}, {"d_max", std::to_string(Dmax)}};
  rep.summary = {{"curves", static_cast<long>(curves.size())},
                 {"rows", static_cast<long>(rep.rows.size())},
                 {"qualifying", qualifying},
                 {"counterexamples", counterexamples}};
  return rep;
}

Conj25Report table1(const std::vector<CurveRecord>& db, mpfr_prec_t prec) {
  const std::vector<std::pair<std::string, long>> pairs = {{"14a1", 3}, {"21a1", 7}, {"27a1", 3}, {"105a1", 11}};
  Conj25Report rep;
  rep.config = {{"rule", rule_name(CoprimeRule::Any)}, {"precision", std::to_string(prec)}};
  for (const auto& [label, D] : pairs) rep.rows.push_back(verify_conj25(find_curve(db, label), D, CoprimeRule::Any, prec));
  long holds = 0;
  for (const auto& r : rep.rows) holds += r.conj25_holds;
  rep.summary = {{"rows", static_cast<long>(rep.rows.size())},
                 {"holds", holds},
                 {"fails", static_cast<long>(rep.rows.size()) - holds}};
  return rep;
}

SquarenessRecord squareness_check(const NewformFactor& f, const BrandtModule& m, long D) {
  const long N = m.level();
  SquarenessRecord r;
  r.N = N;
  r.D = D;
  r.dim = f.dim;
  r.n = winding_multiple(N);
  r.lratio = lratio_plus(f).value;
  if (r.lratio == 0) throw Error(Errc::ZeroLValue, "L(A_f, 1) vanishes at level " + std::to_string(N));
  try {
    r.twisted_index = twisted_index(f, D).value;
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroTwist) throw;
    r.lhs_zero = true;
  }
  try {
    r.brandt_index = brandt_index(f, m, D);
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroVector) throw;
    r.rhs_zero = true;
  }
  if (r.lhs_zero || r.rhs_zero) {
    r.verdict = r.lhs_zero && r.rhs_zero;
    r.notes = r.verdict ? "both sides vanish" : "only one side vanishes";
    return r;
  }
  Rat nd = 1;
  for (int i = 0; i < 2 * f.dim; ++i) nd *= r.n;
  r.lhs = r.lratio * r.twisted_index * nd;
  r.rhs = r.brandt_index * r.brandt_index;
  std::set<long> S{2};
  for (const Int& p : prime_divisors(Int(D))) S.insert(p.get_si());
  r.lhs_away = away_from(S, r.lhs);
  r.rhs_away = away_from(S, r.rhs);
  r.equal = r.lhs_away == r.rhs_away;
  r.square = is_perfect_square(r.lhs_away);
  r.verdict = r.equal && r.square;
  return r;
}

SquarenessRecord squareness_check(long N, const NewformFactor& f, long D) {
  if (!is_prime(Int(N))) throw Error(Errc::NotPrime, "squareness check needs a prime level");
  return squareness_check(f, BrandtModule(N), D);
}

SquarenessReport squareness_report(long N, long D) {
  if (!is_prime(Int(N))) throw Error(Errc::NotPrime, "squareness check needs a prime level");
  BrandtModule m(N);
  SquarenessReport rep;
  rep.config = {{"N", std::to_string(N)}, {"D", std::to_string(D)}};
  long holds = 0, skipped = 0;
  for (const auto& f : decompose(N)) {
    if (lratio_plus(f).value == 0) {
      ++skipped;
      continue;
    }
    rep.rows.push_back(squareness_check(f, m, D));
    holds += rep.rows.back().verdict;
  }
  rep.summary = {{"rows", static_cast<long>(rep.rows.size())},
                 {"holds", holds},
                 {"fails", static_cast<long>(rep.rows.size()) - holds},
                 {"positive_rank_factors", skipped}};
  return rep;
}

}  // namespace bsdtwist
