#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsdtwist/brandt.hpp"
#include "bsdtwist/elliptic.hpp"
#include "bsdtwist/newform.hpp"

namespace bsdtwist {

struct CurveRecord {
  long conductor = 0;
  std::string iso;  // isogeny class letters, e.g. "a"
  int index = 0;
  std::array<Int, 5> a;
  int rank = 0;
  int torsion = 0;

  std::string label() const;  // e.g. "11a1"
  EllipticCurve curve() const;
};

// Lines "N label index a1 a2 a3 a4 a6 rank torsion"; '#' comments and blank lines are skipped.
// With validate set, the conductor and torsion order are recomputed for every record.
std::vector<CurveRecord> parse_db(std::istream& in, bool validate = false);
std::vector<CurveRecord> parse_db(const std::string& path, bool validate = false);

const CurveRecord& find_curve(const std::vector<CurveRecord>& db, const std::string& label);

// Which (E, D) pairs a scan admits.
enum class CoprimeRule { Gcd, StarStar, Any };

struct ScanOptions {
  CoprimeRule rule = CoprimeRule::Gcd;
  unsigned threads = 1;
  mpfr_prec_t precision = default_precision();
};

struct ReportRow {
  std::string label;
  long D = 0;
  Int twist_conductor;
  long torsion = 0;
  Int cp;  // Tamagawa product of E_{-D}
  Int sha_an;
  bool conj25_holds = false;                // odd part of torsion^2 divides sha_an * cp
  bool conj25_odd_part_divides_cp = false;  // odd part of torsion^2 divides cp
  bool conj25_strict = false;               // torsion^2 divides sha_an * cp
  bool torsion_sq_divides_cp = false;
  std::string notes;

  static const std::vector<std::string>& fields();
  std::vector<std::string> values() const;
  static ReportRow from_values(const std::vector<std::string>& v);
  void derive_verdicts();
  bool operator==(const ReportRow&) const = default;
};

struct StarRow {
  std::string label;
  long conductor = 0;
  long p = 0;
  Int sha_an;
  long D = 0;  // 0 when none was found
  Int twist_sha_an;
  bool found = false;
  bool p_divides_twist_sha = false;
  std::string notes;

  static const std::vector<std::string>& fields();
  std::vector<std::string> values() const;
  static StarRow from_values(const std::vector<std::string>& v);
  bool operator==(const StarRow&) const = default;
};

struct ParityRow {
  std::string label;
  long conductor = 0;
  long q = 0;
  Int sha_an;
  Rat lratio;
  int ord_q_lratio = 0;
  int ord_q_sha = 0;
  long D_star = 0;
  bool both_even = false;
  std::string notes;

  static const std::vector<std::string>& fields();
  std::vector<std::string> values() const;
  static ParityRow from_values(const std::vector<std::string>& v);
  bool operator==(const ParityRow&) const = default;
};

struct SquarenessRecord {
  long N = 0;
  long D = 0;
  int dim = 0;
  Rat lratio;
  Rat twisted_index;
  Int n;
  Rat brandt_index;
  Rat lhs;  // lratio * twisted_index * n^(2d)
  Rat rhs;  // brandt_index^2
  Rat lhs_away;
  Rat rhs_away;
  bool lhs_zero = false;
  bool rhs_zero = false;
  bool equal = false;
  bool square = false;
  bool verdict = false;
  std::string notes;

  static const std::vector<std::string>& fields();
  std::vector<std::string> values() const;
  static SquarenessRecord from_values(const std::vector<std::string>& v);
  bool operator==(const SquarenessRecord&) const = default;
};

template <class Row>
struct Report {
  static constexpr int schema_version = 1;
  std::map<std::string, std::string> config;
  std::vector<Row> rows;
  std::map<std::string, long> summary;
  // Pairs skipped for mathematical reasons, e.g. "14a1 -D=-3: twist L-value vanishes".
  std::vector<std::string> skipped;
};

using Conj25Report = Report<ReportRow>;
using StarReport = Report<StarRow>;
using ParityReport = Report<ParityRow>;
using SquarenessReport = Report<SquarenessRecord>;

// Twist data for (E, D); throws RankPositiveTwist when L(E_{-D}, 1) vanishes.
ReportRow verify_conj25(const CurveRecord& E, long D, CoprimeRule rule = CoprimeRule::Gcd,
                        mpfr_prec_t prec = default_precision());

// Optimal curves (index 1) and fundamental -D with N D^2 <= nd2_bound, ordered by (N, label, D).
Conj25Report scan_conjecture(const std::vector<CurveRecord>& db, long nd2_bound, const ScanOptions& opt = {});

// For each rank-0 optimal curve of conductor <= conductor_bound and each odd prime p | sha_an(E):
// the smallest D with N D^2 <= nd2_bound, hypothesis (**), L(E_{-D}, 1) != 0 and p not dividing
// sha_an(E_{-D}). summary["first_odd_sha_conductor"] is the smallest conductor with odd sha_an.
StarReport scan_hypothesis_star(const std::vector<CurveRecord>& db, long conductor_bound, long nd2_bound,
                                const ScanOptions& opt = {});

// Prime-conductor rank-0 optimal curves with an odd q | sha_an, q not dividing n, and a D found by
// hypothesis_star_search(f, q, Dmax): records the q-adic orders of lratio and sha_an.
ParityReport parity_findings(const std::vector<CurveRecord>& db, long conductor_bound, long Dmax,
                             const ScanOptions& opt = {});

// Compares lratio * twisted_index * n^(2d) with brandt_index^2 away from 2 and the primes of D.
SquarenessRecord squareness_check(const NewformFactor& f, const BrandtModule& m, long D);
SquarenessRecord squareness_check(long N, const NewformFactor& f, long D);
// Every rank-0 new factor of prime level N.
SquarenessReport squareness_report(long N, long D);

// The four rows (14a1, 3), (21a1, 7), (27a1, 3), (105a1, 11), without a coprimality filter.
Conj25Report table1(const std::vector<CurveRecord>& db, mpfr_prec_t prec = default_precision());

enum class Format { Json, Csv };

template <class Row>
std::string to_json(const Report<Row>& r);
template <class Row>
std::string to_csv(const Report<Row>& r);
template <class Row>
std::vector<Row> parse_csv(std::istream& in);
template <class Row>
void emit(const Report<Row>& r, Format format, const std::string& path);

}  // namespace bsdtwist
