#pragma once

#include <array>
#include <string>
#include <vector>

#include "bsdtwist/matrix.hpp"
#include "bsdtwist/real.hpp"

namespace bsdtwist {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients.
class EllipticCurve {
 public:
  EllipticCurve(const Int& a1, const Int& a2, const Int& a3, const Int& a4, const Int& a6);
  explicit EllipticCurve(const std::array<Int, 5>& a);
  // Integral model with the given invariants; throws ValidationError if none exists.
  static EllipticCurve from_c4c6(const Int& c4, const Int& c6);

  const std::array<Int, 5>& ainvs() const { return a_; }
  const Int& a1() const { return a_[0]; }
  const Int& a2() const { return a_[1]; }
  const Int& a3() const { return a_[2]; }
  const Int& a4() const { return a_[3]; }
  const Int& a6() const { return a_[4]; }
  const Int& b2() const { return b2_; }
  const Int& b4() const { return b4_; }
  const Int& b6() const { return b6_; }
  const Int& b8() const { return b8_; }
  const Int& c4() const { return c4_; }
  const Int& c6() const { return c6_; }
  const Int& discriminant() const { return disc_; }
  Rat j_invariant() const;

  // x = x' + r, y = y' + s x' + t.
  EllipticCurve rst_transform(const Int& r, const Int& s, const Int& t) const;
  std::string to_string() const;
  bool operator==(const EllipticCurve& o) const { return a_ == o.a_; }

 private:
  std::array<Int, 5> a_;
  Int b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

// Global minimal model with a1, a3 in {0, 1} and a2 in {-1, 0, 1}.
EllipticCurve minimal_model(const EllipticCurve& E);
// Isomorphic over Q.
bool is_isomorphic(const EllipticCurve& E, const EllipticCurve& F);
// Twist by Q(sqrt(d)), returned as a minimal model; d = -D for the twist E_{-D}.
EllipticCurve quadratic_twist(const EllipticCurve& E, long d);
// -D is coprime to the discriminant -16(4A^3 + 27B^2) of some integral model y^2 = x^3 + Ax + B.
bool hypothesis_star_star(const EllipticCurve& E, long D);

enum class Kodaira { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar };

struct LocalData {
  Int p;
  Kodaira kodaira = Kodaira::I0;
  int n = 0;  // subscript of I_n and I_n^*
  int ord_disc = 0;  // of the minimal discriminant
  int cp = 1;
  int ord_conductor = 0;
  bool split = false;  // split multiplicative
  std::string symbol() const;
};

// Tate's algorithm at p; data refers to a model minimal at p.
LocalData tate_local(const EllipticCurve& E, const Int& p);
// Local data at every prime dividing the minimal discriminant.
std::vector<LocalData> local_data(const EllipticCurve& E);
Int conductor(const EllipticCurve& E);
Int tamagawa_product(const EllipticCurve& E);

// p + 1 - #E(F_p) for p of good reduction; throws BadReduction otherwise.
long ap(const EllipticCurve& E, long p);
// Coefficients a_1..a_n of the L-series (index 0 unused).
std::vector<long> an_list(const EllipticCurve& E, long n);
long torsion_order(const EllipticCurve& E);

struct RealPeriodData {
  Real omega_plus;
  int c_infinity;
  Real omega_total;
  Real omega_minus_im;
};
RealPeriodData real_periods(const EllipticCurve& E, mpfr_prec_t prec = default_precision());

// Sign of the functional equation, read off numerically.
int root_number(const EllipticCurve& E, mpfr_prec_t prec = default_precision());

struct LValue {
  Real value;
  Real error_bound;
  long terms;
  int root_number;
};
// L(E, 1) within target_accuracy; the truncation length may be forced by passing terms > 0.
LValue numeric_L1(const EllipticCurve& E, double target_accuracy, mpfr_prec_t prec = default_precision(),
                  long terms = 0);

struct BsdData {
  Int conductor;
  long torsion;
  Int tamagawa;
  RealPeriodData periods;
  LValue l1;
  Real sha_numeric;
  Rat sha;
};
// Full analytic BSD data; throws RankPositive if L(E, 1) vanishes numerically.
BsdData bsd_data(const EllipticCurve& E, mpfr_prec_t prec = default_precision());
Rat sha_an(const EllipticCurve& E, mpfr_prec_t prec = default_precision());

}  // namespace bsdtwist
