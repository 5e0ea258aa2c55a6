#include <sstream>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/elliptic.hpp"
#include "bsdtwist/error.hpp"

namespace bsdtwist {

namespace {

Int mod(const Int& a, long m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

Int ipow(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

bool kraus_at_3(const Int& c6) {
  Int r = mod(c6, 27);
  return r != 9 && r != 18;
}

bool kraus_at_2(const Int& c4, const Int& c6) {
  if (mod(c6, 4) == 3) return true;
  if (mod(c4, 16) != 0) return false;
  Int r = mod(c6, 32);
  return r == 0 || r == 8;
}

// Largest e with p^(4e) | c4, p^(6e) | c6, p^(12e) | disc.
int scaling_bound(const Int& c4, const Int& c6, const Int& disc, const Int& p) {
  int e = valuation(disc, p) / 12;
  if (c4 != 0) e = std::min(e, valuation(c4, p) / 4);
  if (c6 != 0) e = std::min(e, valuation(c6, p) / 6);
  return e;
}

}  // namespace

EllipticCurve::EllipticCurve(const Int& a1, const Int& a2, const Int& a3, const Int& a4, const Int& a6)
    : EllipticCurve(std::array<Int, 5>{a1, a2, a3, a4, a6}) {}

EllipticCurve::EllipticCurve(const std::array<Int, 5>& a) : a_(a) {
  const Int &a1 = a_[0], &a2 = a_[1], &a3 = a_[2], &a4 = a_[3], &a6 = a_[4];
  b2_ = a1 * a1 + 4 * a2;
  b4_ = 2 * a4 + a1 * a3;
  b6_ = a3 * a3 + 4 * a6;
  b8_ = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  c4_ = b2_ * b2_ - 24 * b4_;
  c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
  disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
  if (disc_ == 0) throw Error(Errc::ValidationError, "singular Weierstrass equation " + to_string());
}

EllipticCurve EllipticCurve::from_c4c6(const Int& c4, const Int& c6) {
  Int num = c4 * c4 * c4 - c6 * c6;
  if (num == 0 || mod(num, 1728) != 0 || !kraus_at_3(c6) || !kraus_at_2(c4, c6))
    throw Error(Errc::ValidationError, "no integral model with these c4, c6");
  Int b2 = mod(-c6, 12);
  if (b2 > 6) b2 -= 12;
  Int b4 = (b2 * b2 - c4) / 24;
  Int b6 = (-b2 * b2 * b2 + 36 * b2 * b4 - c6) / 216;
  Int a1 = mod(b2, 2), a3 = mod(b6, 2);
  Int a2 = (b2 - a1) / 4;
  Int a4 = (b4 - a1 * a3) / 2;
  Int a6 = (b6 - a3) / 4;
  EllipticCurve E(a1, a2, a3, a4, a6);
  if (E.c4() != c4 || E.c6() != c6) throw Error(Errc::Internal, "c4, c6 reconstruction failed");
  return E;
}

Rat EllipticCurve::j_invariant() const {
  Rat j(c4_ * c4_ * c4_, disc_);
  j.canonicalize();
  return j;
}

EllipticCurve EllipticCurve::rst_transform(const Int& r, const Int& s, const Int& t) const {
  const Int &a1 = a_[0], &a2 = a_[1], &a3 = a_[2], &a4 = a_[3], &a6 = a_[4];
  Int n1 = a1 + 2 * s;
  Int n2 = a2 - s * a1 + 3 * r - s * s;
  Int n3 = a3 + r * a1 + 2 * t;
  Int n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
  Int n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
  return EllipticCurve(n1, n2, n3, n4, n6);
}

std::string EllipticCurve::to_string() const {
  std::ostringstream os;
  os << '[' << a_[0] << ',' << a_[1] << ',' << a_[2] << ',' << a_[3] << ',' << a_[4] << ']';
  return os.str();
}

EllipticCurve minimal_model(const EllipticCurve& E) {
  const Int &c4 = E.c4(), &c6 = E.c6(), &disc = E.discriminant();
  Int g = gcd(gcd(c4 * c4 * c4, c6 * c6), disc);
  Int u = 1;
  for (const Int& p : prime_divisors(g)) {
    int e = scaling_bound(c4, c6, disc, p);
    if (p == 2 || p == 3) {
      for (; e > 0; --e) {
        Int c4e = c4 / ipow(p, 4 * e), c6e = c6 / ipow(p, 6 * e);
        if (p == 3 ? kraus_at_3(c6e) : kraus_at_2(c4e, c6e)) break;
      }
    }
    u *= ipow(p, e);
  }
  Int u4 = ipow(u, 4);
  return EllipticCurve::from_c4c6(c4 / u4, c6 / (u4 * u * u));
}

bool is_isomorphic(const EllipticCurve& E, const EllipticCurve& F) {
  EllipticCurve a = minimal_model(E), b = minimal_model(F);
  return a.c4() == b.c4() && a.c6() == b.c6();
}

EllipticCurve quadratic_twist(const EllipticCurve& E, long d) {
  if (d == 0) throw Error(Errc::ZeroInput, "twist by zero");
  Int dd(d);
  Int A = -27 * dd * dd * E.c4();
  Int B = -54 * dd * dd * dd * E.c6();
  return minimal_model(EllipticCurve(0, 0, 0, A, B));
}

bool hypothesis_star_star(const EllipticCurve& E, long D) {
  EllipticCurve M = minimal_model(E);
  Int A0 = -27 * M.c4(), B0 = -54 * M.c6();
  for (long u : {1L, 2L, 3L, 6L}) {
    Int u4 = ipow(Int(u), 4), u6 = u4 * u * u;
    if (A0 % u4 != 0 || B0 % u6 != 0) continue;
    Int A = A0 / u4, B = B0 / u6;
    Int disc = -16 * (4 * A * A * A + 27 * B * B);
    if (gcd(disc, Int(D)) == 1) return true;
  }
  return false;
}

}  // namespace bsdtwist
