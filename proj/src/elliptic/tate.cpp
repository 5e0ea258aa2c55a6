#include <vector>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/elliptic.hpp"
#include "bsdtwist/error.hpp"

namespace bsdtwist {

namespace {

using PolyP = std::vector<Int>;  // low to high, reduced mod p

class Residue {
 public:
  explicit Residue(const Int& p) : p_(p) {}

  Int red(const Int& x) const {
    Int r = x % p_;
    if (r < 0) r += p_;
    return r;
  }
  bool divides(const Int& x) const { return x % p_ == 0; }
  int val(const Int& x) const { return x == 0 ? 1 << 20 : valuation(x, p_); }
  Int inv(const Int& x) const {
    Int r, a = red(x);
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t()) == 0)
      throw Error(Errc::Internal, "non-invertible residue in Tate's algorithm");
    return r;
  }
  // Square root mod 2 and cube root mod 3 are the identity on residues.
  Int root(const Int& x) const { return red(x); }

  bool quad_has_root(const Int& a0, const Int& b0, const Int& c0) const {
    Int a = red(a0), b = red(b0), c = red(c0);
    if (a == 0) return b != 0 || c == 0;
    if (p_ == 2) return c == 0 || red(a + b + c) == 0;
    return kronecker(b * b - 4 * a * c, p_) >= 0;
  }

  // Number of distinct roots of x^3 + b x^2 + c x + d mod p.
  int cubic_roots(const Int& b, const Int& c, const Int& d) const {
    PolyP f{red(d), red(c), red(b), Int(1)};
    if (p_ < 50) {
      int n = 0;
      for (long x = 0; p_ > x; ++x)
        if (red(((Int(x) + f[2]) * x + f[1]) * x + f[0]) == 0) ++n;
      return n;
    }
    // deg gcd(x^p - x, f)
    PolyP h = powmod_x(f);
    h.resize(3);
    h[1] = red(h[1] - 1);
    return static_cast<int>(degree(gcd(f, trim(h))));
  }

 private:
  static PolyP trim(PolyP a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
  }
  static long degree(const PolyP& a) { return static_cast<long>(a.size()) - 1; }

  PolyP mulmod(const PolyP& a, const PolyP& b, const PolyP& f) const {
    PolyP r(a.size() + b.size(), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    for (auto& x : r) x = red(x);
    return rem(trim(r), f);
  }

  PolyP rem(PolyP a, const PolyP& f) const {
    Int lead_inv = inv(f.back());
    while (!a.empty() && degree(a) >= degree(f)) {
      Int q = red(a.back() * lead_inv);
      std::size_t shift = a.size() - f.size();
      for (std::size_t i = 0; i < f.size(); ++i) a[shift + i] = red(a[shift + i] - q * f[i]);
      a = trim(a);
    }
    return a;
  }

  PolyP gcd(PolyP a, PolyP b) const {
    while (!b.empty()) {
      PolyP r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  PolyP powmod_x(const PolyP& f) const {
    PolyP result{Int(1)}, base{Int(0), Int(1)};
    std::size_t bits = mpz_sizeinbase(p_.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
      result = mulmod(result, result, f);
      if (mpz_tstbit(p_.get_mpz_t(), i)) result = mulmod(result, base, f);
    }
    return result;
  }

  Int p_;
};

LocalData finish(const Int& p, Kodaira k, int n, int vD, int cp, int f, bool split = false) {
  LocalData ld;
  ld.p = p;
  ld.kodaira = k;
  ld.n = n;
  ld.ord_disc = vD;
  ld.cp = cp;
  ld.ord_conductor = f;
  ld.split = split;
  return ld;
}

}  // namespace

std::string LocalData::symbol() const {
  switch (kodaira) {
    case Kodaira::I0: return "I0";
    case Kodaira::In: return "I" + std::to_string(n);
    case Kodaira::II: return "II";
    case Kodaira::III: return "III";
    case Kodaira::IV: return "IV";
    case Kodaira::I0star: return "I0*";
    case Kodaira::Instar: return "I" + std::to_string(n) + "*";
    case Kodaira::IVstar: return "IV*";
    case Kodaira::IIIstar: return "III*";
    case Kodaira::IIstar: return "II*";
  }
  return "?";
}

LocalData tate_local(const EllipticCurve& E0, const Int& p) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, "Tate's algorithm needs a prime");
  Residue R(p);
  const Int p2 = p * p, p3 = p2 * p, p4 = p3 * p;
  EllipticCurve C = E0;
  for (;;) {
    int vD = R.val(C.discriminant());
    if (vD == 0) return finish(p, Kodaira::I0, 0, 0, 1, 0);

    // Move the singular point to (0, 0).
    Int r, t;
    if (p == 2) {
      if (R.divides(C.b2())) {
        r = R.root(C.a4());
        t = R.root(((r + C.a2()) * r + C.a4()) * r + C.a6());
      } else {
        r = C.a3();
        t = C.a4() + r * r;
      }
    } else if (p == 3) {
      r = R.divides(C.b2()) ? R.root(-C.b6()) : -R.inv(C.b2()) * C.b4();
      t = C.a1() * r + C.a3();
    } else {
      r = R.divides(C.c4()) ? Int(-R.inv(Int(12)) * C.b2()) : Int(-R.inv(12 * C.c4()) * (C.c6() + C.b2() * C.c4()));
      t = -R.inv(Int(2)) * (C.a1() * r + C.a3());
    }
    C = C.rst_transform(R.red(r), 0, R.red(t));

    if (!R.divides(C.c4())) {
      bool split = R.quad_has_root(1, C.a1(), -C.a2());
      int cp = split ? vD : (vD % 2 == 0 ? 2 : 1);
      return finish(p, Kodaira::In, vD, vD, cp, 1, split);
    }
    if (R.val(C.a6()) < 2) return finish(p, Kodaira::II, 0, vD, 1, vD);
    if (R.val(C.b8()) < 3) return finish(p, Kodaira::III, 0, vD, 2, vD - 1);
    if (R.val(C.b6()) < 3) {
      int cp = R.quad_has_root(1, C.a3() / p, -C.a6() / p2) ? 3 : 1;
      return finish(p, Kodaira::IV, 0, vD, cp, vD - 2);
    }

    // Now p | a1, a2; p^2 | a3, a4; p^3 | a6.
    Int s;
    if (p == 2) {
      s = R.root(C.a2());
      t = p * R.root(C.a6() / p2);
    } else if (p == 3) {
      s = C.a1();
      t = C.a3();
    } else {
      Int half = R.inv(Int(2));
      s = -C.a1() * half;
      t = -C.a3() * half;
    }
    C = C.rst_transform(0, s, t);

    Int b = C.a2() / p, c = C.a4() / p2, d = C.a6() / p3;
    Int w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
    Int x = 3 * c - b * b;
    int sw = R.divides(w) ? (R.divides(x) ? 3 : 2) : 1;

    if (sw == 1) return finish(p, Kodaira::I0star, 0, vD, 1 + R.cubic_roots(b, c, d), vD - 4);

    if (sw == 2) {
      // Double root moved to T = 0.
      if (p == 2) r = R.root(c);
      else if (p == 3) r = c * R.inv(b);
      else r = (b * c - 9 * d) * R.inv(2 * x);
      C = C.rst_transform(p * R.red(r), 0, 0);
      int ix = 3, iy = 3;
      Int mx = p2, my = p2;
      int cp;
      for (;;) {
        Int a2t = C.a2() / p, a3t = C.a3() / my, a4t = C.a4() / (p * mx), a6t = C.a6() / (mx * my);
        if (!R.divides(a3t * a3t + 4 * a6t)) {
          cp = R.quad_has_root(1, a3t, -a6t) ? 4 : 2;
          break;
        }
        t = p == 2 ? my * R.root(a6t) : my * R.red(-a3t * R.inv(Int(2)));
        C = C.rst_transform(0, 0, t);
        my *= p;
        ++iy;
        a2t = C.a2() / p;
        a3t = C.a3() / my;
        a4t = C.a4() / (p * mx);
        a6t = C.a6() / (mx * my);
        if (!R.divides(a4t * a4t - 4 * a6t * a2t)) {
          cp = R.quad_has_root(a2t, a4t, a6t) ? 4 : 2;
          break;
        }
        r = p == 2 ? mx * R.root(a6t * R.inv(a2t)) : mx * R.red(-a4t * R.inv(2 * a2t));
        C = C.rst_transform(r, 0, 0);
        mx *= p;
        ++ix;
      }
      return finish(p, Kodaira::Instar, ix + iy - 5, vD, cp, vD - ix - iy + 1);
    }

    // Triple root moved to T = 0.
    if (p == 2) r = b;
    else if (p == 3) r = R.root(-d);
    else r = -b * R.inv(Int(3));
    C = C.rst_transform(p * R.red(r), 0, 0);
    Int x3t = C.a3() / p2, x6t = C.a6() / p4;
    if (!R.divides(x3t * x3t + 4 * x6t)) {
      int cp = R.quad_has_root(1, x3t, -x6t) ? 3 : 1;
      return finish(p, Kodaira::IVstar, 0, vD, cp, vD - 6);
    }
    t = p == 2 ? Int(-p2 * R.root(x6t)) : Int(p2 * R.red(-x3t * R.inv(Int(2))));
    C = C.rst_transform(0, 0, t);
    if (R.val(C.a4()) < 4) return finish(p, Kodaira::IIIstar, 0, vD, 2, vD - 7);
    if (R.val(C.a6()) < 6) return finish(p, Kodaira::IIstar, 0, vD, 1, vD - 8);

    // Not minimal at p: scale down and start again.
    Int p6 = p4 * p2;
    C = EllipticCurve(C.a1() / p, C.a2() / p2, C.a3() / p3, C.a4() / p4, C.a6() / p6);
  }
}

std::vector<LocalData> local_data(const EllipticCurve& E) {
  EllipticCurve M = minimal_model(E);
  std::vector<LocalData> out;
  for (const Int& p : prime_divisors(M.discriminant())) out.push_back(tate_local(M, p));
  return out;
}

Int conductor(const EllipticCurve& E) {
  Int N = 1;
  for (const auto& ld : local_data(E))
    for (int i = 0; i < ld.ord_conductor; ++i) N *= ld.p;
  return N;
}

Int tamagawa_product(const EllipticCurve& E) {
  Int c = 1;
  for (const auto& ld : local_data(E)) c *= ld.cp;
  return c;
}

}  // namespace bsdtwist
