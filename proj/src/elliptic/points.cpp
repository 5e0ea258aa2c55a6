#include <algorithm>
#include <numeric>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/elliptic.hpp"
#include "bsdtwist/error.hpp"

namespace bsdtwist {

namespace {

long mod_ui(const Int& x, long p) { return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(p))); }

// p + 1 - #E(F_p) on the given model; meaningful at bad p when the model is minimal.
long count_ap(const EllipticCurve& M, long p) {
  if (p == 2) {
    long a[5];
    for (int i = 0; i < 5; ++i) a[i] = mod_ui(M.ainvs()[i], 2);
    long n = 1;
    for (long x = 0; x < 2; ++x)
      for (long y = 0; y < 2; ++y)
        if ((y * y + a[0] * x * y + a[2] * y + x * x * x + a[1] * x * x + a[3] * x + a[4]) % 2 == 0) ++n;
    return 3 - n;
  }
  long b2 = mod_ui(M.b2(), p), b4 = mod_ui(2 * M.b4(), p), b6 = mod_ui(M.b6(), p);
  std::vector<signed char> chi(p, -1);
  chi[0] = 0;
  for (long y = 1; y < p; ++y) chi[y * y % p] = 1;
  long s = 0;
  for (long x = 0; x < p; ++x) {
    long f = ((4 * x % p + b2) % p * x % p + b4) % p * x % p;
    f = (f + b6) % p;
    s += chi[f];
  }
  return -s;
}

struct Pt {
  Rat x, y;
};

bool integral(const Pt& P) { return P.x.get_den() == 1 && P.y.get_den() == 1; }

// Order of P on y^2 = x^3 + a x^2 + b x + c if it is torsion, else 0.
long point_order(const Pt& P, const Int& a, const Int& b) {
  Pt Q = P;
  for (long k = 1; k <= 12; ++k) {
    if (Q.x == P.x && Q.y == -P.y) return k + 1;
    Rat lam;
    if (Q.x == P.x) lam = (3 * P.x * P.x + 2 * a * P.x + b) / (2 * P.y);
    else lam = (Q.y - P.y) / (Q.x - P.x);
    Rat x3 = lam * lam - a - P.x - Q.x;
    Rat y3 = -(lam * (x3 - P.x) + P.y);
    Q = {x3, y3};
    if (!integral(Q)) return 0;
  }
  return 0;
}

Int eval_cubic(const Int& a, const Int& b, const Int& c, const Int& x) { return ((x + a) * x + b) * x + c; }

// Integer roots of the increasing-or-decreasing stretch [lo, hi] of x^3 + a x^2 + b x + c.
void roots_monotone(const Int& a, const Int& b, const Int& c, Int lo, Int hi, std::vector<Int>& out) {
  if (lo > hi) return;
  Int flo = eval_cubic(a, b, c, lo), fhi = eval_cubic(a, b, c, hi);
  if (flo == 0) out.push_back(lo);
  if (fhi == 0 && hi != lo) out.push_back(hi);
  if (sgn(flo) * sgn(fhi) >= 0) return;
  int s = sgn(flo);
  while (hi - lo > 1) {
    Int mid = (lo + hi) / 2;
    Int fm = eval_cubic(a, b, c, mid);
    if (fm == 0) {
      out.push_back(mid);
      return;
    }
    if (sgn(fm) == s) lo = mid;
    else hi = mid;
  }
}

Int floor_div(const Int& n, long d) {
  Int q;
  mpz_fdiv_q_ui(q.get_mpz_t(), n.get_mpz_t(), d);
  return q;
}

std::vector<Int> integer_roots(const Int& a, const Int& b, const Int& c) {
  std::vector<Int> out;
  Int M = 1 + std::max({Int(abs(a)), Int(abs(b)), Int(abs(c))});
  Int disc = a * a - 3 * b;
  if (disc <= 0) {
    roots_monotone(a, b, c, -M, M, out);
  } else {
    Int s = sqrt(disc);
    // The critical points lie in [k1, k1 + 2) and [k2, k2 + 2).
    Int k1 = floor_div(-a - s - 1, 3), k2 = floor_div(-a + s, 3);
    roots_monotone(a, b, c, -M, k1 - 1, out);
    roots_monotone(a, b, c, k1 + 2, k2 - 1, out);
    roots_monotone(a, b, c, k2 + 2, M, out);
    for (Int x = k1; x <= k1 + 1; ++x)
      if (eval_cubic(a, b, c, x) == 0) out.push_back(x);
    for (Int x = k2 - 1; x <= k2 + 1; ++x)
      if (eval_cubic(a, b, c, x) == 0) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

long ap(const EllipticCurve& E, long p) {
  if (!is_prime(Int(p))) throw Error(Errc::NotPrime, "ap needs a prime");
  EllipticCurve M = minimal_model(E);
  if (M.discriminant() % p == 0) throw Error(Errc::BadReduction, "bad reduction at " + std::to_string(p));
  return count_ap(M, p);
}

std::vector<long> an_list(const EllipticCurve& E, long n) {
  EllipticCurve M = minimal_model(E);
  std::vector<long> a(n + 1, 0);
  if (n >= 1) a[1] = 1;
  std::vector<long> spf(n + 1, 0);
  for (long i = 2; i <= n; ++i)
    if (spf[i] == 0)
      for (long j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = i;
  for (long p = 2; p <= n; ++p) {
    if (spf[p] != p) continue;
    long app = count_ap(M, p);
    bool bad = M.discriminant() % p == 0;
    long prev = 1, cur = app;
    for (long q = p; q <= n; q *= p) {
      a[q] = cur;
      long next = bad ? cur * app : app * cur - p * prev;
      prev = cur;
      cur = next;
      if (q > n / p) break;
    }
  }
  for (long m = 2; m <= n; ++m) {
    long p = spf[m], q = 1;
    long r = m;
    while (r % p == 0) {
      r /= p;
      q *= p;
    }
    if (r > 1) a[m] = a[q] * a[r];
  }
  return a;
}

long torsion_order(const EllipticCurve& E) {
  EllipticCurve M = minimal_model(E);
  long bound = 0;
  int used = 0;
  for (long p = 3; used < 12; p = next_prime(p)) {
    if (M.discriminant() % p == 0) continue;
    bound = std::gcd(bound, p + 1 - count_ap(M, p));
    ++used;
  }
  if (bound == 1) return 1;

  // Y^2 = X^3 + a X^2 + b X + c with X = 4x, Y = 4(2y + a1 x + a3).
  Int a = M.b2(), b = 8 * M.b4(), c = 16 * M.b6();
  Int disc = a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
  std::vector<Int> ys{Int(0)};
  std::vector<std::pair<Int, int>> fac = factor(disc);
  std::vector<Int> squares{Int(1)};
  for (auto [p, e] : fac) {
    std::size_t base = squares.size();
    Int pk = 1;
    for (int k = 1; 2 * k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) squares.push_back(squares[i] * pk);
    }
  }
  ys.insert(ys.end(), squares.begin(), squares.end());
  long count = 1;
  for (const Int& y : ys) {
    for (const Int& x : integer_roots(a, b, c - y * y)) {
      Pt P{Rat(x), Rat(y)};
      if (point_order(P, a, b) == 0) continue;
      count += y == 0 ? 1 : 2;
    }
  }
  if (bound % count != 0) throw Error(Errc::Internal, "torsion count does not divide the reduction bound");
  return count;
}

}  // namespace bsdtwist
