#include "bsdtwist/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bsdtwist/error.hpp"

namespace bsdtwist {

int kronecker(const Int& a_in, const Int& n_in) {
  Int a = a_in, n = n_in;
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  // Strip powers of 2 from n: (a/2) is 0 for even a, else depends on a mod 8.
  while (mpz_even_p(n.get_mpz_t())) {
    n /= 2;
    if (mpz_even_p(a.get_mpz_t())) return 0;
    unsigned long r = mpz_fdiv_ui(a.get_mpz_t(), 8);
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol (a/n) for odd positive n.
  Int x;
  mpz_fdiv_r(x.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  while (x != 0) {
    while (mpz_even_p(x.get_mpz_t())) {
      x /= 2;
      unsigned long r = mpz_fdiv_ui(n.get_mpz_t(), 8);
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(x, n);
    if (mpz_fdiv_ui(x.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(n.get_mpz_t(), 4) == 3) result = -result;
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  }
  return n == 1 ? result : 0;
}

bool is_fundamental_discriminant(const Int& d) {
  if (d == 1 || d == 0) return false;
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), d.get_mpz_t(), 4);
  if (r == 1) return is_squarefree(d);
  if (r != 0) return false;
  Int m = d / 4;
  Int rm;
  mpz_fdiv_r_ui(rm.get_mpz_t(), m.get_mpz_t(), 4);
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

ClassNumber class_number_unit(long D) {
  if (D <= 0 || !is_fundamental_discriminant(Int(-D))) throw Error(Errc::NotFundamental, "class_number_unit");
  // Reduced forms: |b| <= a <= c, b >= 0 if |b| = a or a = c, b^2 - 4ac = -D.
  long h = 0;
  for (long a = 1; 3 * a * a <= D; ++a) {
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b + D;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      ++h;
    }
  }
  long u = D == 3 ? 3 : D == 4 ? 2 : 1;
  return {h, u};
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::vector<long> primes_up_to(long n) {
  std::vector<long> ps;
  if (n < 2) return ps;
  std::vector<bool> sieve(n + 1, true);
  for (long i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    ps.push_back(i);
    for (long j = i * i; j <= n; j += i) sieve[j] = false;
  }
  return ps;
}

long next_prime(long n) {
  long p = std::max(2L, n + 1);
  while (!is_prime(Int(p))) ++p;
  return p;
}

namespace {

Int pollard_brent(const Int& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, m = 64;
    auto f = [&](const Int& v) {
      Int t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Int d = abs(x - y);
          q = (q * d) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Int d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const Int& n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  Int d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, int>> factor(const Int& n_in) {
  if (n_in == 0) throw Error(Errc::ZeroInput, "factor(0)");
  Int n = abs(n_in);
  std::vector<Int> ps;
  for (unsigned long p = 2; p < 1000 && n > 1; ++p) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ps.push_back(Int(p));
      n /= p;
    }
  }
  factor_into(n, ps);
  std::sort(ps.begin(), ps.end());
  std::vector<std::pair<Int, int>> out;
  for (const auto& p : ps) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

std::vector<Int> prime_divisors(const Int& n) {
  std::vector<Int> ps;
  for (const auto& [p, e] : factor(n)) ps.push_back(p);
  return ps;
}

std::vector<long> divisors(long n) {
  std::vector<long> ds;
  for (long d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      ds.push_back(d);
      if (d * d != n) ds.push_back(n / d);
    }
  std::sort(ds.begin(), ds.end());
  return ds;
}

bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  for (const auto& [p, e] : factor(n))
    if (e > 1) return false;
  return true;
}

int valuation(const Int& n, const Int& p) {
  if (n == 0) throw Error(Errc::ZeroInput, "valuation of 0");
  Int m = abs(n);
  int v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    m /= p;
    ++v;
  }
  return v;
}

int valuation(const Rat& x, const Int& p) { return valuation(x.get_num(), p) - valuation(x.get_den(), p); }

bool is_perfect_square(const Rat& x) {
  if (x < 0) return false;
  return mpz_perfect_square_p(x.get_num_mpz_t()) && mpz_perfect_square_p(x.get_den_mpz_t());
}

Rat away_from(const std::set<long>& S, const Rat& x) {
  if (x == 0) throw Error(Errc::ZeroInput, "away_from(0)");
  Int num = x.get_num(), den = x.get_den();
  for (long p : S) {
    if (p < 2) continue;
    Int pp(p);
    while (mpz_divisible_p(num.get_mpz_t(), pp.get_mpz_t())) num /= pp;
    while (mpz_divisible_p(den.get_mpz_t(), pp.get_mpz_t())) den /= pp;
  }
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Int winding_multiple(long N) {
  Rat r(N - 1, 12);
  r.canonicalize();
  return r.get_num();
}

long euler_phi(long n) {
  long r = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    r -= r / p;
  }
  if (n > 1) r -= r / n;
  return r;
}

long gcd_long(long a, long b) { return std::gcd(a, b); }

}  // namespace bsdtwist
