#include "bsdtwist/poly.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/linalg.hpp"

namespace bsdtwist {

QPoly to_qpoly(const ZPoly& p) {
  QPoly q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i];
  return q;
}

Int content(const ZPoly& p) {
  Int g = 0;
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

ZPoly primitive_part(const ZPoly& p_in) {
  ZPoly p = p_in;
  trim(p);
  if (p.empty()) return p;
  Int g = content(p);
  if (p.back() < 0) g = -g;
  for (auto& c : p) c /= g;
  return p;
}

ZPoly primitive_part(const QPoly& p_in) {
  QPoly p = p_in;
  trim(p);
  Int l = 1;
  for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  ZPoly z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) z[i] = Rat(p[i] * l).get_num();
  return primitive_part(z);
}

ZPoly poly_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

std::pair<QPoly, QPoly> poly_divrem(const QPoly& a, const QPoly& b_in) {
  QPoly b = b_in;
  trim(b);
  if (b.empty()) throw Error(Errc::ZeroInput, "polynomial division by zero");
  QPoly r = a;
  trim(r);
  if (r.size() < b.size()) return {QPoly{}, r};
  QPoly q(r.size() - b.size() + 1);
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    Rat c = r[k + b.size() - 1] / b.back();
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] -= c * b[j];
  }
  trim(r);
  trim(q);
  return {q, r};
}

QPoly poly_gcd(const QPoly& a_in, const QPoly& b_in) {
  QPoly a = a_in, b = b_in;
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = poly_divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  Rat lc = a.back();
  for (auto& c : a) c /= lc;
  return a;
}

QPoly derivative(const QPoly& p) {
  if (p.size() <= 1) return {};
  QPoly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<long>(i);
  trim(d);
  return d;
}

bool poly_divides(const ZPoly& b_in, const ZPoly& a_in, ZPoly* quotient) {
  ZPoly b = b_in, r = a_in;
  trim(b);
  trim(r);
  if (b.empty()) throw Error(Errc::ZeroInput, "polynomial division by zero");
  if (r.empty()) {
    if (quotient) quotient->clear();
    return true;
  }
  if (r.size() < b.size()) return false;
  ZPoly q(r.size() - b.size() + 1);
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    Int& top = r[k + b.size() - 1];
    if (!mpz_divisible_p(top.get_mpz_t(), b.back().get_mpz_t())) return false;
    Int c = top / b.back();
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] -= c * b[j];
  }
  for (const auto& c : r)
    if (c != 0) return false;
  if (quotient) {
    trim(q);
    *quotient = q;
  }
  return true;
}

ZPoly poly_pow(const ZPoly& p, int e) {
  ZPoly r{Int(1)};
  for (int i = 0; i < e; ++i) r = poly_mul(r, p);
  return r;
}

namespace {

using u64 = unsigned long long;

u64 mul_mod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }

u64 pow_mod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  for (; e; e >>= 1, a = mul_mod(a, a, p))
    if (e & 1) r = mul_mod(r, a, p);
  return r;
}

u64 reduce(const Int& x, u64 p) {
  Int r = x % Int(static_cast<unsigned long>(p));
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

// Hessenberg reduction and the Hessenberg charpoly recurrence over F_p.
std::vector<u64> charpoly_mod(const IntMatrix& m, u64 p) {
  std::size_t n = m.rows();
  std::vector<u64> h(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i * n + j] = reduce(m(i, j), p);
  auto at = [&](std::size_t i, std::size_t j) -> u64& { return h[i * n + j]; };
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = j + 1, i = piv;
    while (i < n && at(i, j) == 0) ++i;
    if (i == n) continue;
    if (i != piv) {
      for (std::size_t c = 0; c < n; ++c) std::swap(at(i, c), at(piv, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(at(r, i), at(r, piv));
    }
    u64 inv = pow_mod(at(piv, j), p - 2, p);
    for (std::size_t k = piv + 1; k < n; ++k) {
      if (at(k, j) == 0) continue;
      u64 u = mul_mod(at(k, j), inv, p);
      for (std::size_t c = 0; c < n; ++c) at(k, c) = (at(k, c) + p - mul_mod(u, at(piv, c), p)) % p;
      for (std::size_t r = 0; r < n; ++r) at(r, piv) = (at(r, piv) + mul_mod(u, at(r, k), p)) % p;
    }
  }
  std::vector<std::vector<u64>> q(n + 1);
  q[0] = {1};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<u64> cur(k + 1, 0);
    u64 d = at(k - 1, k - 1);
    for (std::size_t i = 0; i < k; ++i) {
      cur[i + 1] = (cur[i + 1] + q[k - 1][i]) % p;
      cur[i] = (cur[i] + p - mul_mod(d, q[k - 1][i], p)) % p;
    }
    u64 t = 1;
    for (std::size_t i = 1; i < k; ++i) {
      t = mul_mod(t, at(k - i, k - i - 1), p);
      if (t == 0) break;
      u64 coef = mul_mod(at(k - i - 1, k - 1), t, p);
      if (coef == 0) continue;
      for (std::size_t c = 0; c < q[k - i - 1].size(); ++c)
        cur[c] = (cur[c] + p - mul_mod(coef, q[k - i - 1][c], p)) % p;
    }
    q[k] = std::move(cur);
  }
  return q[n];
}

}  // namespace

// Multimodular: charpoly of the integral matrix delta * m modulo 62-bit primes, combined by CRT
// until the product exceeds twice the Hadamard-type bound (1 + max row norm)^n on the coefficients.
QPoly charpoly(const RatMatrix& m) {
  std::size_t n = m.rows();
  if (n != m.cols()) throw Error(Errc::Internal, "charpoly of non-square matrix");
  if (n == 0) return QPoly{Rat(1)};
  Int delta = 1;
  for (const Rat& x : m.data()) delta = lcm(delta, Int(x.get_den()));
  IntMatrix a(n, n);
  std::size_t row_bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Int norm2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = m(i, j).get_num() * (delta / m(i, j).get_den());
      norm2 += a(i, j) * a(i, j);
    }
    // log2(1 + |row|) <= bits(|row|^2) / 2 + 1
    row_bits = std::max(row_bits, mpz_sizeinbase(norm2.get_mpz_t(), 2) / 2 + 1);
  }
  double bits = double(n) * double(row_bits + 1) + 2;
  std::vector<Int> coeffs(n + 1, Int(0));
  Int modulus = 1;
  u64 p = (u64(1) << 62);
  while (double(mpz_sizeinbase(modulus.get_mpz_t(), 2)) <= bits + 1) {
    do --p;
    while (!is_prime(Int(static_cast<unsigned long>(p))));
    std::vector<u64> r = charpoly_mod(a, p);
    Int P(static_cast<unsigned long>(p));
    Int minv;
    Int mod_p = modulus % P;
    mpz_invert(minv.get_mpz_t(), mod_p.get_mpz_t(), P.get_mpz_t());
    for (std::size_t k = 0; k <= n; ++k) {
      Int diff = (Int(static_cast<unsigned long>(r[k])) - coeffs[k]) % P;
      if (diff < 0) diff += P;
      Int t = diff * minv % P;
      coeffs[k] += modulus * t;
    }
    modulus *= P;
  }
  Int half = modulus / 2;
  QPoly out(n + 1);
  Int scale = 1;  // delta^(n - k)
  for (std::size_t k = n + 1; k-- > 0;) {
    Int c = coeffs[k];
    if (c > half) c -= modulus;
    out[k] = Rat(c, scale);
    out[k].canonicalize();
    scale *= delta;
  }
  return out;
}

RatMatrix eval_matrix(const QPoly& p, const RatMatrix& m) {
  std::size_t n = m.rows();
  bool integral = std::all_of(p.begin(), p.end(), [](const Rat& c) { return c.get_den() == 1; }) &&
                  std::all_of(m.data().begin(), m.data().end(), [](const Rat& c) { return c.get_den() == 1; });
  if (integral) {
    IntMatrix a = to_int(m), r(n, n);
    for (int k = degree(p); k >= 0; --k) {
      r = r * a;
      for (std::size_t i = 0; i < n; ++i) r(i, i) += p[k].get_num();
    }
    return to_rat(r);
  }
  RatMatrix r(n, n);
  for (int k = degree(p); k >= 0; --k) {
    r = r * m;
    for (std::size_t i = 0; i < n; ++i) r(i, i) += p[k];
  }
  return r;
}

Int resultant(const ZPoly& a_in, const ZPoly& b_in) {
  ZPoly a = a_in, b = b_in;
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;
  int m = degree(a), n = degree(b);
  if (m == 0 && n == 0) return 1;
  std::size_t s = m + n;
  IntMatrix syl(s, s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) syl(i, i + j) = a[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) syl(n + i, i + j) = b[n - j];
  return determinant(syl);
}

namespace {

// ---- arithmetic in F_p[x], p < 2^31 ----
using FPoly = std::vector<long long>;

long long mod_inv(long long a, long long p) {
  long long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
  while (nr) {
    long long q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  return (t % p + p) % p;
}

void ftrim(FPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FPoly fmul(const FPoly& a, const FPoly& b, long long p) {
  if (a.empty() || b.empty()) return {};
  FPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  ftrim(r);
  return r;
}

FPoly fsub(const FPoly& a, const FPoly& b, long long p) {
  FPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] - b[i] + p) % p;
  ftrim(r);
  return r;
}

std::pair<FPoly, FPoly> fdivrem(const FPoly& a, const FPoly& b, long long p) {
  FPoly r = a;
  ftrim(r);
  if (r.size() < b.size()) return {FPoly{}, r};
  long long inv = mod_inv(b.back(), p);
  FPoly q(r.size() - b.size() + 1, 0);
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    long long c = r[k + b.size() - 1] * inv % p;
    q[k] = c;
    if (!c) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] = ((r[k + j] - c * b[j]) % p + p) % p;
  }
  ftrim(r);
  ftrim(q);
  return {q, r};
}

FPoly fmonic(FPoly a, long long p) {
  ftrim(a);
  if (a.empty()) return a;
  long long inv = mod_inv(a.back(), p);
  for (auto& c : a) c = c * inv % p;
  return a;
}

FPoly fgcd(FPoly a, FPoly b, long long p) {
  ftrim(a);
  ftrim(b);
  while (!b.empty()) {
    FPoly r = fdivrem(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return fmonic(a, p);
}

// s*a + t*b = 1 for coprime a, b.
void fxgcd(const FPoly& a, const FPoly& b, long long p, FPoly& s, FPoly& t) {
  FPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = fdivrem(r0, r1, p);
    FPoly s2 = fsub(s0, fmul(q, s1, p), p);
    FPoly t2 = fsub(t0, fmul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  long long inv = mod_inv(r0.back(), p);
  for (auto& c : s0) c = c * inv % p;
  for (auto& c : t0) c = c * inv % p;
  s = s0;
  t = t0;
}

FPoly fpowmod(FPoly base, const Int& e, const FPoly& m, long long p) {
  FPoly r{1};
  base = fdivrem(base, m, p).second;
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (long i = static_cast<long>(bits) - 1; i >= 0; --i) {
    r = fdivrem(fmul(r, r, p), m, p).second;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = fdivrem(fmul(r, base, p), m, p).second;
  }
  return r;
}

FPoly reduce_mod(const ZPoly& f, long long p) {
  FPoly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = mpz_fdiv_ui(f[i].get_mpz_t(), p);
  ftrim(r);
  return r;
}

FPoly fderiv(const FPoly& a, long long p) {
  if (a.size() <= 1) return {};
  FPoly d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<long long>(i % p) % p;
  ftrim(d);
  return d;
}

void equal_degree_split(const FPoly& g, int d, long long p, std::mt19937_64& rng, std::vector<FPoly>& out) {
  if (static_cast<int>(g.size()) - 1 == d) {
    out.push_back(g);
    return;
  }
  Int e;
  mpz_ui_pow_ui(e.get_mpz_t(), p, d);
  e = (e - 1) / 2;
  std::uniform_int_distribution<long long> dist(0, p - 1);
  for (;;) {
    FPoly a(g.size() - 1);
    for (auto& c : a) c = dist(rng);
    ftrim(a);
    if (a.size() <= 1) continue;
    FPoly b = fsub(fpowmod(a, e, g, p), FPoly{1}, p);
    FPoly h = fgcd(b, g, p);
    if (h.size() > 1 && h.size() < g.size()) {
      equal_degree_split(h, d, p, rng, out);
      equal_degree_split(fmonic(fdivrem(g, h, p).first, p), d, p, rng, out);
      return;
    }
  }
}

// Monic irreducible factors of a squarefree polynomial over F_p, p odd.
std::vector<FPoly> factor_mod_p(const FPoly& f_in, long long p) {
  FPoly f = fmonic(f_in, p);
  std::vector<FPoly> out;
  std::mt19937_64 rng(12345);
  FPoly h{0, 1};
  for (int d = 1; 2 * d <= static_cast<int>(f.size()) - 1; ++d) {
    h = fpowmod(h, Int(static_cast<long>(p)), f, p);
    FPoly g = fgcd(fsub(h, FPoly{0, 1}, p), f, p);
    if (g.size() > 1) {
      equal_degree_split(g, d, p, rng, out);
      f = fmonic(fdivrem(f, g, p).first, p);
      h = fdivrem(h, f, p).second;
    }
  }
  if (f.size() > 1) out.push_back(f);
  return out;
}

// ---- arithmetic in (Z/m)[x] ----
ZPoly zmod(const ZPoly& a, const Int& m) {
  ZPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mpz_fdiv_r(r[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
  trim(r);
  return r;
}

ZPoly zadd(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

ZPoly zsub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

// Division by a monic b modulo m.
std::pair<ZPoly, ZPoly> zdivrem_monic(const ZPoly& a, const ZPoly& b, const Int& m) {
  ZPoly r = zmod(a, m);
  if (r.size() < b.size()) return {ZPoly{}, r};
  ZPoly q(r.size() - b.size() + 1);
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    Int c = r[k + b.size() - 1];
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] -= c * b[j];
    for (std::size_t j = 0; j < b.size(); ++j) mpz_fdiv_r(r[k + j].get_mpz_t(), r[k + j].get_mpz_t(), m.get_mpz_t());
  }
  trim(r);
  return {zmod(q, m), r};
}

ZPoly from_fpoly(const FPoly& a) {
  ZPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<long>(a[i]);
  return r;
}

// Lifts f = g*h (mod p), h monic, to modulus >= target; returns the modulus used.
void hensel_pair(const ZPoly& f, ZPoly& g, ZPoly& h, long long p, const Int& target, Int& modulus) {
  FPoly s0, t0;
  fxgcd(reduce_mod(g, p), reduce_mod(h, p), p, s0, t0);
  // Normalize degrees: deg s < deg h, deg t < deg g.
  FPoly hp = reduce_mod(h, p), gp = reduce_mod(g, p);
  s0 = fdivrem(s0, hp, p).second;
  t0 = fdivrem(fsub(FPoly{1}, fmul(s0, gp, p), p), hp, p).first;
  ZPoly s = from_fpoly(s0), t = from_fpoly(t0);
  Int m = static_cast<long>(p);
  while (m < target) {
    Int m2 = m * m;
    ZPoly e = zmod(zsub(f, poly_mul(g, h)), m2);
    auto [qq, r] = zdivrem_monic(poly_mul(s, e), h, m2);
    ZPoly g2 = zmod(zadd(zadd(g, poly_mul(t, e)), poly_mul(qq, g)), m2);
    ZPoly h2 = zmod(zadd(h, r), m2);
    ZPoly b = zmod(zsub(zadd(poly_mul(s, g2), poly_mul(t, h2)), ZPoly{Int(1)}), m2);
    auto [c, d] = zdivrem_monic(poly_mul(s, b), h2, m2);
    ZPoly s2 = zmod(zsub(s, d), m2);
    ZPoly t2 = zmod(zsub(zsub(t, poly_mul(t, b)), poly_mul(c, g2)), m2);
    g = g2;
    h = h2;
    s = s2;
    t = t2;
    m = m2;
  }
  modulus = m;
}

// Twice a coefficient bound for lc(f) times any factor of f.
Int lifting_target(const ZPoly& f) {
  Int norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  Int norm;
  mpz_sqrt(norm.get_mpz_t(), norm2.get_mpz_t());
  norm += 1;
  Int bound = 2 * abs(f.back()) * norm;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), f.size() - 1);
  return bound + 1;
}

void lift_tree(const ZPoly& f, const std::vector<FPoly>& facs, long long p, const Int& target,
               std::vector<ZPoly>& out, Int& modulus) {
  if (facs.size() == 1) {
    Int inv, lc = f.back();
    Int m = modulus;
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), m.get_mpz_t());
    ZPoly r = f;
    for (auto& c : r) c *= inv;
    out.push_back(zmod(r, m));
    return;
  }
  std::size_t half = facs.size() / 2;
  std::vector<FPoly> A(facs.begin(), facs.begin() + half), B(facs.begin() + half, facs.end());
  FPoly gp{static_cast<long long>(mpz_fdiv_ui(f.back().get_mpz_t(), p))};
  for (const auto& a : A) gp = fmul(gp, a, p);
  FPoly hp{1};
  for (const auto& b : B) hp = fmul(hp, b, p);
  ZPoly g = from_fpoly(gp), h = from_fpoly(hp);
  Int m;
  hensel_pair(f, g, h, p, target, m);
  modulus = m;
  lift_tree(g, A, p, target, out, modulus);
  lift_tree(h, B, p, target, out, modulus);
}

ZPoly symmetric(const ZPoly& a, const Int& m) {
  ZPoly r = zmod(a, m);
  Int half = m / 2;
  for (auto& c : r)
    if (c > half) c -= m;
  trim(r);
  return r;
}

// Irreducible factors of a squarefree primitive polynomial of degree >= 1.
std::vector<ZPoly> factor_squarefree(const ZPoly& f_in) {
  ZPoly f = primitive_part(f_in);
  if (degree(f) <= 1) return {f};
  long long p = 3;
  for (;; p = next_prime(p)) {
    if (mpz_divisible_ui_p(f.back().get_mpz_t(), p)) continue;
    FPoly fp = reduce_mod(f, p);
    if (fgcd(fp, fderiv(fp, p), p).size() == 1) break;
  }
  std::vector<FPoly> modp = factor_mod_p(reduce_mod(f, p), p);
  if (modp.size() == 1) return {f};
  Int target = lifting_target(f);
  Int modulus = static_cast<long>(p);
  std::vector<ZPoly> lifted;
  lift_tree(f, modp, p, target, lifted, modulus);

  std::vector<ZPoly> found;
  std::vector<bool> used(lifted.size(), false);
  std::size_t remaining = lifted.size();
  for (std::size_t s = 1; 2 * s <= remaining; ++s) {
    bool progress = true;
    while (progress && 2 * s <= remaining) {
      progress = false;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < lifted.size(); ++i)
        if (!used[i]) idx.push_back(i);
      std::vector<bool> pick(idx.size(), false);
      std::fill(pick.begin(), pick.begin() + s, true);
      do {
        ZPoly g{f.back()};
        for (std::size_t i = 0; i < idx.size(); ++i)
          if (pick[i]) g = zmod(poly_mul(g, lifted[idx[i]]), modulus);
        g = primitive_part(symmetric(g, modulus));
        ZPoly q;
        if (poly_divides(g, f, &q)) {
          found.push_back(g);
          f = primitive_part(q);
          for (std::size_t i = 0; i < idx.size(); ++i)
            if (pick[i]) used[idx[i]] = true;
          remaining -= s;
          progress = true;
          break;
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
  if (degree(f) >= 1) found.push_back(f);
  return found;
}

}  // namespace

std::vector<std::pair<ZPoly, int>> factor_poly(const ZPoly& f_in) {
  ZPoly f = primitive_part(f_in);
  if (f.empty()) throw Error(Errc::ZeroInput, "factor_poly(0)");
  std::vector<std::pair<ZPoly, int>> out;
  // Squarefree modulo a prime not dividing the leading coefficient implies squarefree over Q.
  if (degree(f) >= 1) {
    long long p = 1000003;
    for (int tries = 0; tries < 3; ++tries, p = next_prime(p)) {
      if (mpz_divisible_ui_p(f.back().get_mpz_t(), p)) continue;
      FPoly fp = reduce_mod(f, p);
      if (fgcd(fp, fderiv(fp, p), p).size() == 1) {
        for (auto& fac : factor_squarefree(f)) out.emplace_back(fac, 1);
        std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
          if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
          return x.first < y.first;
        });
        return out;
      }
    }
  }
  // Yun's squarefree decomposition over Q.
  QPoly a = to_qpoly(f);
  QPoly a1 = derivative(a);
  QPoly b = poly_gcd(a, a1);
  if (degree(a) >= 1) {
    QPoly c = poly_divrem(a, b).first;
    QPoly d = poly_sub(poly_divrem(a1, b).first, derivative(c));
    int i = 1;
    while (degree(c) >= 1) {
      QPoly g = poly_gcd(c, d);
      if (degree(g) >= 1)
        for (auto& fac : factor_squarefree(primitive_part(g))) out.emplace_back(fac, i);
      QPoly c2 = poly_divrem(c, g).first;
      d = poly_sub(poly_divrem(d, g).first, derivative(c2));
      c = c2;
      ++i;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    return x.first < y.first;
  });
  return out;
}

namespace {
template <class C>
std::string render(const std::vector<C>& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
    if (p[k] == 0) continue;
    C c = p[k];
    bool neg = c < 0;
    if (neg) c = -c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (k == 0 || c != 1) os << c;
    if (k >= 1) os << (k == 0 || c != 1 ? "*x" : "x");
    if (k >= 2) os << '^' << k;
  }
  return os.str();
}
}  // namespace

std::string poly_to_string(const ZPoly& p) { return render(p); }
std::string poly_to_string(const QPoly& p) { return render(p); }

}  // namespace bsdtwist
