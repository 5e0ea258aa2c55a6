#include <algorithm>
#include <functional>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/lattice.hpp"
#include "bsdtwist/linalg.hpp"
#include "bsdtwist/normal_form.hpp"
#include "bsdtwist/poly.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace bsdtwist;

namespace {

RatMatrix rm(std::vector<std::vector<long>> rows) {
  RatMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

IntMatrix im(std::vector<std::vector<long>> rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Oracle: d_k = gcd of all k x k minors; elementary divisors are d_k / d_{k-1}.
std::vector<Int> determinantal_divisors_oracle(const IntMatrix& m) {
  std::size_t r = m.rows(), c = m.cols();
  std::vector<Int> out;
  Int prev = 1;
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    Int g = 0;
    std::vector<bool> rs(r, false), cs(c, false);
    std::fill(rs.begin(), rs.begin() + k, true);
    do {
      std::fill(cs.begin(), cs.end(), false);
      std::fill(cs.begin(), cs.begin() + k, true);
      do {
        IntMatrix sub(k, k);
        std::size_t a = 0;
        for (std::size_t i = 0; i < r; ++i) {
          if (!rs[i]) continue;
          std::size_t b = 0;
          for (std::size_t j = 0; j < c; ++j)
            if (cs[j]) sub(a, b++) = m(i, j);
          ++a;
        }
        Int d = determinant(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      } while (std::prev_permutation(cs.begin(), cs.end()));
    } while (std::prev_permutation(rs.begin(), rs.end()));
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

int euler_criterion(long a, long p) {
  long r = ((a % p) + p) % p;
  if (r == 0) return 0;
  long e = (p - 1) / 2, acc = 1, b = r;
  while (e) {
    if (e & 1) acc = acc * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

// h(-D) = (w/2) * (-1/D) * sum_{a<D} (-D/a) a, with w the number of units.
Rat analytic_class_number(long D) {
  Rat s = 0;
  for (long a = 1; a < D; ++a) s += kronecker(Int(-D), Int(a)) * a;
  long w = D == 3 ? 6 : D == 4 ? 4 : 2;
  return -s / D * w / 2;
}

}  // namespace

TEST_CASE("snf examples") {
  auto id = snf(IntMatrix::identity(3));
  CHECK(id.S == IntMatrix::identity(3));
  auto f = snf(im({{2, 0}, {0, 3}}));
  CHECK(f.S == im({{1, 0}, {0, 6}}));
  auto z = snf(IntMatrix(2, 3));
  CHECK(z.S.is_zero());
}

TEST_CASE("snf properties on random matrices") {
  testgen::Gen g(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = g.uniform(1, 12), c = g.uniform(1, 12);
    IntMatrix m = g.int_matrix(r, c, 6);
    if (trial % 5 == 0 && r > 1)  // force dependencies
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);
    SmithForm s = snf(m);
    CHECK(s.U * m * s.V == s.S);
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) CHECK(s.S(i, j) == 0);
    std::size_t k = std::min(r, c);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (s.S(i + 1, i + 1) == 0) continue;
      CHECK(s.S(i, i) != 0);
      CHECK(s.S(i + 1, i + 1) % s.S(i, i) == 0);
    }
  }
}

TEST_CASE("snf agrees with determinantal divisors on small matrices") {
  testgen::Gen g(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = g.uniform(1, 4), c = g.uniform(1, 4);
    IntMatrix m = g.int_matrix(r, c, 9);
    CHECK(elementary_divisors(m) == determinantal_divisors_oracle(m));
  }
}

TEST_CASE("hnf transform and kernel") {
  testgen::Gen g(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t r = g.uniform(1, 9), c = g.uniform(1, 7);
    IntMatrix m = g.int_matrix(r, c, 5);
    HermiteForm h = hnf_with_transform(m);
    CHECK(h.U * m == h.H);
    CHECK(abs(determinant(h.U)) == 1);
    CHECK(h.rank == rank(to_rat(m)));
    IntMatrix k = integer_left_kernel(m);
    CHECK(k.rows() == r - h.rank);
    CHECK((k * m).is_zero());
  }
}

TEST_CASE("hnf of tall matrices matches the transform-tracking elimination") {
  testgen::Gen g(41);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t c = g.uniform(1, 6), r = c + g.uniform(1, 8);
    IntMatrix m = g.int_matrix(r, c, trial % 2 ? 1000 : 4);
    if (trial % 5 == 0)
      for (std::size_t i = 0; i < r; ++i) m(i, c - 1) = m(i, 0) * 3;  // rank deficient
    HermiteForm ref = hnf_with_transform(m);
    CHECK(hnf(m) == ref.H.rows_range(0, ref.rank));
  }
}

TEST_CASE("lattice_index examples") {
  Lattice z2 = Lattice::standard(2);
  CHECK(lattice_index(z2, z2) == 1);
  CHECK(lattice_index(z2, Lattice::from_basis(rm({{2, 0}, {0, 3}}))) == 6);
  CHECK(lattice_index(z2, Lattice::from_basis(rm({{1, 1}, {1, -1}}))) == 2);
  CHECK(lattice_index(Lattice::from_basis(rm({{1, 1}, {1, -1}})), z2) == Rat(1, 2));
  Lattice line = Lattice::from_basis(rm({{1, 0}}));
  CHECK_THROWS_AS(lattice_index(z2, line), Error);
  try {
    lattice_index(Lattice::from_basis(rm({{1, 0}})), Lattice::from_basis(rm({{0, 1}})));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SpanMismatch);
  }
  CHECK_THROWS_AS(Lattice::from_basis(rm({{1, 2}, {2, 4}})), Error);
}

TEST_CASE("lattice_index multiplicativity and snf oracle") {
  testgen::Gen g(5);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = g.uniform(1, 6);
    IntMatrix a = g.nonsingular(n, 4), b = g.nonsingular(n, 4);
    Lattice L = Lattice::standard(n);
    Lattice K = Lattice::from_basis(to_rat(a));
    Lattice M = Lattice::from_basis(to_rat(b * a));
    CHECK(lattice_index(L, M) == lattice_index(L, K) * lattice_index(K, M));
    Int prod = 1;
    for (const auto& d : elementary_divisors(b * a)) prod *= d;
    CHECK(lattice_index(L, M) == Rat(prod));
  }
}

TEST_CASE("saturate") {
  Lattice z1 = Lattice::standard(1);
  CHECK(saturate(Lattice::from_basis(rm({{2}})), z1) == z1);
  Lattice z2 = Lattice::standard(2);
  CHECK(saturate(Lattice::from_basis(rm({{2, 2}})), z2) == Lattice::from_basis(rm({{1, 1}})));
  CHECK(saturate(z2, z2) == z2);
  CHECK_THROWS_AS(saturate(z2, Lattice::from_basis(rm({{1, 0}}))), Error);
}

TEST_CASE("kronecker") {
  CHECK(kronecker(Int(-3), Int(2)) == -1);
  CHECK(kronecker(Int(-7), Int(11)) == 1);
  for (long x = -20; x <= 20; ++x) CHECK(kronecker(Int(x), Int(1)) == 1);
  // (a/2) by a mod 8.
  for (long a = -40; a <= 40; ++a) {
    long r = ((a % 8) + 8) % 8;
    int expect = (r % 2 == 0) ? 0 : (r == 1 || r == 7) ? 1 : -1;
    CHECK(kronecker(Int(a), Int(2)) == expect);
  }
  for (long p : primes_up_to(100)) {
    if (p == 2) continue;
    for (long a = -60; a <= 60; ++a) CHECK(kronecker(Int(a), Int(p)) == euler_criterion(a, p));
    for (long q : primes_up_to(100)) {
      if (q == 2 || q == p) continue;
      int sign = ((p % 4 == 3) && (q % 4 == 3)) ? -1 : 1;
      CHECK(kronecker(Int(p), Int(q)) * kronecker(Int(q), Int(p)) == sign);
    }
  }
}

TEST_CASE("kronecker complete multiplicativity") {
  testgen::Gen g(17);
  for (int trial = 0; trial < 400; ++trial) {
    long a = g.uniform(-200, 200), b = g.uniform(-200, 200), n = g.uniform(-200, 200);
    CHECK(kronecker(Int(a * b), Int(n)) == kronecker(Int(a), Int(n)) * kronecker(Int(b), Int(n)));
    CHECK(kronecker(Int(n), Int(a * b)) == kronecker(Int(n), Int(a)) * kronecker(Int(n), Int(b)));
  }
}

TEST_CASE("fundamental discriminants and class numbers") {
  CHECK(is_fundamental_discriminant(Int(-3)));
  CHECK_FALSE(is_fundamental_discriminant(Int(-12)));
  CHECK(is_fundamental_discriminant(Int(-4)));
  CHECK(is_fundamental_discriminant(Int(-8)));
  CHECK_FALSE(is_fundamental_discriminant(Int(1)));
  CHECK_FALSE(is_fundamental_discriminant(Int(-16)));
  CHECK(class_number_unit(3).h == 1);
  CHECK(class_number_unit(3).u == 3);
  CHECK(class_number_unit(4).h == 1);
  CHECK(class_number_unit(4).u == 2);
  CHECK(class_number_unit(23).h == 3);
  CHECK(class_number_unit(23).u == 1);
  CHECK_THROWS_AS(class_number_unit(12), Error);
  for (long D = 3; D < 2000; ++D) {
    if (!is_fundamental_discriminant(Int(-D))) continue;
    CHECK(Rat(class_number_unit(D).h) == analytic_class_number(D));
  }
}

TEST_CASE("away_from") {
  CHECK(away_from({2}, Rat(12)) == 3);
  CHECK(away_from({2, 3}, Rat(8, 9)) == 1);
  CHECK(away_from({2, 11}, Rat(352, 5)) == Rat(1, 5));
  CHECK_THROWS_AS(away_from({2}, Rat(0)), Error);
  testgen::Gen g(23);
  for (int trial = 0; trial < 200; ++trial) {
    Rat x(g.uniform(1, 5000), g.uniform(1, 5000));
    x.canonicalize();
    CHECK(is_perfect_square(away_from({2, 3, 7}, x * x)));
  }
}

TEST_CASE("factorization of integers") {
  auto f = factor(Int(360));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::make_pair(Int(2), 3));
  CHECK(f[2] == std::make_pair(Int(5), 1));
  Int big = Int("1000000007") * Int("998244353") * 4;
  auto fb = factor(big);
  REQUIRE(fb.size() == 3);
  CHECK(fb[1].first == Int("998244353"));
  CHECK(winding_multiple(11) == 5);
  CHECK(winding_multiple(37) == 3);
  CHECK(winding_multiple(13) == 1);
  CHECK(winding_multiple(681) == 170);
}

TEST_CASE("charpoly satisfies Cayley-Hamilton") {
  testgen::Gen g(29);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = g.uniform(1, 8);
    RatMatrix m = to_rat(g.int_matrix(n, n, 5));
    QPoly p = charpoly(m);
    CHECK(degree(p) == static_cast<int>(n));
    CHECK(eval_matrix(p, m).is_zero());
    Rat tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
    CHECK(p[n - 1] == -tr);
    CHECK(p[0] == ((n % 2) ? -determinant(m) : determinant(m)));
  }
}

TEST_CASE("charpoly of rational matrices") {
  testgen::Gen g(31);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = g.uniform(1, 7);
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = Rat(g.uniform(-9, 9), g.uniform(1, 6));
        m(i, j).canonicalize();
      }
    QPoly p = charpoly(m);
    CHECK(p.back() == 1);
    CHECK(eval_matrix(p, m).is_zero());
  }
}

TEST_CASE("polynomial factorization") {
  ZPoly x2p1{1, 0, 1}, xm3{-3, 1}, x3m2{-2, 0, 0, 1}, phi5{1, 1, 1, 1, 1}, q{5, -7, 0, 3};
  ZPoly f = poly_mul(poly_mul(poly_pow(x2p1, 2), xm3), poly_mul(x3m2, poly_mul(phi5, poly_pow(q, 3))));
  auto fac = factor_poly(f);
  ZPoly back{Int(1)};
  for (auto& [p, e] : fac) back = poly_mul(back, poly_pow(p, e));
  CHECK(primitive_part(back) == primitive_part(f));
  CHECK(fac.size() == 5);
  // x^4 + 1 is irreducible over Q but splits modulo every prime.
  CHECK(factor_poly(ZPoly{1, 0, 0, 0, 1}).size() == 1);
  // x^4 - 10x^2 + 1, the minimal polynomial of sqrt2 + sqrt3.
  CHECK(factor_poly(ZPoly{1, 0, -10, 0, 1}).size() == 1);
}

TEST_CASE("polynomial factorization property: random products") {
  testgen::Gen g(31);
  for (int trial = 0; trial < 40; ++trial) {
    ZPoly f{Int(g.uniform(1, 3))};
    int pieces = g.uniform(1, 4);
    for (int i = 0; i < pieces; ++i) {
      ZPoly piece(g.uniform(2, 4));
      for (auto& c : piece) c = g.uniform(-6, 6);
      if (piece.back() == 0) piece.back() = 1;
      f = poly_mul(f, piece);
    }
    auto fac = factor_poly(f);
    ZPoly back{Int(1)};
    for (auto& [p, e] : fac) {
      back = poly_mul(back, poly_pow(p, e));
      // Degree <= 3 factors are irreducible iff they have no rational root.
      if (degree(p) == 2 || degree(p) == 3) {
        for (const auto& dn : divisors(Int(abs(p.back())).get_si()))
          for (long num = -40; num <= 40; ++num) {
            Rat r(num, dn);
            Rat v = 0;
            for (int k = degree(p); k >= 0; --k) v = v * r + p[k];
            CHECK(v != 0);
          }
      }
    }
    CHECK(primitive_part(back) == primitive_part(f));
  }
}

TEST_CASE("resultant") {
  ZPoly g{3, -1, 4, 2};
  for (long a = -5; a <= 5; ++a) {
    Int v = 0;
    for (int k = degree(g); k >= 0; --k) v = v * a + g[k];
    CHECK(resultant(ZPoly{-a, 1}, g) == v);
  }
  CHECK(resultant(ZPoly{-1, 1}, ZPoly{-1, 1}) == 0);
}
