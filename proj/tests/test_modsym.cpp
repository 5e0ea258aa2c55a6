#include <numeric>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/linalg.hpp"
#include "bsdtwist/modsym.hpp"
#include "bsdtwist/poly.hpp"
#include "curve_fixture.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace bsdtwist;

namespace {

// Genus of X0(N) from the classical formula.
long genus_oracle(long N) {
  long mu = N, nu2 = 1, nu3 = 1;
  long m = N;
  for (long p = 2; p <= m; ++p) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    mu = mu / p * (p + 1);
    long k4 = p == 2 ? 0 : (p % 4 == 1 ? 2 : 0);
    long k3 = p == 3 ? 1 : (p % 3 == 1 ? 2 : 0);
    nu2 *= (e >= 2 && p == 2) ? 0 : (p == 2 ? 1 : k4);
    nu3 *= (e >= 2 && p == 3) ? 0 : k3;
  }
  long cusps = 0;
  for (long d = 1; d <= N; ++d)
    if (N % d == 0) cusps += euler_phi(std::gcd(d, N / d));
  // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 c
  return (12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps) / 12;
}

long cusp_count_oracle(long N) {
  long c = 0;
  for (long d = 1; d <= N; ++d)
    if (N % d == 0) c += euler_phi(std::gcd(d, N / d));
  return c;
}

RatVector add(RatVector a, const RatVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

RatVector neg(RatVector a) {
  for (auto& x : a) x = -x;
  return a;
}

}  // namespace

TEST_CASE("genus oracle sanity") {
  CHECK(genus_oracle(11) == 1);
  CHECK(genus_oracle(37) == 2);
  CHECK(genus_oracle(1) == 0);
  CHECK(genus_oracle(23) == 2);
  CHECK(genus_oracle(64) == 3);
}

TEST_CASE("dimensions match genus and cusp counts") {
  CHECK(ModSymSpace(11).cuspidal().rank() == 2);
  CHECK(ModSymSpace(37).cuspidal().rank() == 4);
  CHECK(ModSymSpace(1).cuspidal().rank() == 0);
  for (long N = 1; N <= 200; ++N) {
    ModSymSpace M(N);
    long g = genus_oracle(N);
    long c = cusp_count_oracle(N);
    CAPTURE(N);
    CHECK(static_cast<long>(M.num_cusps()) == c);
    CHECK(static_cast<long>(M.dimension()) == 2 * g + c - 1);
    CHECK(static_cast<long>(M.cuspidal().rank()) == 2 * g);
    CHECK(static_cast<long>(M.plus().rank()) == g);
    CHECK(static_cast<long>(M.minus().rank()) == g);
  }
}

TEST_CASE("Manin relations hold for every generator") {
  for (long N : {11L, 24L, 37L, 45L, 64L}) {
    ModSymSpace M(N);
    const P1List& p1 = M.p1();
    for (std::size_t i = 0; i < p1.size(); ++i) {
      auto [c, d] = p1.rep(i);
      RatVector x = M.manin_symbol(Int(c), Int(d));
      CHECK(is_zero_vector(add(x, M.manin_symbol(Int(d), Int(-c)))));
      RatVector t1 = M.manin_symbol(Int(d), Int(-c - d));
      RatVector t2 = M.manin_symbol(Int(-c - d), Int(c));
      CHECK(is_zero_vector(add(add(x, t1), t2)));
    }
  }
}

TEST_CASE("paths") {
  ModSymSpace M(11);
  Cusp zero{Int(0), Int(1)}, oo = Cusp::infinity();
  CHECK(is_zero_vector(M.path(zero, zero)));
  CHECK(is_zero_vector(add(M.path(zero, oo), M.path(oo, zero))));
  RatVector w = M.winding();
  CHECK_FALSE(is_zero_vector(w));
  RatVector bd = vec_mul(w, M.boundary());
  int nonzero = 0;
  for (const auto& x : bd)
    if (x != 0) {
      ++nonzero;
      CHECK(abs(x) == 1);
    }
  CHECK(nonzero == 2);

  testgen::Gen g(41);
  for (long N : {11L, 30L, 37L}) {
    ModSymSpace S(N);
    for (int trial = 0; trial < 50; ++trial) {
      Cusp a{Int(g.uniform(-50, 50)), Int(g.uniform(1, 40))};
      Cusp b{Int(g.uniform(-50, 50)), Int(g.uniform(1, 40))};
      Cusp c{Int(g.uniform(-50, 50)), Int(g.uniform(0, 40))};
      CHECK(S.path(a, c) == add(S.path(a, b), S.path(b, c)));
      // Paths between Gamma0(N)-equivalent cusps: gamma{x, y} = {x, y}.
      long u = g.uniform(-5, 5), v = g.uniform(-5, 5);
      long A = 1 + u * v * N, B = u, C = v * N, D = 1;
      Cusp ga{A * a.num + B * a.den, C * a.num + D * a.den};
      Cusp gb{A * b.num + B * b.den, C * b.num + D * b.den};
      CHECK(S.path(ga, gb) == S.path(a, b));
    }
  }
}

TEST_CASE("star involution") {
  for (long N : {11L, 37L, 42L, 97L}) {
    ModSymSpace M(N);
    std::size_t n = M.dimension();
    CHECK(M.star() * M.star() == RatMatrix::identity(n));
    CHECK(M.apply_star(M.winding()) == M.winding());
  }
  for (auto [N, D] : std::vector<std::pair<long, long>>{{11, 4}, {11, 7}, {37, 3}, {11, 3}, {67, 8}}) {
    ModSymSpace M(N);
    RatVector e = M.twisted_element(D);
    CHECK(M.apply_star(e) == neg(e));
    CHECK(is_zero_vector(vec_mul(e, M.boundary())));
    CHECK(M.cuspidal().contains(e));
    CHECK(M.minus().contains(e));
  }
  ModSymSpace M(11);
  CHECK_THROWS_AS(M.twisted_element(12), Error);
  CHECK_THROWS_AS(M.twisted_element(11), Error);
}

TEST_CASE("Hecke operators at level 11") {
  ModSymSpace M(11);
  RatMatrix C = M.cuspidal().basis();
  QPoly t2 = charpoly(restrict_to(C, M.hecke(2)));
  CHECK(t2 == QPoly{4, 4, 1});  // (x + 2)^2
  QPoly t3 = charpoly(restrict_to(C, M.hecke(3)));
  CHECK(t3 == QPoly{1, 2, 1});  // (x + 1)^2
}

TEST_CASE("Heilbronn action agrees with coset action") {
  for (long N : {11L, 23L, 35L, 37L, 60L}) {
    ModSymSpace M(N);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
      if (N % p == 0) continue;
      CAPTURE(N);
      CAPTURE(p);
      CHECK(M.hecke(p) == M.hecke_by_cosets(p));
    }
  }
}

TEST_CASE("Hecke operators commute with each other and with star") {
  for (long N : {37L, 44L, 63L, 97L}) {
    ModSymSpace M(N);
    std::vector<long> ps{2, 3, 5, 7, 11, 13};
    for (long p : ps) {
      RatMatrix tp = M.hecke(p);
      CHECK(tp * M.star() == M.star() * tp);
      CHECK(M.cuspidal().contains(M.cuspidal().image(tp)));
      for (long q : ps) {
        if (q <= p) continue;
        RatMatrix tq = M.hecke(q);
        CHECK(tp * tq == tq * tp);
      }
    }
  }
}

TEST_CASE("winding element times n is in H+") {
  for (long N : {11L, 17L, 19L, 37L, 67L}) {
    ModSymSpace M(N);
    CHECK(winding_multiple(N) == Int((N - 1) / std::gcd(N - 1, 12L)));
    RatVector e = vec_mul(M.winding(), M.cuspidal_projection());
    Rat n(winding_multiple(N));
    for (auto& x : e) x *= n;
    CHECK(M.plus().contains(e));
  }
}

TEST_CASE("Eichler-Shimura consistency with point counts") {
  auto curves = testfix::load_curves();
  REQUIRE(!curves.empty());
  for (long N : {11L, 14L, 15L, 17L, 19L, 37L}) {
    ModSymSpace M(N);
    RatMatrix C = M.cuspidal().basis();
    for (long l : {2L, 3L, 5L, 7L, 11L, 13L}) {
      if (N % l == 0) continue;
      QPoly cp = charpoly(restrict_to(C, M.hecke(l)));
      for (const auto& c : curves) {
        if (c.N != N || c.index != 1) continue;
        long ap = testfix::naive_ap(c.a, l);
        Rat v = 0;
        for (int k = degree(cp); k >= 0; --k) v = v * ap + cp[k];
        CAPTURE(N);
        CAPTURE(l);
        CHECK(v == 0);
      }
    }
  }
}
