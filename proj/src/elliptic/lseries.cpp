#include <algorithm>
#include <cmath>
#include <vector>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/elliptic.hpp"
#include "bsdtwist/error.hpp"

namespace bsdtwist {

namespace {

// Refine a simple root of X^3 + P X + Q.
Real newton(Real x, const Real& P, const Real& Q) {
  for (int i = 0; i < 6; ++i) {
    Real f = (x * x + P) * x + Q;
    Real df = Real(3L, x.precision()) * x * x + P;
    if (df.sign() == 0) break;
    x -= f / df;
  }
  return x;
}

// Least positive real period of y^2 = 4x^3 + ... whose short form is X^3 + P X + Q, X = 36x + 3 b2.
Real real_period(const Int& Pi, const Int& Qi, mpfr_prec_t prec) {
  mpfr_prec_t wp = prec + 32;
  Real P(Pi, wp), Q(Qi, wp), pi = const_pi(wp);
  Real scale(36L, wp);
  Int disc = -4 * Pi * Pi * Pi - 27 * Qi * Qi;
  Real result(wp);
  if (disc > 0) {
    Real m = sqrt(-P / Real(3L, wp));
    Real arg = Real(3L, wp) * Q / (Real(2L, wp) * P) * sqrt(Real(-3L, wp) / P);
    if (arg > Real(1L, wp)) arg = Real(1L, wp);
    if (arg < Real(-1L, wp)) arg = Real(-1L, wp);
    Real theta = acos(arg) / Real(3L, wp);
    Real third = Real(2L, wp) * pi / Real(3L, wp);
    std::vector<Real> r;
    for (long k = 0; k < 3; ++k)
      r.push_back(newton(Real(2L, wp) * m * cos(theta - Real(k, wp) * third), P, Q));
    std::sort(r.begin(), r.end(), [](const Real& a, const Real& b) { return a > b; });
    Real d13 = (r[0] - r[2]) / scale, d12 = (r[0] - r[1]) / scale;
    result = pi / agm(sqrt(d13), sqrt(d12));
  } else {
    Real half = Q / Real(-2L, wp);
    Real s0 = sqrt(Q * Q / Real(4L, wp) + P * P * P / Real(27L, wp));
    Real x1 = newton(cbrt(half + s0) + cbrt(half - s0), P, Q);
    // e1 - e2 = (3 X1 - i s) / 72 with s^2 = 3 X1^2 + 4 P.
    Real s2 = Real(3L, wp) * x1 * x1 + Real(4L, wp) * P;
    Real re = Real(3L, wp) * x1 / Real(72L, wp);
    Real mod = sqrt(Real(9L, wp) * x1 * x1 + s2) / Real(72L, wp);
    Real a = sqrt((mod + re) / Real(2L, wp));
    result = pi / agm(a, sqrt(mod));
  }
  mpfr_prec_round(result.get(), prec, MPFR_RNDN);
  return result;
}

struct SeriesData {
  Int conductor;
  Real sqrtN;
  std::vector<long> an;
};

SeriesData series_data(const EllipticCurve& E, mpfr_prec_t prec) {
  SeriesData s;
  s.conductor = conductor(E);
  s.sqrtN = sqrt(Real(s.conductor, prec));
  return s;
}

void ensure_terms(SeriesData& s, const EllipticCurve& E, long M) {
  if (static_cast<long>(s.an.size()) <= M) s.an = an_list(E, M);
}

// Terms needed so that sum_{n > M} c n^k q^n < tol, with q = exp(-x).
long terms_for(double x, double tol, int k) {
  double q = std::exp(-x);
  for (long M = 1;; M = M + 1 + M / 8) {
    double tail = 2.0 * std::pow(double(M + 1), k) * std::exp(-x * (M + 1)) / std::pow(1 - q, k + 1);
    if (tail < tol) return M;
  }
}

// g(t) = sum a_n exp(-2 pi n t / sqrt N).
Real theta_sum(const SeriesData& s, const Real& t, long M, mpfr_prec_t prec) {
  Real x = Real(2L, prec) * const_pi(prec) * t / s.sqrtN;
  Real q = exp(-x), qn = q, sum(prec);
  for (long n = 1; n <= M; ++n) {
    if (s.an[n] != 0) sum += Real(s.an[n], prec) * qn;
    qn *= q;
  }
  return sum;
}

int root_number_impl(SeriesData& s, const EllipticCurve& E, mpfr_prec_t prec) {
  double sqrtN = s.sqrtN.to_double();
  double tol = std::ldexp(1.0, -int(prec) + 8);
  for (double t : {1.1, 1.25, 1.5, 1.8}) {
    long M = terms_for(2 * M_PI / (t * sqrtN), tol, 1);
    ensure_terms(s, E, M);
    Real tt(t, prec), t2 = tt * tt;
    Real g_small = theta_sum(s, Real(1L, prec) / tt, M, prec);
    Real g_big = theta_sum(s, tt, M, prec);
    Real scale = abs(g_small) + t2 * abs(g_big);
    if (scale.to_double() < 1e-12) continue;
    double dplus = (abs(g_small - t2 * g_big) / scale).to_double();
    double dminus = (abs(g_small + t2 * g_big) / scale).to_double();
    if (dplus < 1e-15 && dminus > 1e-6) return 1;
    if (dminus < 1e-15 && dplus > 1e-6) return -1;
  }
  throw Error(Errc::PrecisionLoss, "functional equation sign not determined for " + E.to_string());
}

LValue l1_impl(SeriesData& s, const EllipticCurve& E, double target, mpfr_prec_t prec, long terms) {
  LValue out{Real(prec), Real(prec), 0, root_number_impl(s, E, prec)};
  if (out.root_number == -1) return out;
  double x = 2 * M_PI / s.sqrtN.to_double();
  // |a_n| / n <= d(n) / sqrt(n) <= 2, so the tail is at most 2 * 2 * q^(M+1) / (1 - q).
  long M = terms > 0 ? terms : terms_for(x, target / 2, 0);
  ensure_terms(s, E, M);
  Real xr = Real(2L, prec) * const_pi(prec) / s.sqrtN;
  Real q = exp(-xr), qn = q, sum(prec);
  for (long n = 1; n <= M; ++n) {
    if (s.an[n] != 0) sum += Real(s.an[n], prec) * qn / Real(n, prec);
    qn *= q;
  }
  out.value = Real(2L, prec) * sum;
  out.error_bound = Real(4L, prec) * exp(-xr * Real(M + 1, prec)) / (Real(1L, prec) - q);
  out.terms = M;
  return out;
}

}  // namespace

RealPeriodData real_periods(const EllipticCurve& E, mpfr_prec_t prec) {
  EllipticCurve M = minimal_model(E);
  Int P = -27 * M.c4(), Q = -54 * M.c6();
  RealPeriodData d{real_period(P, Q, prec), M.discriminant() > 0 ? 2 : 1, Real(prec), real_period(P, -Q, prec)};
  d.omega_total = Real(long(d.c_infinity), prec) * d.omega_plus;
  if (d.omega_plus.sign() <= 0 || d.omega_minus_im.sign() <= 0 || !d.omega_plus.is_finite())
    throw Error(Errc::PrecisionLoss, "period computation failed for " + E.to_string());
  return d;
}

int root_number(const EllipticCurve& E, mpfr_prec_t prec) {
  EllipticCurve M = minimal_model(E);
  SeriesData s = series_data(M, prec);
  return root_number_impl(s, M, prec);
}

LValue numeric_L1(const EllipticCurve& E, double target_accuracy, mpfr_prec_t prec, long terms) {
  EllipticCurve M = minimal_model(E);
  SeriesData s = series_data(M, prec);
  return l1_impl(s, M, target_accuracy, prec, terms);
}

BsdData bsd_data(const EllipticCurve& E, mpfr_prec_t prec) {
  EllipticCurve M = minimal_model(E);
  SeriesData s = series_data(M, prec);
  BsdData b{s.conductor, torsion_order(M), tamagawa_product(M), real_periods(M, prec),
            l1_impl(s, M, 1e-25, prec, 0), Real(prec), Rat(0)};
  if (b.l1.root_number == -1 || abs(b.l1.value).to_double() < 1e-12)
    throw Error(Errc::RankPositive, "L(E, 1) vanishes for " + E.to_string());
  Real t2(long(b.torsion * b.torsion), prec);
  b.sha_numeric = b.l1.value * t2 / (b.periods.omega_total * Real(b.tamagawa, prec));
  Int den = 4 * b.tamagawa * b.torsion * b.torsion;
  Int k = (b.sha_numeric * Real(den, prec)).round();
  b.sha = Rat(k, den);
  b.sha.canonicalize();
  double residual = std::fabs((b.sha_numeric - Real(b.sha, prec)).to_double());
  if (residual >= 1e-3)
    throw Error(Errc::RoundingAmbiguous, "analytic Sha of " + E.to_string() + " is " + b.sha_numeric.to_string());
  return b;
}

Rat sha_an(const EllipticCurve& E, mpfr_prec_t prec) { return bsd_data(E, prec).sha; }

}  // namespace bsdtwist
