#include "bsdtwist/real.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "bsdtwist/error.hpp"

namespace bsdtwist {

mpfr_prec_t default_precision() {
  static const mpfr_prec_t prec = [] {
    const char* s = std::getenv("BSDTWIST_PRECISION");
    if (!s) return mpfr_prec_t(128);
    long v = std::strtol(s, nullptr, 10);
    return mpfr_prec_t(std::max(64L, v));
  }();
  return prec;
}

Real::Real(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Real::Real(double v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(long v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(const Int& v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const Rat& v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& o) {
  mpfr_init2(v_, o.precision());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, o.precision());
  mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

namespace {

mpfr_prec_t joint(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

void widen(Real& a, const Real& b) {
  if (b.precision() > a.precision()) mpfr_prec_round(a.get(), b.precision(), MPFR_RNDN);
}

}  // namespace

Real& Real::operator+=(const Real& o) {
  widen(*this, o);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  widen(*this, o);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  widen(*this, o);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  widen(*this, o);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Int Real::round() const {
  Int r;
  mpfr_get_z(r.get_mpz_t(), v_, MPFR_RNDN);
  return r;
}

std::string Real::to_string(int digits) const {
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return buf.data();
}

Real operator+(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a) {
  Real r(a.precision());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()); }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()); }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()); }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()); }

Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r(joint(x, y));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real cbrt(const Real& x) {
  Real r(x.precision());
  mpfr_cbrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real cos(const Real& x) {
  Real r(x.precision());
  mpfr_cos(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real acos(const Real& x) {
  Real r(x.precision());
  mpfr_acos(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real const_pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real agm(const Real& a, const Real& b) {
  if (a.sign() <= 0 || b.sign() <= 0) throw Error(Errc::PrecisionLoss, "agm needs positive arguments");
  mpfr_prec_t prec = joint(a, b);
  Real x = a, y = b;
  Real eps(1L, prec);
  mpfr_mul_2si(eps.get(), eps.get(), -long(prec) + 4, MPFR_RNDN);
  for (int it = 0; it < 4 * int(prec); ++it) {
    if (abs(x - y) <= eps * x) return x;
    Real m = x + y;
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    y = sqrt(x * y);
    x = std::move(m);
  }
  throw Error(Errc::PrecisionLoss, "agm did not converge");
}

}  // namespace bsdtwist
