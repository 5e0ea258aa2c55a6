#pragma once

#include <mpfr.h>

#include <string>

#include "bsdtwist/matrix.hpp"

namespace bsdtwist {

// Default working precision in bits: 128, or BSDTWIST_PRECISION when set (>= 64).
mpfr_prec_t default_precision();

// Owning MPFR float with its own precision. Binary operations round to the
// larger operand precision.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = default_precision());
  Real(double v, mpfr_prec_t prec);
  Real(long v, mpfr_prec_t prec);
  Real(const Int& v, mpfr_prec_t prec);
  Real(const Rat& v, mpfr_prec_t prec);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  Int round() const;
  int sign() const { return mpfr_sgn(v_); }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  std::string to_string(int digits = 20) const;

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);

Real sqrt(const Real& x);
Real abs(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real pow(const Real& x, const Real& y);
Real cbrt(const Real& x);
Real cos(const Real& x);
Real acos(const Real& x);
Real const_pi(mpfr_prec_t prec);
// Arithmetic-geometric mean of two positive reals.
Real agm(const Real& a, const Real& b);

}  // namespace bsdtwist
