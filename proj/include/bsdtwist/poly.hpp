#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bsdtwist/matrix.hpp"

namespace bsdtwist {

// Dense polynomials, coefficient i is the coefficient of x^i. Trailing zeros are trimmed.
using ZPoly = std::vector<Int>;
using QPoly = std::vector<Rat>;

template <class T>
void trim(std::vector<T>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }
inline int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly to_qpoly(const ZPoly& p);
// Primitive integer multiple with positive leading coefficient.
ZPoly primitive_part(const QPoly& p);
ZPoly primitive_part(const ZPoly& p);
Int content(const ZPoly& p);

ZPoly poly_mul(const ZPoly& a, const ZPoly& b);
QPoly poly_mul(const QPoly& a, const QPoly& b);
QPoly poly_sub(const QPoly& a, const QPoly& b);
std::pair<QPoly, QPoly> poly_divrem(const QPoly& a, const QPoly& b);
QPoly poly_gcd(const QPoly& a, const QPoly& b);  // monic
QPoly derivative(const QPoly& p);
// Exact quotient a / b over Z; returns false when b does not divide a in Z[x].
bool poly_divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient = nullptr);
ZPoly poly_pow(const ZPoly& p, int e);

// Characteristic polynomial det(x - M), monic.
QPoly charpoly(const RatMatrix& m);
RatMatrix eval_matrix(const QPoly& p, const RatMatrix& m);
Int resultant(const ZPoly& a, const ZPoly& b);

// Factorization into primitive irreducible factors with positive leading
// coefficient and multiplicities; the content is discarded. Sorted by (degree, coefficients).
std::vector<std::pair<ZPoly, int>> factor_poly(const ZPoly& f);

std::string poly_to_string(const ZPoly& p);
std::string poly_to_string(const QPoly& p);

}  // namespace bsdtwist
