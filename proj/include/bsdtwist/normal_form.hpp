#pragma once

#include "bsdtwist/matrix.hpp"

namespace bsdtwist {

// Row Hermite normal form: U*A = H with U unimodular (m x m). The first `rank`
// rows of H are the echelon rows (positive pivots, entries above a pivot reduced
// into [0, pivot)); the remaining rows are zero and the matching rows of U span
// the integer left kernel of A.
struct HermiteForm {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
};

HermiteForm hnf_with_transform(const IntMatrix& a);
// Nonzero rows of the Hermite normal form only.
IntMatrix hnf(const IntMatrix& a);

// U*M*V = S, S diagonal with d1 | d2 | ..., U and V unimodular.
struct SmithForm {
  IntMatrix S;
  IntMatrix U;
  IntMatrix V;
};
SmithForm snf(const IntMatrix& m);
std::vector<Int> elementary_divisors(const IntMatrix& m);

// Z-basis (rows) of {x in Z^m : x*A = 0}, in Hermite form.
IntMatrix integer_left_kernel(const IntMatrix& a);

}  // namespace bsdtwist
