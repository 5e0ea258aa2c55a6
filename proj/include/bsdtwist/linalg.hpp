#pragma once

#include <cstddef>
#include <vector>

#include "bsdtwist/matrix.hpp"

namespace bsdtwist {

struct Echelon {
  RatMatrix reduced;                 // reduced row echelon form, zero rows removed
  std::vector<std::size_t> pivots;   // pivot column of each row
};

Echelon echelon(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);

// Basis (rows) of {x : x * m = 0}.
RatMatrix left_kernel(const RatMatrix& m);
// Basis (rows) of the row space.
RatMatrix row_space(const RatMatrix& m);

// Solves x * basis = v for x; basis must have independent rows. Throws SpanMismatch if v is outside.
RatVector solve_left(const RatMatrix& basis, const RatVector& v);
// Coordinates of every row of vs in the given row basis.
RatMatrix solve_left(const RatMatrix& basis, const RatMatrix& vs);

Rat determinant(const RatMatrix& m);
Int determinant(const IntMatrix& m);  // fraction-free Bareiss
RatMatrix inverse(const RatMatrix& m);

// Matrix of the map x -> x*op restricted to the row space of basis, in that basis.
RatMatrix restrict_to(const RatMatrix& basis, const RatMatrix& op);

// Scales a rational matrix row-wise by a positive integer so every entry is integral.
IntMatrix clear_denominators(const RatMatrix& m);

}  // namespace bsdtwist
