#pragma once

#include <cstddef>

#include "bsdtwist/matrix.hpp"

namespace bsdtwist {

// A finitely generated Z-submodule of Q^n. The stored basis is canonical
// (scaled Hermite form), so two lattices are equal iff their bases are.
class Lattice {
 public:
  Lattice() = default;
  // Z-span of the rows; dependent rows are allowed.
  static Lattice from_generators(const RatMatrix& gens);
  // Rows must be Q-independent; throws RankDeficient otherwise.
  static Lattice from_basis(const RatMatrix& basis);
  static Lattice standard(std::size_t n);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t rank() const { return basis_.rows(); }
  const RatMatrix& basis() const { return basis_; }

  bool contains(const RatVector& v) const;
  bool contains(const Lattice& other) const;
  // Coordinates of the rows of vs in this basis (throws SpanMismatch when outside the Q-span).
  RatMatrix coordinates(const RatMatrix& vs) const;
  // Image under x -> x*op.
  Lattice image(const RatMatrix& op) const;
  // {v in this lattice : v*op = 0}.
  Lattice kernel_of(const RatMatrix& op) const;
  Lattice scaled(const Rat& s) const;

  bool operator==(const Lattice& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }

 private:
  std::size_t ambient_ = 0;
  RatMatrix basis_;
};

Lattice lattice_sum(const Lattice& a, const Lattice& b);

// |det| of the change of basis between L and M; equals [L : M] when M is inside L.
Rat lattice_index(const Lattice& L, const Lattice& M);

// ambient intersected with the Q-span of L.
Lattice saturate(const Lattice& L, const Lattice& ambient);

// Smallest lattice containing gens and stable under every x -> x*op.
Lattice closure_under(const Lattice& gens, const std::vector<RatMatrix>& ops);

}  // namespace bsdtwist
