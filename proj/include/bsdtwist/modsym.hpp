#pragma once

#include <array>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "bsdtwist/lattice.hpp"
#include "bsdtwist/matrix.hpp"

namespace bsdtwist {

// Element of P^1(Q); den == 0 encodes infinity.
struct Cusp {
  Int num;
  Int den;
  static Cusp infinity() { return {Int(1), Int(0)}; }
  static Cusp rational(const Rat& r) { return {r.get_num(), r.get_den()}; }
};

// P^1(Z/N): pairs (c:d) with gcd(c, d, N) = 1 modulo units.
class P1List {
 public:
  explicit P1List(long N);
  long level() const { return N_; }
  std::size_t size() const { return reps_.size(); }
  // Index of (c:d); -1 when gcd(c, d, N) != 1.
  long index(const Int& c, const Int& d) const;
  long index(long c, long d) const;
  std::pair<long, long> rep(std::size_t i) const { return reps_[i]; }

 private:
  long N_;
  std::vector<long> table_;
  std::vector<std::pair<long, long>> reps_;
};

using SparseVec = std::vector<std::pair<std::size_t, Rat>>;

// Modular symbols of weight 2 for Gamma0(N), presented by Manin symbols.
// Vectors are row vectors in the coordinates of the full space (boundary allowed).
class ModSymSpace {
 public:
  explicit ModSymSpace(long N);

  long level() const { return N_; }
  std::size_t dimension() const { return free_.size(); }
  const P1List& p1() const { return p1_; }

  // Coordinates of the Manin symbol (c:d) = g{0, oo} where g has bottom row (c, d).
  RatVector manin_symbol(const Int& c, const Int& d) const;
  RatVector path(const Cusp& a, const Cusp& b) const;
  // {0, oo}.
  RatVector winding() const;
  // sum_{b mod D} (-D/b) {-b/D, oo}.
  RatVector twisted_element(long D) const;

  const RatMatrix& boundary() const { return boundary_; }
  std::size_t num_cusps() const { return cusps_.size(); }
  const RatMatrix& star() const { return star_; }
  RatVector apply_star(const RatVector& x) const { return vec_mul(x, star_); }

  const Lattice& integral() const { return integral_; }
  const Lattice& cuspidal() const { return cuspidal_; }
  const Lattice& plus() const { return plus_; }
  const Lattice& minus() const { return minus_; }

  // T_p for p not dividing N (Heilbronn matrices) and U_p for p | N (coset action on paths).
  RatMatrix hecke(long p) const;
  // Coset-representative action sum_j [[1, j], [0, p]] (+ [[p, 0], [0, 1]] when p does not divide N).
  RatMatrix hecke_by_cosets(long p) const;
  // Projection of the full space onto cuspidal (x) Q along the Hecke-stable complement.
  const RatMatrix& cuspidal_projection() const;

  // Representative (c, d) of the i-th basis element.
  std::pair<long, long> basis_symbol(std::size_t i) const;

 private:
  void build_relations();
  void build_boundary();
  long cusp_class(const Int& num, const Int& den);
  RatVector path_from_infinity(const Int& num, const Int& den) const;
  void add_symbol(RatVector& acc, const Int& c, const Int& d, const Rat& scale) const;

  long N_;
  P1List p1_;
  std::vector<SparseVec> coords_;          // per P1 index
  std::vector<std::size_t> free_;          // P1 index of each basis element
  std::vector<std::pair<Int, Int>> cusps_; // class representatives
  RatMatrix boundary_;
  RatMatrix star_;
  Lattice integral_, cuspidal_, plus_, minus_;

  mutable std::mutex cache_mutex_;
  mutable std::map<long, RatMatrix> hecke_cache_;
  mutable RatMatrix cusp_proj_;
  mutable bool cusp_proj_ready_ = false;
};

// Cremona's Heilbronn matrices of determinant p, as (a, b, c, d).
std::vector<std::array<long, 4>> heilbronn_cremona(long p);

}  // namespace bsdtwist
