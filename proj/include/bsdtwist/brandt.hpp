#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "bsdtwist/lattice.hpp"
#include "bsdtwist/matrix.hpp"
#include "bsdtwist/newform.hpp"

namespace bsdtwist {

// x0 + x1 i + x2 j + x3 k.
using Quaternion = std::array<Rat, 4>;

// The definite algebra (-a, -b | Q) ramified at N and infinity: i^2 = -a, j^2 = -b, k = ij.
struct QuaternionData {
  long N = 0;
  Int a;
  Int b;
  // Z-basis of a maximal order, rows in the basis 1, i, j, k.
  RatMatrix maximal_order_basis;
  // trd(x conj(y)) on maximal_order_basis; determinant N^2.
  IntMatrix gram;

  Quaternion mul(const Quaternion& x, const Quaternion& y) const;
  Rat norm(const Quaternion& x) const;
};

Quaternion conj(const Quaternion& x);
inline Rat trace(const Quaternion& x) { return 2 * x[0]; }

QuaternionData build_quaternion(long N);

// Lattice of products x*y, x in the rows of A and y in the rows of B.
Lattice lattice_product(const QuaternionData& q, const RatMatrix& A, const RatMatrix& B);

// Rows of the returned unimodular U make U * basis LLL-reduced (delta = 3/4) for the given Gram matrix.
IntMatrix lll_reduce(const RatMatrix& gram);

// All nonzero x in Z^n with x G x^T <= bound, both signs included. G positive definite.
std::vector<std::vector<long>> short_vectors(const RatMatrix& gram, const Rat& bound);

struct IdealClass {
  RatMatrix basis;  // left ideal of the base order R_0
  Rat norm;
  RatMatrix right_order;
  long weight = 0;  // |O_R(I)^*| / 2
};

struct IdealClassSet {
  QuaternionData algebra;
  std::vector<IdealClass> classes;  // classes[0] is R_0 itself
  std::size_t count() const { return classes.size(); }
};

// Left ideal classes of the maximal order by 2-neighbours (3-neighbours when N = 2), stopping
// when the mass sum 1/w_i reaches (N - 1)/12.
IdealClassSet ideal_classes(const QuaternionData& q);

// Gram matrix of x -> nr(x) / (nr(I) nr(J)) on conj(I) J, LLL-reduced.
RatMatrix pair_gram(const QuaternionData& q, const IdealClass& I, const IdealClass& J);

// Vectors e_0..e_g indexed by the ideal classes; the Hecke algebra acts on row vectors v -> v B(m).
class BrandtModule {
 public:
  explicit BrandtModule(IdealClassSet classes);
  explicit BrandtModule(long N);

  long level() const { return classes_.algebra.N; }
  std::size_t size() const { return classes_.count(); }
  const IdealClassSet& ideal_classes() const { return classes_; }
  std::vector<long> weights() const;

  // B(m)_{ij} = #{x in I_j^{-1} I_i : nr(x) / nr(I_j^{-1} I_i) = m} / (2 w_j).
  IntMatrix brandt_matrix(long m) const;

  // a_E, with i-th coordinate 1/w_i.
  RatVector eisenstein() const;
  static Rat deg(const RatVector& v);
  // Rows e_i - e_0, a basis of the degree-zero divisors.
  RatMatrix degree_zero_basis() const;

 private:
  void extend_theta(long bound) const;

  IdealClassSet classes_;
  std::vector<std::vector<RatMatrix>> grams_;
  mutable std::mutex mu_;
  mutable long theta_bound_ = 0;
  // theta_[i][j][m] = #{x : nr(x) / nr(I_j^{-1} I_i) = m}
  mutable std::vector<std::vector<std::vector<long>>> theta_;
  mutable std::map<long, IntMatrix> cache_;
};

// h_i(-D): embeddings of the maximal order of Q(sqrt(-D)) into O_R(I_i) modulo O_R(I_i)^*.
std::vector<long> embedding_numbers(const BrandtModule& m, long D);

struct GrossVector {
  long D = 0;
  RatVector chi;
  RatVector chi0;
  std::vector<long> embedding_numbers;
};

// chi_D = sum h_i [E_i] / (2 u(-D)) and chi0_D = chi_D - (12/(N-1)) deg(chi_D) a_E.
GrossVector gross_vector(const BrandtModule& m, long D);

// [pi(P^0) : pi(T n chi0_D)] where pi is the f-isotypic projection on the Brandt module.
Rat brandt_index(const NewformFactor& f, const BrandtModule& m, long D);

}  // namespace bsdtwist
