#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bsdtwist/elliptic.hpp"
#include "bsdtwist/modsym.hpp"
#include "bsdtwist/poly.hpp"

namespace bsdtwist {

// A Q-irreducible Hecke factor of the new cuspidal subspace: a Galois orbit of
// newforms f, realised as the f-isotypic piece V_f of cuspidal (x) Q.
struct NewformFactor {
  long level = 0;
  int dim = 0;  // d; V_f has dimension 2d
  // Minimal polynomial of T_l on V_f.
  std::vector<std::pair<long, ZPoly>> annihilator;
  // pi: full space -> V_f, as an (ambient dim) x 2d matrix acting on row vectors.
  RatMatrix proj;
  // Basis of V_f inside the full space; pi is the identity on these rows.
  RatMatrix subspace;
  std::map<long, ZPoly> eigen_charpolys;
  std::shared_ptr<const ModSymSpace> space;
};

struct LRatio {
  Rat value;
  bool two_ambiguity = false;
};

long dim_cusp_forms(long N);
long dim_new_cusp_forms(long N);
long sturm_bound(long N);

// New factors, sorted by dimension and then by the traces of T_2, T_3, ...
std::vector<NewformFactor> decompose(std::shared_ptr<const ModSymSpace> space);
std::vector<NewformFactor> decompose(long N);

// T_l (U_l when l | N) acting on V_f in the basis f.subspace.
RatMatrix hecke_on(const NewformFactor& f, long ell);

// Matches a_l(E) against T_l for l not dividing N, starting from l <= bound and extending the
// bound while more than one factor agrees.
const NewformFactor& match_curve(const std::vector<NewformFactor>& factors, const EllipticCurve& E,
                                 long bound = 13);

// L(A_f, 1) / Omega^+ as [pi(H_1)^+ : pi(T n e)] / n^d with n = numerator((N - 1) / 12).
// Prime level only (NotPrimeLevel otherwise).
LRatio lratio_plus(const NewformFactor& f);
// Same quantity for any level, using the rational winding element directly.
LRatio lratio_plus_general(const NewformFactor& f);

// [pi(H^-) : pi(T e_D)], which is L(A_{f (x) eps_D}, 1) / (Omega^- / (-D)^{d/2}) up to a power of 2.
LRatio twisted_index(const NewformFactor& f, long D);

struct Congruence {
  std::size_t first;
  std::size_t second;
  long q;
};

// Pairs whose Hecke eigenvalues agree modulo a prime above q for every l up to the Sturm bound.
std::vector<Congruence> eigenform_congruences(const std::vector<NewformFactor>& factors, long q);

// Smallest D <= Dmax with -D fundamental, gcd(D, N) = 1, pi(e_D) != 0 and q not dividing
// twisted_index(f, D).
std::optional<long> hypothesis_star_search(const NewformFactor& f, long q, long Dmax);

}  // namespace bsdtwist
