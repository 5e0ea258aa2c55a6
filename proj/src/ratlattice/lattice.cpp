#include "bsdtwist/lattice.hpp"

#include "bsdtwist/error.hpp"
#include "bsdtwist/linalg.hpp"
#include "bsdtwist/normal_form.hpp"

namespace bsdtwist {
namespace {

Int common_denominator(const RatMatrix& m) {
  Int l = 1;
  for (const auto& x : m.data()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

}  // namespace

Lattice Lattice::from_generators(const RatMatrix& gens) {
  Lattice L;
  L.ambient_ = gens.cols();
  Int d = common_denominator(gens);
  IntMatrix scaled(gens.rows(), gens.cols());
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < gens.cols(); ++j) scaled(i, j) = Rat(gens(i, j) * d).get_num();
  IntMatrix h = hnf(scaled);
  L.basis_ = RatMatrix(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) {
      L.basis_(i, j) = Rat(h(i, j), d);
      L.basis_(i, j).canonicalize();
    }
  return L;
}

Lattice Lattice::from_basis(const RatMatrix& basis) {
  if (bsdtwist::rank(basis) != basis.rows()) throw Error(Errc::RankDeficient, "lattice basis rows are dependent");
  return from_generators(basis);
}

Lattice Lattice::standard(std::size_t n) { return from_generators(RatMatrix::identity(n)); }

RatMatrix Lattice::coordinates(const RatMatrix& vs) const { return solve_left(basis_, vs); }

bool Lattice::contains(const RatVector& v) const {
  RatVector x;
  try {
    x = solve_left(basis_, v);
  } catch (const Error& e) {
    if (e.code() == Errc::SpanMismatch) return false;
    throw;
  }
  for (const auto& c : x)
    if (c.get_den() != 1) return false;
  return true;
}

bool Lattice::contains(const Lattice& other) const {
  for (std::size_t i = 0; i < other.rank(); ++i)
    if (!contains(other.basis_.row(i))) return false;
  return true;
}

Lattice Lattice::image(const RatMatrix& op) const { return from_generators(basis_ * op); }

Lattice Lattice::kernel_of(const RatMatrix& op) const {
  RatMatrix m = basis_ * op;
  Int d = common_denominator(m);
  IntMatrix mi(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mi(i, j) = Rat(m(i, j) * d).get_num();
  IntMatrix k = integer_left_kernel(mi);
  if (k.rows() == 0) {
    Lattice z;
    z.ambient_ = ambient_;
    z.basis_ = RatMatrix(0, ambient_);
    return z;
  }
  return from_generators(to_rat(k) * basis_);
}

Lattice Lattice::scaled(const Rat& s) const { return from_generators(basis_.scaled(s)); }

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(Errc::SpanMismatch, "lattice_sum: ambient mismatch");
  RatMatrix g(a.rank() + b.rank(), a.ambient_dim());
  for (std::size_t i = 0; i < a.rank(); ++i) g.set_row(i, a.basis().row(i));
  for (std::size_t i = 0; i < b.rank(); ++i) g.set_row(a.rank() + i, b.basis().row(i));
  return Lattice::from_generators(g);
}

Rat lattice_index(const Lattice& L, const Lattice& M) {
  if (L.ambient_dim() != M.ambient_dim() || L.rank() != M.rank())
    throw Error(Errc::SpanMismatch, "lattice_index: spans differ");
  RatMatrix x;
  try {
    x = L.coordinates(M.basis());
  } catch (const Error& e) {
    throw Error(Errc::SpanMismatch, "lattice_index: spans differ");
  }
  Rat d = determinant(x);
  if (d == 0) throw Error(Errc::RankDeficient, "lattice_index: degenerate lattice");
  return abs(d);
}

Lattice saturate(const Lattice& L, const Lattice& ambient) {
  RatMatrix x;
  try {
    x = ambient.coordinates(L.basis());
  } catch (const Error&) {
    throw Error(Errc::SpanMismatch, "saturate: lattice not inside ambient span");
  }
  if (L.rank() == 0) return Lattice::from_generators(RatMatrix(0, ambient.ambient_dim()));
  // Integer vectors orthogonal to the kernel of x are exactly Z^r cut with the row space of x.
  IntMatrix y = clear_denominators(x);
  IntMatrix k = integer_left_kernel(y.transpose());
  IntMatrix sat;
  if (k.rows() == 0)
    sat = IntMatrix::identity(ambient.rank());
  else
    sat = integer_left_kernel(k.transpose());
  return Lattice::from_generators(to_rat(sat) * ambient.basis());
}

Lattice closure_under(const Lattice& gens, const std::vector<RatMatrix>& ops) {
  Lattice cur = gens;
  for (;;) {
    Lattice next = cur;
    for (const auto& op : ops) next = lattice_sum(next, cur.image(op));
    if (next == cur) return cur;
    cur = next;
  }
}

}  // namespace bsdtwist
