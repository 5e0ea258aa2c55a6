#include <deque>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/brandt.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/linalg.hpp"

namespace bsdtwist {

namespace {

Quaternion row_q(const RatMatrix& m, std::size_t i) { return {m(i, 0), m(i, 1), m(i, 2), m(i, 3)}; }

RatMatrix conj_rows(const RatMatrix& m) {
  RatMatrix c = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 1; j < 4; ++j) c(i, j) = -m(i, j);
  return c;
}

// x G x^T = nr(x B) / scale.
RatMatrix norm_gram(const QuaternionData& q, const RatMatrix& B, const Rat& scale) {
  RatMatrix G(B.rows(), B.rows());
  for (std::size_t s = 0; s < B.rows(); ++s)
    for (std::size_t t = s; t < B.rows(); ++t) {
      Rat v = q.mul(row_q(B, s), conj(row_q(B, t)))[0] / scale;
      G(s, t) = v;
      G(t, s) = v;
    }
  return G;
}

Rat abs_det(const RatMatrix& m) { return abs(determinant(m)); }

long count_norm_one(const RatMatrix& gram) {
  long c = 0;
  for (const auto& x : short_vectors(gram, Rat(1))) {
    Rat v = 0;
    for (std::size_t s = 0; s < x.size(); ++s)
      for (std::size_t t = 0; t < x.size(); ++t) v += gram(s, t) * x[s] * x[t];
    if (v == 1) ++c;
  }
  return c;
}

void check_order(const QuaternionData& q) {
  const RatMatrix& B = q.maximal_order_basis;
  Lattice L = Lattice::from_basis(B);
  if (!L.contains(RatVector{1, 0, 0, 0})) throw Error(Errc::Internal, "order does not contain 1");
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t t = 0; t < 4; ++t) {
      Quaternion p = q.mul(row_q(B, s), row_q(B, t));
      if (!L.contains(RatVector(p.begin(), p.end()))) throw Error(Errc::Internal, "basis is not closed under products");
    }
  if (determinant(q.gram) != Int(q.N) * q.N) throw Error(Errc::Internal, "order is not maximal");
}

RatMatrix rows4(std::initializer_list<std::array<Rat, 4>> rows) {
  RatMatrix m(rows.size(), 4);
  std::size_t i = 0;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = r[j];
    ++i;
  }
  return m;
}

}  // namespace

Quaternion QuaternionData::mul(const Quaternion& x, const Quaternion& y) const {
  Rat A(a), Bq(b);
  return {x[0] * y[0] - A * x[1] * y[1] - Bq * x[2] * y[2] - A * Bq * x[3] * y[3],
          x[0] * y[1] + x[1] * y[0] + Bq * (x[2] * y[3] - x[3] * y[2]),
          x[0] * y[2] + x[2] * y[0] + A * (x[3] * y[1] - x[1] * y[3]),
          x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

Rat QuaternionData::norm(const Quaternion& x) const {
  Rat A(a), Bq(b);
  return x[0] * x[0] + A * x[1] * x[1] + Bq * x[2] * x[2] + A * Bq * x[3] * x[3];
}

Quaternion conj(const Quaternion& x) { return {x[0], -x[1], -x[2], -x[3]}; }

QuaternionData build_quaternion(long N) {
  if (N < 2 || !is_prime(Int(N))) throw Error(Errc::NotPrime, "quaternion algebra needs a prime level");
  QuaternionData q;
  q.N = N;
  const Rat h(1, 2), f(1, 4);
  if (N == 2) {
    q.a = 1;
    q.b = 1;
    q.maximal_order_basis = rows4({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {h, h, h, h}});
  } else if (N % 4 == 3) {
    q.a = 1;
    q.b = N;
    q.maximal_order_basis = rows4({{1, 0, 0, 0}, {0, 1, 0, 0}, {h, 0, h, 0}, {0, h, 0, h}});
  } else if (N % 8 == 5) {
    q.a = 2;
    q.b = N;
    q.maximal_order_basis = rows4({{1, 0, 0, 0}, {h, 0, h, h}, {0, f, h, f}, {0, 0, 0, 1}});
  } else {
    long p = 3;
    while (p % 4 != 3 || kronecker(Int(N), Int(p)) != -1) p = next_prime(p);
    long c = 0;
    while ((c * c % p * (N % p) + 1) % p != 0) ++c;
    q.a = N;
    q.b = p;
    Rat ip(1, p), cp(c, p);
    q.maximal_order_basis = rows4({{h, 0, h, 0}, {0, h, 0, h}, {0, 0, ip, cp}, {0, 0, 0, 1}});
  }
  q.gram = to_int(norm_gram(q, q.maximal_order_basis, Rat(1, 2)));
  check_order(q);
  return q;
}

Lattice lattice_product(const QuaternionData& q, const RatMatrix& A, const RatMatrix& B) {
  RatMatrix gens(A.rows() * B.rows(), 4);
  for (std::size_t s = 0; s < A.rows(); ++s)
    for (std::size_t t = 0; t < B.rows(); ++t) {
      Quaternion p = q.mul(row_q(A, s), row_q(B, t));
      for (std::size_t j = 0; j < 4; ++j) gens(s * B.rows() + t, j) = p[j];
    }
  return Lattice::from_generators(gens);
}

RatMatrix pair_gram(const QuaternionData& q, const IdealClass& I, const IdealClass& J) {
  RatMatrix B = lattice_product(q, conj_rows(I.basis), J.basis).basis();
  RatMatrix G = norm_gram(q, B, I.norm * J.norm);
  RatMatrix U = to_rat(lll_reduce(G));
  return U * G * U.transpose();
}

IdealClassSet ideal_classes(const QuaternionData& q) {
  IdealClassSet out;
  out.algebra = q;
  const long ell = q.N == 2 ? 3 : 2;
  const Rat target = Rat(q.N - 1) / 12;

  auto make_class = [&](const RatMatrix& basis, const Rat& norm) {
    IdealClass c;
    c.basis = basis;
    c.norm = norm;
    c.right_order = lattice_product(q, conj_rows(basis), basis).scaled(1 / norm).basis();
    long units = count_norm_one(pair_gram(q, c, c));
    if (units % 2 != 0) throw Error(Errc::Internal, "odd unit count");
    c.weight = units / 2;
    return c;
  };

  out.classes.push_back(make_class(q.maximal_order_basis, Rat(1)));
  Rat mass = Rat(1, out.classes[0].weight);
  std::deque<std::size_t> queue{0};

  while (mass < target && !queue.empty()) {
    IdealClass I = out.classes[queue.front()];
    queue.pop_front();
    const RatMatrix& O = I.right_order;
    const Rat vol = abs_det(I.basis);
    std::vector<Lattice> seen;
    for (long code = 1; code < ell * ell * ell * ell; ++code) {
      Quaternion alpha{0, 0, 0, 0};
      for (long r = code, s = 0; s < 4; ++s, r /= ell)
        for (std::size_t j = 0; j < 4; ++j) alpha[j] += Rat(r % ell) * O(s, j);
      if (q.norm(alpha).get_num() % ell != 0) continue;
      RatMatrix gens(8, 4);
      for (std::size_t s = 0; s < 4; ++s) {
        Quaternion p = q.mul(row_q(I.basis, s), alpha);
        for (std::size_t j = 0; j < 4; ++j) {
          gens(s, j) = p[j];
          gens(s + 4, j) = ell * I.basis(s, j);
        }
      }
      Lattice J = Lattice::from_generators(gens);
      if (J.rank() != 4 || abs_det(J.basis()) != vol * ell * ell) continue;
      bool dup = false;
      for (const auto& L : seen) dup = dup || L == J;
      if (dup) continue;
      seen.push_back(J);

      IdealClass cand;
      cand.basis = J.basis();
      cand.norm = I.norm * ell;
      bool known = false;
      for (const auto& c : out.classes)
        if (count_norm_one(pair_gram(q, c, cand)) > 0) {
          known = true;
          break;
        }
      if (known) continue;
      IdealClass c = make_class(cand.basis, cand.norm);
      mass += Rat(1, c.weight);
      if (mass > target) throw Error(Errc::MassOverflow, "mass exceeds (N - 1)/12 at N = " + std::to_string(q.N));
      out.classes.push_back(std::move(c));
      queue.push_back(out.classes.size() - 1);
    }
  }
  if (mass != target) throw Error(Errc::Internal, "neighbour search ended below the mass");
  return out;
}

}  // namespace bsdtwist
