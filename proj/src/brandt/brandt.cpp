#include <algorithm>
#include <set>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/brandt.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/linalg.hpp"
#include "bsdtwist/poly.hpp"

namespace bsdtwist {

namespace {

Rat quad_value(const RatMatrix& G, const std::vector<long>& x) {
  Rat v = 0;
  for (std::size_t s = 0; s < x.size(); ++s)
    for (std::size_t t = 0; t < x.size(); ++t) v += G(s, t) * x[s] * x[t];
  return v;
}

Quaternion combine(const std::vector<long>& x, const RatMatrix& basis) {
  Quaternion r{0, 0, 0, 0};
  for (std::size_t s = 0; s < x.size(); ++s)
    for (std::size_t j = 0; j < 4; ++j) r[j] += Rat(x[s]) * basis(s, j);
  return r;
}

// Elements of the order with basis O of norm exactly n, via an LLL-reduced basis.
std::vector<Quaternion> elements_of_norm(const QuaternionData& q, const RatMatrix& O, const Rat& n) {
  RatMatrix G(4, 4);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t t = 0; t < 4; ++t)
      G(s, t) = q.mul({O(s, 0), O(s, 1), O(s, 2), O(s, 3)}, conj({O(t, 0), O(t, 1), O(t, 2), O(t, 3)}))[0];
  RatMatrix U = to_rat(lll_reduce(G));
  RatMatrix B = U * O, GB = U * G * U.transpose();
  std::vector<Quaternion> out;
  for (const auto& x : short_vectors(GB, n))
    if (quad_value(GB, x) == n) out.push_back(combine(x, B));
  return out;
}

void check_discriminant(long N, long D) {
  if (D <= 0 || !is_fundamental_discriminant(Int(-D)))
    throw Error(Errc::NotFundamental, "-" + std::to_string(D) + " is not a fundamental discriminant");
  if (gcd_long(D, N) != 1) throw Error(Errc::NotCoprime, "D must be prime to N");
}

long unit_index(long D) { return D == 3 ? 3 : D == 4 ? 2 : 1; }

QPoly minimal_polynomial(const RatMatrix& m) {
  QPoly c = charpoly(m);
  return poly_divrem(c, poly_gcd(c, derivative(c))).first;
}

}  // namespace

BrandtModule::BrandtModule(IdealClassSet classes) : classes_(std::move(classes)) {
  const std::size_t h = classes_.count();
  grams_.assign(h, std::vector<RatMatrix>(h));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      // I_j^{-1} I_i = conj(I_j) I_i / nr(I_j); the normalised norm form is the same.
      grams_[i][j] = j < i ? grams_[j][i] : pair_gram(classes_.algebra, classes_.classes[j], classes_.classes[i]);
    }
}

BrandtModule::BrandtModule(long N) : BrandtModule(bsdtwist::ideal_classes(build_quaternion(N))) {}

std::vector<long> BrandtModule::weights() const {
  std::vector<long> w;
  for (const auto& c : classes_.classes) w.push_back(c.weight);
  return w;
}

void BrandtModule::extend_theta(long bound) const {
  const std::size_t h = size();
  theta_.assign(h, std::vector<std::vector<long>>(h, std::vector<long>(bound + 1, 0)));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i; j < h; ++j) {
      auto& t = theta_[i][j];
      t[0] = 1;
      for (const auto& x : short_vectors(grams_[i][j], Rat(bound))) {
        Rat v = quad_value(grams_[i][j], x);
        if (v.get_den() != 1) throw Error(Errc::Internal, "non-integral normalised norm");
        ++t[v.get_num().get_si()];
      }
      theta_[j][i] = t;
    }
  theta_bound_ = bound;
}

IntMatrix BrandtModule::brandt_matrix(long m) const {
  if (m < 1) throw Error(Errc::ZeroInput, "Brandt matrices are indexed by m >= 1");
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(m);
  if (it != cache_.end()) return it->second;
  if (m > theta_bound_) extend_theta(std::max({m, 2 * theta_bound_, 16L}));
  const std::size_t h = size();
  IntMatrix B(h, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      long c = theta_[i][j][m], w = classes_.classes[j].weight;
      if (c % (2 * w) != 0) throw Error(Errc::Internal, "Brandt entry is not integral");
      B(i, j) = c / (2 * w);
    }
  return cache_.emplace(m, B).first->second;
}

RatVector BrandtModule::eisenstein() const {
  RatVector a;
  for (const auto& c : classes_.classes) a.push_back(Rat(1, c.weight));
  return a;
}

Rat BrandtModule::deg(const RatVector& v) {
  Rat s = 0;
  for (const auto& x : v) s += x;
  return s;
}

RatMatrix BrandtModule::degree_zero_basis() const {
  const std::size_t h = size();
  RatMatrix B(h - 1, h);
  for (std::size_t i = 1; i < h; ++i) {
    B(i - 1, 0) = -1;
    B(i - 1, i) = 1;
  }
  return B;
}

std::vector<long> embedding_numbers(const BrandtModule& m, long D) {
  const QuaternionData& q = m.ideal_classes().algebra;
  check_discriminant(q.N, D);
  const Rat t = D % 4 == 3 ? Rat(1) : Rat(0);
  const Rat n = D % 4 == 3 ? Rat(1 + D) / 4 : Rat(D) / 4;
  std::vector<long> h;
  for (const auto& c : m.ideal_classes().classes) {
    std::vector<Quaternion> units = elements_of_norm(q, c.right_order, Rat(1));
    std::set<Quaternion> pending;
    for (const auto& x : elements_of_norm(q, c.right_order, n))
      if (trace(x) == t) pending.insert(x);
    long orbits = 0;
    while (!pending.empty()) {
      Quaternion x = *pending.begin();
      for (const auto& u : units) pending.erase(q.mul(q.mul(u, x), conj(u)));
      ++orbits;
    }
    h.push_back(orbits);
  }
  return h;
}

GrossVector gross_vector(const BrandtModule& m, long D) {
  GrossVector g;
  g.D = D;
  g.embedding_numbers = embedding_numbers(m, D);
  const long u = unit_index(D);
  for (long h : g.embedding_numbers) g.chi.push_back(Rat(h) / (2 * u));
  const Rat scale = Rat(12) / (m.level() - 1) * BrandtModule::deg(g.chi);
  RatVector a = m.eisenstein();
  for (std::size_t i = 0; i < g.chi.size(); ++i) g.chi0.push_back(g.chi[i] - scale * a[i]);
  return g;
}

Rat brandt_index(const NewformFactor& f, const BrandtModule& m, long D) {
  const long N = m.level();
  if (f.level != N) throw Error(Errc::EigenvalueMismatch, "newform and Brandt module have different levels");
  const std::size_t h = m.size();
  const std::size_t d = static_cast<std::size_t>(f.dim);
  const std::vector<long> ells = primes_up_to(std::max(sturm_bound(N), 13L));

  // f-isotypic part: joint kernel of m_l(B(l)); the images span the complement.
  RatMatrix W = RatMatrix::identity(h), C(0, h);
  for (long l : ells) {
    if (N % l == 0) continue;
    QPoly mp;
    for (const auto& [ell, p] : f.annihilator)
      if (ell == l) mp = to_qpoly(p);
    if (mp.empty()) mp = minimal_polynomial(hecke_on(f, l));
    RatMatrix E = eval_matrix(mp, to_rat(m.brandt_matrix(l)));
    RatMatrix K = left_kernel(W * E);
    W = K * W;
    for (std::size_t r = 0; r < E.rows(); ++r) C.append_row(E.row(r));
  }
  C = row_space(C);
  if (W.rows() != d || C.rows() + d != h)
    throw Error(Errc::EigenvalueMismatch, "Brandt eigenspace has dimension " + std::to_string(W.rows()) +
                                              ", expected " + std::to_string(d));

  RatMatrix full = W;
  for (std::size_t r = 0; r < C.rows(); ++r) full.append_row(C.row(r));
  auto pi = [&](const RatMatrix& vs) { return solve_left(full, vs).cols_range(0, d); };

  GrossVector g = gross_vector(m, D);
  RatMatrix v(1, h);
  const Rat n(winding_multiple(N));
  for (std::size_t i = 0; i < h; ++i) v(0, i) = n * g.chi0[i];
  RatMatrix pv = pi(v);
  if (is_zero_vector(pv.row(0))) throw Error(Errc::ZeroVector, "pi(n chi0_D) vanishes");

  std::vector<RatMatrix> ops;
  for (long l : primes_up_to(sturm_bound(N))) ops.push_back(restrict_to(W, to_rat(m.brandt_matrix(l))));
  Lattice P0 = Lattice::from_generators(pi(m.degree_zero_basis()));
  Lattice orbit = closure_under(Lattice::from_generators(pv), ops);
  return lattice_index(P0, orbit);
}

}  // namespace bsdtwist
