#include <cmath>

#include "bsdtwist/brandt.hpp"
#include "bsdtwist/error.hpp"

namespace bsdtwist {

namespace {

Int round_rat(const Rat& x) {
  Rat y = x + Rat(1, 2);
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return r;
}

// Gram-Schmidt data of a Gram matrix: mu (strictly lower) and squared lengths.
void gram_schmidt(const RatMatrix& G, RatMatrix& mu, RatVector& len) {
  const std::size_t n = G.rows();
  mu = RatMatrix(n, n);
  len.assign(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rat r = G(i, j);
      for (std::size_t k = 0; k < j; ++k) r -= mu(j, k) * mu(i, k) * len[k];
      mu(i, j) = r / len[j];
    }
    Rat b = G(i, i);
    for (std::size_t k = 0; k < i; ++k) b -= mu(i, k) * mu(i, k) * len[k];
    if (b <= 0) throw Error(Errc::Internal, "Gram matrix is not positive definite");
    len[i] = b;
  }
}

}  // namespace

IntMatrix lll_reduce(const RatMatrix& gram) {
  const std::size_t n = gram.rows();
  IntMatrix U = IntMatrix::identity(n);
  RatMatrix G = gram;
  auto refresh = [&] {
    RatMatrix Ur = to_rat(U);
    G = Ur * gram * Ur.transpose();
  };
  const Rat delta(3, 4);
  RatMatrix mu;
  RatVector len;
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t j = k; j-- > 0;) {
      gram_schmidt(G, mu, len);
      Int r = round_rat(mu(k, j));
      if (r == 0) continue;
      for (std::size_t c = 0; c < n; ++c) U(k, c) -= r * U(j, c);
      refresh();
    }
    gram_schmidt(G, mu, len);
    if (len[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * len[k - 1]) {
      U.swap_rows(k, k - 1);
      refresh();
      k = k > 1 ? k - 1 : 1;
    } else {
      ++k;
    }
  }
  return U;
}

std::vector<std::vector<long>> short_vectors(const RatMatrix& gram, const Rat& bound) {
  const std::size_t n = gram.rows();
  std::vector<std::vector<long>> out;
  if (n == 0 || bound <= 0) return out;

  // q(x) = sum_i Q_ii (x_i + sum_{j > i} Q_ij x_j)^2, computed exactly then rounded.
  RatMatrix Q = gram;
  for (std::size_t i = 0; i < n; ++i) {
    if (Q(i, i) <= 0) throw Error(Errc::Internal, "Gram matrix is not positive definite");
    for (std::size_t j = i + 1; j < n; ++j) {
      Q(j, i) = Q(i, j);
      Q(i, j) /= Q(i, i);
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) Q(k, l) -= Q(k, i) * Q(i, l);
  }
  std::vector<std::vector<double>> qd(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) qd[i][j] = Q(i, j).get_d();

  const double B = bound.get_d();
  const double eps = 1e-9 * (1.0 + B);
  std::vector<long> x(n, 0);
  std::vector<double> rem(n + 1, 0.0);

  auto exact_ok = [&] {
    Rat v = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (x[s] == 0) continue;
      Rat row = 0;
      for (std::size_t t = 0; t < n; ++t)
        if (x[t] != 0) row += gram(s, t) * x[t];
      v += row * x[s];
    }
    return v <= bound;
  };

  auto rec = [&](auto&& self, std::size_t i, double left) -> void {
    double c = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) c -= qd[i][j] * static_cast<double>(x[j]);
    double r = std::sqrt(std::max(0.0, left / qd[i][i])) + 1e-9;
    long lo = static_cast<long>(std::ceil(c - r)), hi = static_cast<long>(std::floor(c + r));
    for (long v = lo; v <= hi; ++v) {
      double t = static_cast<double>(v) - c;
      double next = left - qd[i][i] * t * t;
      if (next < -eps) continue;
      x[i] = v;
      if (i == 0) {
        bool zero = true;
        for (long e : x) zero = zero && e == 0;
        if (!zero && exact_ok()) out.push_back(x);
      } else {
        self(self, i - 1, next);
      }
    }
    x[i] = 0;
  };
  rec(rec, n - 1, B + eps);
  return out;
}

}  // namespace bsdtwist
