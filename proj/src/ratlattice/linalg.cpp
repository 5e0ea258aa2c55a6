#include "bsdtwist/linalg.hpp"

#include "bsdtwist/error.hpp"

namespace bsdtwist {

RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

IntMatrix to_int(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw Error(Errc::Internal, "to_int: non-integral entry");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

Echelon echelon(const RatMatrix& m) {
  RatMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    Rat inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rat f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (a(r, j) != 0) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {a.rows_range(0, r), pivots};
}

std::size_t rank(const RatMatrix& m) { return echelon(m).pivots.size(); }

RatMatrix row_space(const RatMatrix& m) { return echelon(m).reduced; }

RatMatrix left_kernel(const RatMatrix& m) {
  // x*m = 0  <=>  m^T x^T = 0: right kernel of the transpose.
  Echelon e = echelon(m.transpose());
  std::size_t n = m.rows();
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  RatMatrix k(n - e.pivots.size(), n);
  std::size_t row = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    k(row, f) = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) k(row, e.pivots[i]) = -e.reduced(i, f);
    ++row;
  }
  return k;
}

RatMatrix solve_left(const RatMatrix& basis, const RatMatrix& vs) {
  // Solve X * basis = vs via echelon form of basis^T augmented with vs^T.
  std::size_t k = basis.rows(), n = basis.cols();
  RatMatrix aug(n, k + vs.rows());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) aug(j, i) = basis(i, j);
  for (std::size_t i = 0; i < vs.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) aug(j, k + i) = vs(i, j);
  Echelon e = echelon(aug);
  if (e.pivots.size() < k || (k > 0 && e.pivots[k - 1] != k - 1))
    throw Error(Errc::RankDeficient, "solve_left: basis rows are dependent");
  if (e.pivots.size() > k) throw Error(Errc::SpanMismatch, "solve_left: vector outside span");
  RatMatrix x(vs.rows(), k);
  for (std::size_t i = 0; i < vs.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) x(i, j) = e.reduced(j, k + i);
  return x;
}

RatVector solve_left(const RatMatrix& basis, const RatVector& v) {
  RatMatrix vs(1, v.size());
  vs.set_row(0, v);
  return solve_left(basis, vs).row(0);
}

Rat determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::Internal, "determinant of non-square matrix");
  RatMatrix a = m;
  std::size_t n = a.rows();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      a.swap_rows(p, c);
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rat f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::Internal, "determinant of non-square matrix");
  IntMatrix a = m;
  std::size_t n = a.rows();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

RatMatrix inverse(const RatMatrix& m) {
  std::size_t n = m.rows();
  if (n != m.cols()) throw Error(Errc::Internal, "inverse of non-square matrix");
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = echelon(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1)
    throw Error(Errc::RankDeficient, "inverse of singular matrix");
  return e.reduced.cols_range(n, 2 * n);
}

RatMatrix restrict_to(const RatMatrix& basis, const RatMatrix& op) {
  return solve_left(basis, basis * op);
}

IntMatrix clear_denominators(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  return r;
}

}  // namespace bsdtwist
