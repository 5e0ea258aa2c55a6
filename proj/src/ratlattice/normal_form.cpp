#include "bsdtwist/normal_form.hpp"

#include <algorithm>
#include <vector>

#include "bsdtwist/linalg.hpp"

namespace bsdtwist {
namespace {

// rows (r, i) <- [[s, t], [-b/g, a/g]] * rows (r, i) where g = s*a + t*b = gcd(a, b).
void gcd_combine(IntMatrix& a, std::size_t r, std::size_t i, std::size_t c, std::size_t from_col) {
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a(r, c).get_mpz_t(), a(i, c).get_mpz_t());
  Int x = a(r, c) / g, y = a(i, c) / g;
  for (std::size_t j = from_col; j < a.cols(); ++j) {
    Int u = a(r, j), v = a(i, j);
    a(r, j) = s * u + t * v;
    a(i, j) = x * v - y * u;
  }
}

void add_row_multiple(IntMatrix& a, std::size_t dst, std::size_t src, const Int& q, std::size_t from_col = 0) {
  if (q == 0) return;
  for (std::size_t j = from_col; j < a.cols(); ++j)
    if (a(src, j) != 0) a(dst, j) -= q * a(src, j);
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Works on [A | U] stacked side by side so the transform is tracked for free.
HermiteForm hermite_impl(const IntMatrix& a, bool want_u) {
  std::size_t m = a.rows(), n = a.cols();
  std::size_t width = n + (want_u ? m : 0);
  IntMatrix w(m, width);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) w(i, j) = a(i, j);
    if (want_u) w(i, n + i) = 1;
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    // Bring the smallest nonzero entry to row r, then clear below with gcd steps.
    std::size_t best = m;
    for (std::size_t i = r; i < m; ++i)
      if (w(i, c) != 0 && (best == m || abs(w(i, c)) < abs(w(best, c)))) best = i;
    if (best == m) continue;
    w.swap_rows(r, best);
    for (std::size_t i = r + 1; i < m; ++i) {
      if (w(i, c) == 0) continue;
      if (w(i, c) % w(r, c) == 0)
        add_row_multiple(w, i, r, w(i, c) / w(r, c), c);
      else
        gcd_combine(w, r, i, c, c);
    }
    if (w(r, c) < 0)
      for (std::size_t j = c; j < width; ++j) w(r, j) = -w(r, j);
    for (std::size_t i = 0; i < r; ++i) add_row_multiple(w, i, r, floor_div(w(i, c), w(r, c)), c);
    ++r;
  }
  HermiteForm out;
  out.H = w.cols_range(0, n);
  if (want_u) out.U = w.cols_range(n, width);
  out.rank = r;
  return out;
}

void swap_cols(IntMatrix& a, std::size_t x, std::size_t y) {
  if (x == y) return;
  for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, x), a(i, y));
}

using u64 = unsigned long long;

u64 mul_mod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }

u64 inv_mod(u64 a, u64 p) {
  u64 r = 1, e = p - 2;
  for (; e; e >>= 1, a = mul_mod(a, a, p))
    if (e & 1) r = mul_mod(r, a, p);
  return r;
}

// Indices of rows that are independent modulo a large prime (hence over Q), greedily.
std::vector<std::size_t> independent_rows_mod_p(const IntMatrix& a) {
  const u64 p = 2305843009213693951ULL;  // 2^61 - 1
  std::size_t n = a.cols();
  std::vector<std::vector<u64>> basis;  // reduced rows with pivots
  std::vector<std::size_t> pivots, chosen;
  Int P(static_cast<unsigned long>(p));
  for (std::size_t i = 0; i < a.rows() && chosen.size() < n; ++i) {
    std::vector<u64> v(n);
    for (std::size_t j = 0; j < n; ++j) {
      Int x = a(i, j) % P;
      if (x < 0) x += P;
      v[j] = x.get_ui();
    }
    for (std::size_t k = 0; k < basis.size(); ++k) {
      u64 f = v[pivots[k]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] = (v[j] + p - mul_mod(f, basis[k][j], p)) % p;
    }
    std::size_t piv = n;
    for (std::size_t j = 0; j < n; ++j)
      if (v[j] != 0) {
        piv = j;
        break;
      }
    if (piv == n) continue;
    u64 inv = inv_mod(v[piv], p);
    for (auto& x : v) x = mul_mod(x, inv, p);
    basis.push_back(std::move(v));
    pivots.push_back(piv);
    chosen.push_back(i);
  }
  return chosen;
}

Int mod_pos(const Int& x, const Int& R) {
  Int r = x % R;
  if (r < 0) r += R;
  return r;
}

// HNF of a full-column-rank lattice containing D * Z^n, working modulo D column by column.
IntMatrix hnf_modular(const IntMatrix& a, Int D) {
  std::size_t m = a.rows(), n = a.cols();
  IntMatrix w(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = mod_pos(a(i, j), D);
  IntMatrix h(n, n);
  Int R = D;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (w(i, c) == 0) continue;
      if (r == m) {
        r = i;
        continue;
      }
      gcd_combine(w, r, i, c, c);
      for (std::size_t j = c; j < n; ++j) {
        w(r, j) = mod_pos(w(r, j), R);
        w(i, j) = mod_pos(w(i, j), R);
      }
    }
    Int g, u, v;
    Int a0 = r == m ? Int(0) : Int(w(r, c));
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a0.get_mpz_t(), R.get_mpz_t());
    h(c, c) = g;
    if (r != m)
      for (std::size_t j = c + 1; j < n; ++j) h(c, j) = mod_pos(u * w(r, j), R);
    if (r != m)
      for (std::size_t j = c; j < n; ++j) w(r, j) = 0;
    R /= g;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = c + 1; j < n; ++j)
        if (w(i, j) != 0) w(i, j) = mod_pos(w(i, j), R);
  }
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < c; ++i) add_row_multiple(h, i, c, floor_div(h(i, c), h(c, c)), c);
  return h;
}

}  // namespace

HermiteForm hnf_with_transform(const IntMatrix& a) { return hermite_impl(a, true); }

IntMatrix hnf(const IntMatrix& a) {
  if (a.rows() > a.cols() && a.cols() > 0) {
    std::vector<std::size_t> rows = independent_rows_mod_p(a);
    if (rows.size() == a.cols()) {
      IntMatrix sub(rows.size(), a.cols());
      for (std::size_t i = 0; i < rows.size(); ++i) sub.set_row(i, a.row(rows[i]));
      Int D = abs(determinant(sub));
      if (D != 0) return hnf_modular(a, D);
    }
  }
  HermiteForm h = hermite_impl(a, false);
  return h.H.rows_range(0, h.rank);
}

IntMatrix integer_left_kernel(const IntMatrix& a) {
  HermiteForm h = hermite_impl(a, true);
  IntMatrix k = h.U.rows_range(h.rank, a.rows());
  if (k.rows() == 0) return IntMatrix(0, a.rows());
  return hnf(k);
}

SmithForm snf(const IntMatrix& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix s = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);
  // Column operations on s are mirrored on v; row operations on s are mirrored on u.
  auto row_op = [&](std::size_t dst, std::size_t src, const Int& q) {
    add_row_multiple(s, dst, src, q);
    add_row_multiple(u, dst, src, q);
  };
  auto col_op = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows; ++i) s(i, dst) -= q * s(i, src);
    for (std::size_t i = 0; i < cols; ++i) v(i, dst) -= q * v(i, src);
  };
  std::size_t limit = std::min(rows, cols);
  for (std::size_t t = 0; t < limit; ++t) {
    for (;;) {
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (s(i, j) != 0 && (bi == rows || abs(s(i, j)) < abs(s(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == rows) goto done;
      s.swap_rows(t, bi);
      u.swap_rows(t, bi);
      swap_cols(s, t, bj);
      swap_cols(v, t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        row_op(i, t, floor_div(s(i, t), s(t, t)));
        if (s(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        col_op(j, t, floor_div(s(t, j), s(t, t)));
        if (s(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Enforce divisibility: fold an offending row into row t and repeat.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (s(i, j) % s(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      row_op(t, bad, Int(-1));
    }
    if (s(t, t) < 0) {
      for (std::size_t j = 0; j < cols; ++j) s(t, j) = -s(t, j);
      for (std::size_t j = 0; j < rows; ++j) u(t, j) = -u(t, j);
    }
  }
done:
  return {s, u, v};
}

std::vector<Int> elementary_divisors(const IntMatrix& m) {
  SmithForm f = snf(m);
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
    if (f.S(i, i) != 0) d.push_back(f.S(i, i));
  return d;
}

}  // namespace bsdtwist
