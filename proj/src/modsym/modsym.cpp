#include "bsdtwist/modsym.hpp"

#include <numeric>
#include <optional>
#include <random>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/linalg.hpp"
#include "bsdtwist/poly.hpp"

namespace bsdtwist {
namespace {

long mod(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

long mod(const Int& a, long n) { return static_cast<long>(mpz_fdiv_ui(a.get_mpz_t(), n)); }

// Integer lift (c', d') of (c, d) mod N with gcd(c', d') = 1.
std::pair<Int, Int> coprime_lift(long c, long d, long N) {
  if (N == 1) return {Int(0), Int(1)};
  if (c == 0) return {Int(N), Int(d)};
  Int C(c), D(d);
  for (;;) {
    Int g;
    mpz_gcd(g.get_mpz_t(), C.get_mpz_t(), D.get_mpz_t());
    if (g == 1) return {C, D};
    D += N;
  }
}

}  // namespace

P1List::P1List(long N) : N_(N), table_(N * N, -1) {
  std::vector<long> units;
  for (long u = 1; u <= N; ++u)
    if (std::gcd(u, N) == 1) units.push_back(u % N);
  for (long c = 0; c < N; ++c)
    for (long d = 0; d < N; ++d) {
      if (std::gcd(std::gcd(c, d), N) != 1 || table_[c * N + d] >= 0) continue;
      long k = static_cast<long>(reps_.size());
      reps_.emplace_back(c, d);
      for (long u : units) table_[(u * c % N) * N + (u * d % N)] = k;
    }
}

long P1List::index(long c, long d) const { return table_[mod(c, N_) * N_ + mod(d, N_)]; }

long P1List::index(const Int& c, const Int& d) const { return table_[mod(c, N_) * N_ + mod(d, N_)]; }

std::vector<std::array<long, 4>> heilbronn_cremona(long p) {
  if (p == 2) return {{1, 0, 0, 2}, {2, 0, 0, 1}, {2, 1, 0, 1}, {1, 0, 1, 2}};
  std::vector<std::array<long, 4>> out{{1, 0, 0, p}};
  for (long r = -p / 2; r <= p / 2; ++r) {
    long x1 = p, x2 = -r, y1 = 0, y2 = 1, a = -p, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      // q = a/b rounded to nearest, halves away from zero.
      long q = (2 * std::labs(a) + std::labs(b)) / (2 * std::labs(b));
      if ((a < 0) != (b < 0)) q = -q;
      long c = a - b * q;
      a = -b;
      b = c;
      long x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      long y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

ModSymSpace::ModSymSpace(long N) : N_(N), p1_(N) {
  if (N < 1) throw Error(Errc::ZeroInput, "level must be positive");
  build_relations();
  build_boundary();

  std::size_t n = dimension();
  star_ = RatMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [c, d] = p1_.rep(free_[i]);
    star_.set_row(i, manin_symbol(Int(-c), Int(d)));
  }

  RatMatrix gens(p1_.size(), n);
  for (std::size_t k = 0; k < p1_.size(); ++k)
    for (const auto& [j, v] : coords_[k]) gens(k, j) = v;
  integral_ = Lattice::from_generators(gens);
  cuspidal_ = integral_.kernel_of(boundary_);
  RatMatrix id = RatMatrix::identity(n);
  plus_ = cuspidal_.kernel_of(star_ - id);
  minus_ = cuspidal_.kernel_of(star_ + id);
}

void ModSymSpace::build_relations() {
  std::size_t mu = p1_.size();
  // Two-term relations x + xS = 0 with (c:d)S = (d:-c).
  std::vector<long> var_of(mu, -1);
  std::vector<int> sign(mu, 0);
  std::vector<std::size_t> var_symbol;
  for (std::size_t i = 0; i < mu; ++i) {
    if (sign[i] != 0 || var_of[i] == -2) continue;
    auto [c, d] = p1_.rep(i);
    std::size_t j = p1_.index(d, -c);
    if (j == i) {
      var_of[i] = -2;  // 2x = 0
      continue;
    }
    long v = static_cast<long>(var_symbol.size());
    var_symbol.push_back(i);
    var_of[i] = v;
    sign[i] = 1;
    var_of[j] = v;
    sign[j] = -1;
  }
  std::size_t nvars = var_symbol.size();

  // Three-term relations x + xT + xT^2 = 0 with (c:d)T = (d:-c-d), eliminated sparsely.
  std::vector<std::optional<std::map<std::size_t, Rat>>> expr(nvars);
  std::vector<bool> seen(mu, false);
  for (std::size_t i = 0; i < mu; ++i) {
    if (seen[i]) continue;
    std::size_t orbit[3];
    orbit[0] = i;
    for (int k = 1; k < 3; ++k) {
      auto [c, d] = p1_.rep(orbit[k - 1]);
      orbit[k] = p1_.index(d, -c - d);
    }
    std::map<std::size_t, Rat> rel;
    for (std::size_t s : orbit) {
      seen[s] = true;
      if (var_of[s] < 0) continue;
      rel[var_of[s]] += sign[s];
    }
    std::map<std::size_t, Rat> red;
    for (const auto& [v, c] : rel) {
      if (c == 0) continue;
      if (expr[v]) {
        for (const auto& [w, e] : *expr[v]) red[w] += c * e;
      } else {
        red[v] += c;
      }
    }
    for (auto it = red.begin(); it != red.end();) it = it->second == 0 ? red.erase(it) : std::next(it);
    if (red.empty()) continue;
    // Prefer a pivot with unit coefficient to keep expressions integral.
    std::size_t p = red.rbegin()->first;
    for (auto it = red.rbegin(); it != red.rend(); ++it)
      if (abs(it->second) == 1) {
        p = it->first;
        break;
      }
    Rat cp = red[p];
    std::map<std::size_t, Rat> e;
    for (const auto& [w, c] : red)
      if (w != p) e[w] = -c / cp;
    for (std::size_t v = 0; v < nvars; ++v) {
      if (!expr[v]) continue;
      auto f = expr[v]->find(p);
      if (f == expr[v]->end()) continue;
      Rat coef = f->second;
      expr[v]->erase(f);
      for (const auto& [w, c] : e) {
        Rat& slot = (*expr[v])[w];
        slot += coef * c;
        if (slot == 0) expr[v]->erase(w);
      }
    }
    expr[p] = e;
  }

  std::vector<long> free_index(nvars, -1);
  for (std::size_t v = 0; v < nvars; ++v)
    if (!expr[v]) {
      free_index[v] = static_cast<long>(free_.size());
      free_.push_back(var_symbol[v]);
    }
  coords_.assign(mu, {});
  for (std::size_t i = 0; i < mu; ++i) {
    if (var_of[i] < 0) continue;
    std::size_t v = var_of[i];
    if (!expr[v]) {
      coords_[i].emplace_back(free_index[v], Rat(sign[i]));
    } else {
      for (const auto& [w, c] : *expr[v]) coords_[i].emplace_back(free_index[w], c * sign[i]);
    }
  }
}

long ModSymSpace::cusp_class(const Int& num_in, const Int& den_in) {
  Int num = num_in, den = den_in;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (den == 0) num = 1;
  // s * num = 1 mod den; for den in {0, 1} any s works and s = 1 is used.
  auto s_of = [](const Int& a, const Int& q) {
    if (q <= 1) return Int(1);
    Int s;
    mpz_invert(s.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
    return s;
  };
  Int s1 = s_of(num, den);
  for (std::size_t k = 0; k < cusps_.size(); ++k) {
    const auto& [n2, d2] = cusps_[k];
    Int s2 = s_of(n2, d2);
    Int g, prod = den * d2;
    Int NN(N_);
    mpz_gcd(g.get_mpz_t(), prod.get_mpz_t(), NN.get_mpz_t());
    Int diff = s1 * d2 - s2 * den;
    if (mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t())) return static_cast<long>(k);
  }
  cusps_.emplace_back(num, den);
  return static_cast<long>(cusps_.size()) - 1;
}

void ModSymSpace::build_boundary() {
  std::size_t n = dimension();
  cusp_class(Int(1), Int(0));
  std::vector<std::pair<long, long>> rows;  // (cusp of g(oo), cusp of g(0)) per basis element
  for (std::size_t i = 0; i < n; ++i) {
    auto [c, d] = p1_.rep(free_[i]);
    auto [C, D] = coprime_lift(c, d, N_);
    Int g, a, b;
    mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), D.get_mpz_t(), C.get_mpz_t());
    b = -b;  // a*D - b*C = 1
    // g{0, oo} = {b/D, a/C}; boundary = [a/C] - [b/D].
    long to = cusp_class(a, C);
    long from = cusp_class(b, D);
    rows.emplace_back(to, from);
  }
  boundary_ = RatMatrix(n, cusps_.size());
  for (std::size_t i = 0; i < n; ++i) {
    boundary_(i, rows[i].first) += 1;
    boundary_(i, rows[i].second) -= 1;
  }
}

std::pair<long, long> ModSymSpace::basis_symbol(std::size_t i) const { return p1_.rep(free_[i]); }

void ModSymSpace::add_symbol(RatVector& acc, const Int& c, const Int& d, const Rat& scale) const {
  long k = p1_.index(c, d);
  if (k < 0) throw Error(Errc::Internal, "symbol outside P1");
  for (const auto& [j, v] : coords_[k]) acc[j] += scale * v;
}

RatVector ModSymSpace::manin_symbol(const Int& c, const Int& d) const {
  RatVector v(dimension());
  add_symbol(v, c, d, Rat(1));
  return v;
}

RatVector ModSymSpace::path_from_infinity(const Int& num_in, const Int& den_in) const {
  RatVector acc(dimension());
  Int num = num_in, den = den_in;
  if (den == 0) return acc;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  // Convergents p_k/q_k of num/den starting from p_{-1}/q_{-1} = 1/0.
  Int p_prev = 1, q_prev = 0, p_cur, q_cur;
  Int a = num, b = den;
  Int pp = 0, qq = 1;  // p_{-2}/q_{-2}
  while (b != 0) {
    Int t;
    mpz_fdiv_q(t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    p_cur = t * p_prev + pp;
    q_cur = t * q_prev + qq;
    Int s = p_cur * q_prev - p_prev * q_cur;  // +-1
    add_symbol(acc, s * q_cur, q_prev, Rat(1));
    pp = p_prev;
    qq = q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    Int r = a - t * b;
    a = b;
    b = r;
  }
  return acc;
}

RatVector ModSymSpace::path(const Cusp& a, const Cusp& b) const {
  RatVector x = path_from_infinity(b.num, b.den);
  RatVector y = path_from_infinity(a.num, a.den);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  return x;
}

RatVector ModSymSpace::winding() const { return path(Cusp{Int(0), Int(1)}, Cusp::infinity()); }

RatVector ModSymSpace::twisted_element(long D) const {
  if (!is_fundamental_discriminant(Int(-D))) throw Error(Errc::NotFundamental, "twisted_element");
  if (std::gcd(D, N_) != 1) throw Error(Errc::NotCoprime, "twisted_element");
  RatVector acc(dimension());
  for (long b = 0; b < D; ++b) {
    int eps = kronecker(Int(-D), Int(b));
    if (eps == 0) continue;
    RatVector p = path(Cusp{Int(-b), Int(D)}, Cusp::infinity());
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += eps * p[i];
  }
  return acc;
}

RatMatrix ModSymSpace::hecke_by_cosets(long p) const {
  if (!is_prime(Int(p))) throw Error(Errc::NotPrime, "hecke_by_cosets");
  std::vector<std::array<long, 4>> mats;
  for (long j = 0; j < p; ++j) mats.push_back({1, j, 0, p});
  if (N_ % p != 0) mats.push_back({p, 0, 0, 1});
  std::size_t n = dimension();
  RatMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [c, d] = p1_.rep(free_[i]);
    auto [C, D] = coprime_lift(c, d, N_);
    Int g, a, b;
    mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), D.get_mpz_t(), C.get_mpz_t());
    b = -b;
    RatVector acc(n);
    for (const auto& m : mats) {
      // M acting on the endpoints b/D and a/C.
      Cusp from{m[0] * b + m[1] * D, m[2] * b + m[3] * D};
      Cusp to{m[0] * a + m[1] * C, m[2] * a + m[3] * C};
      RatVector v = path(from, to);
      for (std::size_t k = 0; k < n; ++k) acc[k] += v[k];
    }
    t.set_row(i, acc);
  }
  return t;
}

RatMatrix ModSymSpace::hecke(long p) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = hecke_cache_.find(p);
    if (it != hecke_cache_.end()) return it->second;
  }
  if (!is_prime(Int(p))) throw Error(Errc::NotPrime, "hecke");
  RatMatrix t;
  if (N_ % p == 0) {
    t = hecke_by_cosets(p);
  } else {
    auto hs = heilbronn_cremona(p);
    std::size_t n = dimension();
    t = RatMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [u, v] = p1_.rep(free_[i]);
      RatVector acc(n);
      for (const auto& h : hs) {
        long c = u * h[0] + v * h[2], d = u * h[1] + v * h[3];
        if (p1_.index(c, d) < 0) continue;
        add_symbol(acc, Int(c), Int(d), Rat(1));
      }
      t.set_row(i, acc);
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  hecke_cache_.emplace(p, t);
  return t;
}

const RatMatrix& ModSymSpace::cuspidal_projection() const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (cusp_proj_ready_) return cusp_proj_;
  }
  std::size_t n = dimension();
  const RatMatrix& C = cuspidal_.basis();
  RatMatrix proj;
  bool done = true;
  if (C.rows() == n) {
    proj = RatMatrix::identity(n);
  } else if (C.rows() == 0) {
    proj = RatMatrix(n, n);
  } else {
    done = false;
    // T_l acts on the Eisenstein part as 1 + l, which never occurs on cusp forms.
    long l0 = 2;
    while (N_ % l0 == 0) l0 = next_prime(l0);
    RatMatrix E0 = left_kernel(hecke(l0) - RatMatrix::identity(n).scaled(Rat(l0 + 1)));
    if (E0.rows() + C.rows() == n) {
      RatMatrix Q(n, n);
      for (std::size_t i = 0; i < C.rows(); ++i) Q.set_row(i, C.row(i));
      for (std::size_t i = 0; i < E0.rows(); ++i) Q.set_row(C.rows() + i, E0.row(i));
      if (rank(Q) == n) {
        proj = inverse(Q).cols_range(0, C.rows()) * C;
        done = true;
      }
    }
  }
  if (!done) {
    // Eisenstein complement = kernel of q(T) for a generic Hecke combination T,
    // where q is the part of the full charpoly coprime to the cuspidal one.
    std::vector<long> ells;
    for (long l : primes_up_to(50))
      if (N_ % l != 0) ells.push_back(l);
    std::mt19937 rng(2024);
    for (int attempt = 0;; ++attempt) {
      RatMatrix T(n, n);
      for (std::size_t k = 0; k < ells.size() && k < 4; ++k) {
        long coef = attempt == 0 ? (k == 0 ? 1 : 0) : std::uniform_int_distribution<long>(-5, 5)(rng);
        if (coef != 0) T = T + hecke(ells[k]).scaled(Rat(coef));
      }
      QPoly full = charpoly(T);
      QPoly cusp = charpoly(restrict_to(C, T));
      QPoly eis = poly_divrem(full, cusp).first;
      if (degree(poly_gcd(eis, cusp)) > 0) continue;
      RatMatrix E = left_kernel(eval_matrix(eis, T));
      if (E.rows() + C.rows() != n) continue;
      RatMatrix Q(n, n);
      for (std::size_t i = 0; i < C.rows(); ++i) Q.set_row(i, C.row(i));
      for (std::size_t i = 0; i < E.rows(); ++i) Q.set_row(C.rows() + i, E.row(i));
      RatMatrix qi = inverse(Q);
      proj = qi.cols_range(0, C.rows()) * C;
      break;
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  cusp_proj_ = proj;
  cusp_proj_ready_ = true;
  return cusp_proj_;
}

}  // namespace bsdtwist
