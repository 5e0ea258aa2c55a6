#include "bsdtwist/newform.hpp"

#include <algorithm>

#include "bsdtwist/arith.hpp"
#include "bsdtwist/error.hpp"
#include "bsdtwist/lattice.hpp"
#include "bsdtwist/linalg.hpp"

namespace bsdtwist {

namespace {

ZPoly integral_poly(const QPoly& p) {
  ZPoly z;
  for (const Rat& c : p) {
    if (c.get_den() != 1) throw Error(Errc::Internal, "Hecke polynomial is not integral");
    z.push_back(c.get_num());
  }
  return z;
}

ZPoly squarefree_part(const QPoly& p) {
  QPoly g = poly_gcd(p, derivative(p));
  return integral_poly(poly_divrem(p, g).first);
}

long multiplicative_beta(long m) {
  long r = 1;
  for (const auto& [p, e] : factor(Int(m))) {
    if (e == 1) r *= -2;
    else if (e >= 3) return 0;
  }
  return r;
}

struct Piece {
  RatMatrix plus;  // rows in plus-half coordinates
  std::vector<std::pair<long, QPoly>> path;  // the piece is the intersection of ker g(T_l)
  int degree = 0;
  int multiplicity = 0;  // 1 for new pieces
};

std::vector<long> primes_prime_to(long N, long bound) {
  std::vector<long> out;
  for (long l : primes_up_to(bound))
    if (N % l != 0) out.push_back(l);
  return out;
}

// Splits every piece that is not yet irreducible of multiplicity one by the factorisation of the
// charpoly of T_l on it.
void refine(std::vector<Piece>& pieces, long l, const RatMatrix& T) {
  std::vector<Piece> next;
  for (Piece& pc : pieces) {
    if (pc.multiplicity == 1) {
      next.push_back(std::move(pc));
      continue;
    }
    RatMatrix R = restrict_to(pc.plus, T);
    auto fac = factor_poly(integral_poly(charpoly(R)));
    if (fac.size() == 1) {
      pc.degree = degree(fac[0].first);
      pc.multiplicity = fac[0].second;
      next.push_back(std::move(pc));
      continue;
    }
    for (const auto& [g, e] : fac) {
      QPoly gq = to_qpoly(g);
      Piece sub;
      sub.plus = left_kernel(eval_matrix(gq, R)) * pc.plus;
      if (static_cast<long>(sub.plus.rows()) != degree(g) * e)
        throw Error(Errc::Internal, "Hecke operator is not semisimple on the cuspidal space");
      sub.path = pc.path;
      sub.path.emplace_back(l, gq);
      sub.degree = degree(g);
      sub.multiplicity = e;
      next.push_back(std::move(sub));
    }
  }
  pieces = std::move(next);
}

long new_found(const std::vector<Piece>& pieces) {
  long n = 0;
  for (const auto& pc : pieces)
    if (pc.multiplicity == 1) n += pc.degree;
  return n;
}

Rat trace_of(const ZPoly& charpoly_) {
  return charpoly_.size() < 2 ? Rat(0) : Rat(-charpoly_[charpoly_.size() - 2]);
}

RatMatrix star_on(const NewformFactor& f) { return restrict_to(f.subspace, f.space->star()); }

Lattice hecke_orbit(const NewformFactor& f, const RatVector& v) {
  RatMatrix gen(1, v.size());
  gen.set_row(0, v);
  Lattice L = Lattice::from_generators(gen);
  if (f.dim == 1) return L;
  std::vector<RatMatrix> ops;
  for (long l : primes_up_to(sturm_bound(f.level))) ops.push_back(hecke_on(f, l));
  return closure_under(L, ops);
}

Lattice saturated_plus(const NewformFactor& f) {
  Lattice image = Lattice::standard(f.proj.cols());
  RatMatrix s = star_on(f);
  return image.kernel_of(s - RatMatrix::identity(s.rows()));
}

}  // namespace

long dim_cusp_forms(long N) {
  if (N < 1) throw Error(Errc::ValidationError, "level must be positive");
  Int mu = N;
  long nu2 = N % 4 == 0 ? 0 : 1, nu3 = N % 9 == 0 ? 0 : 1;
  for (const Int& p : prime_divisors(Int(N))) {
    mu = mu / p * (p + 1);
    nu2 *= 1 + kronecker(Int(-4), p);
    nu3 *= 1 + kronecker(Int(-3), p);
  }
  long cusps = 0;
  for (long d : divisors(N)) cusps += euler_phi(gcd_long(d, N / d));
  // g = 1 + mu/12 - nu2/4 - nu3/3 - cusps/2
  Rat g = Rat(1) + Rat(mu, 12) - Rat(nu2, 4) - Rat(nu3, 3) - Rat(cusps, 2);
  g.canonicalize();
  return g.get_num().get_si();
}

long dim_new_cusp_forms(long N) {
  long total = 0;
  for (long M : divisors(N)) total += multiplicative_beta(N / M) * dim_cusp_forms(M);
  return total;
}

long sturm_bound(long N) {
  Int m = N;
  for (const Int& p : prime_divisors(Int(N))) m = m / p * (p + 1);
  Int b = (m + 5) / 6;
  return std::max(2L, b.get_si());
}

std::vector<NewformFactor> decompose(std::shared_ptr<const ModSymSpace> space) {
  const long N = space->level();
  std::vector<NewformFactor> out;
  if (space->cuspidal().rank() == 0) return out;

  const long new_dim = dim_new_cusp_forms(N);
  const RatMatrix& Cp = space->plus().basis();
  const RatMatrix& Cm = space->minus().basis();
  std::map<long, std::pair<RatMatrix, RatMatrix>> restricted;
  auto restricted_hecke = [&](long l) -> const std::pair<RatMatrix, RatMatrix>& {
    if (!restricted.count(l)) {
      const RatMatrix& T = space->hecke(l);
      restricted[l] = {restrict_to(Cp, T), restrict_to(Cm, T)};
    }
    return restricted[l];
  };

  std::vector<Piece> pieces(1);
  pieces[0].plus = RatMatrix::identity(Cp.rows());
  const long limit = sturm_bound(N) + 50;
  for (long l : primes_prime_to(N, limit)) {
    if (new_found(pieces) == new_dim) break;
    refine(pieces, l, restricted_hecke(l).first);
  }
  if (new_found(pieces) != new_dim)
    throw Error(Errc::Internal, "could not separate Hecke eigensystems at level " + std::to_string(N));

  // The minus half is cut out by the same polynomials.
  RatMatrix B;
  std::vector<std::size_t> offsets;
  std::vector<RatMatrix> bases;
  for (const Piece& pc : pieces) {
    RatMatrix Wm = RatMatrix::identity(Cm.rows());
    for (const auto& [l, g] : pc.path) Wm = left_kernel(eval_matrix(g, restrict_to(Wm, restricted_hecke(l).second))) * Wm;
    if (Wm.rows() != pc.plus.rows()) throw Error(Errc::Internal, "plus and minus pieces differ");
    RatMatrix W = pc.plus * Cp, Wmf = Wm * Cm;
    for (std::size_t i = 0; i < Wmf.rows(); ++i) W.append_row(Wmf.row(i));
    offsets.push_back(B.rows());
    for (std::size_t i = 0; i < W.rows(); ++i) B.append_row(W.row(i));
    bases.push_back(std::move(W));
  }
  RatMatrix proj_all = solve_left(B, space->cuspidal_projection());

  const std::vector<long> small = primes_up_to(13);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const Piece& pc = pieces[k];
    if (pc.multiplicity != 1) continue;
    NewformFactor f;
    f.level = N;
    f.dim = pc.degree;
    f.space = space;
    // Coordinates in which pi(H_1(X_0(N), Z)) is the standard lattice.
    RatMatrix proj = proj_all.cols_range(offsets[k], offsets[k] + bases[k].rows());
    RatMatrix L = space->cuspidal().image(proj).basis();
    f.proj = proj * inverse(L);
    f.subspace = L * bases[k];
    for (long l : small) {
      QPoly cp = charpoly(hecke_on(f, l));
      f.eigen_charpolys[l] = integral_poly(cp);
      f.annihilator.emplace_back(l, squarefree_part(cp));
    }
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const NewformFactor& a, const NewformFactor& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    for (const auto& [l, cp] : a.eigen_charpolys) {
      Rat ta = trace_of(cp), tb = trace_of(b.eigen_charpolys.at(l));
      if (ta != tb) return ta < tb;
    }
    return false;
  });
  return out;
}

std::vector<NewformFactor> decompose(long N) { return decompose(std::make_shared<const ModSymSpace>(N)); }

RatMatrix hecke_on(const NewformFactor& f, long ell) { return restrict_to(f.subspace, f.space->hecke(ell)); }

const NewformFactor& match_curve(const std::vector<NewformFactor>& factors, const EllipticCurve& E, long bound) {
  if (factors.empty()) throw Error(Errc::NoMatch, "no newform factors to match");
  const long N = factors.front().level;
  if (conductor(E) != N) throw Error(Errc::NoMatch, E.to_string() + " does not have conductor " + std::to_string(N));
  std::vector<const NewformFactor*> candidates;
  for (const auto& f : factors)
    if (f.dim == 1) candidates.push_back(&f);
  // Start with the requested bound and extend it while several factors still agree.
  std::vector<long> checked;
  for (long b = bound;; b = std::max(b * 2, b + 10)) {
    for (long l : primes_prime_to(N, b)) {
      if (std::find(checked.begin(), checked.end(), l) != checked.end()) continue;
      checked.push_back(l);
      Int a = ap(E, l);
      ZPoly expect{a * a, -2 * a, Int(1)};  // (x - a)^2
      std::vector<const NewformFactor*> keep;
      for (const NewformFactor* f : candidates) {
        auto it = f->eigen_charpolys.find(l);
        ZPoly got = it != f->eigen_charpolys.end() ? it->second : integral_poly(charpoly(hecke_on(*f, l)));
        if (got == expect) keep.push_back(f);
      }
      candidates = std::move(keep);
    }
    if (candidates.empty()) throw Error(Errc::NoMatch, "no factor matches " + E.to_string());
    if (candidates.size() == 1) return *candidates.front();
    if (b > sturm_bound(N) + 50) throw Error(Errc::NoMatch, "factors not separated by a_l for l <= " + std::to_string(b));
  }
}

LRatio lratio_plus(const NewformFactor& f) {
  if (!is_prime(Int(f.level))) throw Error(Errc::NotPrimeLevel, "normalized winding path needs prime level");
  RatVector e = vec_mul(f.space->winding(), f.proj);
  if (is_zero_vector(e)) return {Rat(0), false};
  Int n = winding_multiple(f.level);
  for (auto& x : e) x *= n;
  Rat value = lattice_index(saturated_plus(f), hecke_orbit(f, e));
  Int nd = 1;
  for (int i = 0; i < f.dim; ++i) nd *= n;
  value /= nd;
  return {value, false};
}

LRatio lratio_plus_general(const NewformFactor& f) {
  RatVector e = vec_mul(f.space->winding(), f.proj);
  if (is_zero_vector(e)) return {Rat(0), false};
  return {lattice_index(saturated_plus(f), hecke_orbit(f, e)), false};
}

LRatio twisted_index(const NewformFactor& f, long D) {
  if (D <= 0 || !is_fundamental_discriminant(Int(-D)))
    throw Error(Errc::NotFundamental, std::to_string(-D) + " is not a negative fundamental discriminant");
  if (gcd_long(D, f.level) != 1) throw Error(Errc::NotCoprime, "D must be prime to the level");
  RatVector e = vec_mul(f.space->twisted_element(D), f.proj);
  if (is_zero_vector(e)) throw Error(Errc::ZeroTwist, "pi(e_D) vanishes for D = " + std::to_string(D));
  Lattice minus = f.space->minus().image(f.proj);
  return {lattice_index(minus, hecke_orbit(f, e)), true};
}

std::vector<Congruence> eigenform_congruences(const std::vector<NewformFactor>& factors, long q) {
  std::vector<Congruence> out;
  if (factors.size() < 2) return out;
  const long N = factors.front().level;
  std::vector<long> ells = primes_up_to(sturm_bound(N));
  std::vector<std::map<long, ZPoly>> minpolys(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (const auto& [l, m] : factors[i].annihilator) minpolys[i][l] = m;
    for (long l : ells)
      if (!minpolys[i].count(l)) minpolys[i][l] = squarefree_part(charpoly(hecke_on(factors[i], l)));
  }
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      bool all = true;
      for (long l : ells)
        if (resultant(minpolys[i][l], minpolys[j][l]) % q != 0) {
          all = false;
          break;
        }
      if (all) out.push_back({i, j, q});
    }
  return out;
}

std::optional<long> hypothesis_star_search(const NewformFactor& f, long q, long Dmax) {
  for (long D = 3; D <= Dmax; ++D) {
    if (!is_fundamental_discriminant(Int(-D)) || gcd_long(D, f.level) != 1) continue;
    try {
      if (valuation(twisted_index(f, D).value, Int(q)) == 0) return D;
    } catch (const Error& e) {
      if (e.code() != Errc::ZeroTwist) throw;
    }
  }
  return std::nullopt;
}

}  // namespace bsdtwist
