#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "bsdtwist/matrix.hpp"

namespace bsdtwist {

int kronecker(const Int& a, const Int& n);
bool is_fundamental_discriminant(const Int& d);

struct ClassNumber {
  long h;
  long u;  // order of the unit group modulo +-1
};
// Counts reduced primitive forms of discriminant -D; -D must be fundamental.
ClassNumber class_number_unit(long D);

bool is_prime(const Int& n);
std::vector<long> primes_up_to(long n);
long next_prime(long n);
// Prime factorization with exponents, primes ascending; n != 0, sign ignored.
std::vector<std::pair<Int, int>> factor(const Int& n);
std::vector<Int> prime_divisors(const Int& n);
std::vector<long> divisors(long n);
bool is_squarefree(const Int& n);
int valuation(const Int& n, const Int& p);
int valuation(const Rat& x, const Int& p);
bool is_perfect_square(const Rat& x);

// x with every prime of S removed from numerator and denominator.
Rat away_from(const std::set<long>& S, const Rat& x);

// Numerator of (N-1)/12.
Int winding_multiple(long N);

long euler_phi(long n);
long gcd_long(long a, long b);

}  // namespace bsdtwist
