#pragma once

// Exact integer and rational primitives: d_n = LCM(1..n), binomial
// coefficients, harmonic numbers and the sums A_n.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace gammacrit {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Primes p <= bound, ascending (sieve of Eratosthenes).
std::vector<std::uint32_t> primes_upto(std::uint32_t bound);

/// d_n = LCM(1, ..., n) as the product of maximal prime powers p^k <= n.
/// Throws std::invalid_argument for n == 0.
BigInt lcm_upto(std::uint32_t n);

/// C(n, k), zero outside 0 <= k <= n.
BigInt binomial(std::int64_t n, std::int64_t k);

/// Row C(n, 0..n).
std::vector<BigInt> binomial_row(std::uint32_t n);

/// H_m = 1 + 1/2 + ... + 1/m, H_0 = 0. Summed by binary splitting.
BigRational harmonic(std::uint32_t m);

/// H_0 .. H_m as a table.
std::vector<BigRational> harmonic_table(std::uint32_t m);

/// A_n = sum_i C(n,i)^2 H_{n+i}. Throws std::invalid_argument for n == 0.
BigRational a_n(std::uint32_t n);

/// True when q has denominator 1.
inline bool is_integral(const BigRational& q) { return q.get_den() == 1; }

}  // namespace gammacrit
