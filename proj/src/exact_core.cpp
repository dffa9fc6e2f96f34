#include "gammacrit/exact_core.hpp"

#include <stdexcept>

namespace gammacrit {

std::vector<std::uint32_t> primes_upto(std::uint32_t bound) {
  std::vector<std::uint32_t> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    primes.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p * p; m <= bound; m += p) composite[m] = true;
  }
  return primes;
}

BigInt lcm_upto(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("lcm_upto: n must be >= 1");
  BigInt result = 1;
  for (std::uint32_t p : primes_upto(n)) {
    // largest power of p not exceeding n
    std::uint64_t q = p;
    while (q * p <= n) q *= p;
    result *= static_cast<unsigned long>(q);
  }
  return result;
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

std::vector<BigInt> binomial_row(std::uint32_t n) {
  std::vector<BigInt> row(n + 1);
  row[0] = 1;
  for (std::uint32_t k = 1; k <= n; ++k) {
    row[k] = row[k - 1] * (n - k + 1);
    row[k] /= k;
  }
  return row;
}

namespace {

// Sum of 1/k for lo <= k < hi as an unreduced fraction num/den.
void harmonic_split(std::uint32_t lo, std::uint32_t hi, BigInt& num, BigInt& den) {
  if (hi - lo == 1) {
    num = 1;
    den = lo;
    return;
  }
  std::uint32_t mid = lo + (hi - lo) / 2;
  BigInt ln, ld, rn, rd;
  harmonic_split(lo, mid, ln, ld);
  harmonic_split(mid, hi, rn, rd);
  num = ln * rd + rn * ld;
  den = ld * rd;
}

}  // namespace

BigRational harmonic(std::uint32_t m) {
  if (m == 0) return 0;
  BigInt num, den;
  harmonic_split(1, m + 1, num, den);
  BigRational h(num, den);
  h.canonicalize();
  return h;
}

std::vector<BigRational> harmonic_table(std::uint32_t m) {
  std::vector<BigRational> h(m + 1);
  h[0] = 0;
  for (std::uint32_t k = 1; k <= m; ++k) h[k] = h[k - 1] + BigRational(1, k);
  return h;
}

BigRational a_n(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("a_n: n must be >= 1");
  const auto row = binomial_row(n);
  const auto h = harmonic_table(2 * n);
  BigRational sum = 0;
  for (std::uint32_t i = 0; i <= n; ++i) sum += BigRational(row[i] * row[i]) * h[n + i];
  return sum;
}

}  // namespace gammacrit
