#pragma once

// The integer S_n = prod_k (n+k)^{e_{n,k}}, whose logarithm is d_{2n} L_n,
// and exact checks of the harmonic-number identities that tie the three
// expressions for L_n together.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gammacrit/exact_core.hpp"
#include "gammacrit/factored_integer.hpp"

namespace gammacrit {

/// Which expression of the linear form L_n the coefficients are read from.
enum class LinearFormula {
  kTripleSum,     // sum over k, i <= min(k-1, n-k), i < j <= n-i of C(n,i)^2 2/j
  kSignedPairs,   // sum over i < k <= j of 2 (-1)^{i+j-1} C(n,i) C(n,j) / (j-i)
  kHarmonicDiff,  // sum over i < k of 2 C(n,i)^2 (H_{n-i} - H_i)
};

const char* to_string(LinearFormula f);

/// Raised when exact arithmetic contradicts an identity the construction
/// relies on (a coefficient that should be integral is not, etc.).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Coefficients e_{n,1..n} of log(n+k) in log S_n = d_{2n} L_n.
struct ExponentTable {
  std::uint32_t n = 0;
  std::vector<BigInt> exponents;  // exponents[k-1] = e_{n,k}

  const BigInt& operator[](std::uint32_t k) const { return exponents.at(k - 1); }
  bool operator==(const ExponentTable&) const = default;
};

/// Rational coefficients of log(n+1), ..., log(2n) in L_n.
std::vector<BigRational> linear_form_coefficients(std::uint32_t n, LinearFormula formula);

/// d_{2n} times the coefficients; throws ConsistencyError if any is not an
/// integer.
ExponentTable exponent_table(std::uint32_t n, LinearFormula formula = LinearFormula::kHarmonicDiff);

/// S_n = s_n^{2 r_n} with r_n = d_{2n} / d_n.
struct SnFactorization {
  FactoredInteger S;
  BigInt r;
  FactoredInteger s;
};

SnFactorization s_n_factored(std::uint32_t n);

/// Grouped rendering of s_n^{2 r_n}: bases of s_n sharing an exponent
/// are multiplied together, e.g. "(24^11 · 5^38)^20" for n = 3.
std::string render_grouped(const SnFactorization& f);

/// Left side of the first harmonic identity:
/// sum_{j=k+1}^{n} (-1)^{k+j-1} C(n,j) / (j-k).
BigRational lemma11_left(std::uint32_t n, std::uint32_t k);

/// sum_{j=k+1}^{n} (-1)^{k+j-1} C(n,j)/(j-k) == C(n,k)(H_n - H_k), 0 <= k < n.
bool verify_lemma11_14(std::uint32_t n, std::uint32_t k);

/// sum_{i=0}^{k-1} (-1)^{k+i-1} C(n,i)/(k-i) == C(n,k)(H_n - H_{n-k}), 0 < k <= n.
bool verify_lemma11_15(std::uint32_t n, std::uint32_t k);

/// sum_{i<k<=j} (-1)^{i+j-1} C(n,i)C(n,j)/(j-i) == sum_{i<k} C(n,i)^2 (H_{n-i} - H_i),
/// 1 <= k <= n.
bool verify_prop10(std::uint32_t n, std::uint32_t k);

}  // namespace gammacrit
