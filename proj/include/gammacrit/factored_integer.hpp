#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gammacrit/exact_core.hpp"

namespace gammacrit {

/// An integer held as a product of powers, prod base^exponent.
/// Bases are strictly increasing, every exponent is positive; the empty
/// product is 1.
class FactoredInteger {
 public:
  using Factor = std::pair<std::uint64_t, BigInt>;

  FactoredInteger() = default;

  /// Validates the invariants; throws std::invalid_argument otherwise.
  explicit FactoredInteger(std::vector<Factor> factors);

  /// Sorts by base, merges equal bases and drops zero exponents.
  static FactoredInteger from_unsorted(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

  /// Fully prime-factored exponents (bases are small, so trial division).
  std::map<std::uint64_t, BigInt> prime_exponents() const;

  /// Same integer, regardless of how the bases are grouped.
  bool same_value(const FactoredInteger& other) const {
    return prime_exponents() == other.prime_exponents();
  }

  /// Materializes the integer. Only sensible for small values.
  BigInt value() const;

  /// "4^220 · 5^760 · 6^220"; "1" for the empty product.
  std::string to_string() const;

  bool operator==(const FactoredInteger&) const = default;

 private:
  std::vector<Factor> factors_;
};

}  // namespace gammacrit
