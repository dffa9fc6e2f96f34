#include "gammacrit/factored_integer.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gammacrit {

FactoredInteger::FactoredInteger(std::vector<Factor> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].first == 0) throw std::invalid_argument("FactoredInteger: zero base");
    if (factors_[i].second <= 0)
      throw std::invalid_argument("FactoredInteger: exponents must be positive");
    if (i > 0 && factors_[i - 1].first >= factors_[i].first)
      throw std::invalid_argument("FactoredInteger: bases must be strictly increasing");
  }
}

FactoredInteger FactoredInteger::from_unsorted(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  std::vector<Factor> merged;
  for (auto& f : factors) {
    if (f.second < 0) throw std::invalid_argument("FactoredInteger: negative exponent");
    if (!merged.empty() && merged.back().first == f.first)
      merged.back().second += f.second;
    else
      merged.push_back(std::move(f));
  }
  std::erase_if(merged, [](const Factor& f) { return f.second == 0; });
  // base 1 contributes nothing
  std::erase_if(merged, [](const Factor& f) { return f.first == 1; });
  return FactoredInteger(std::move(merged));
}

std::map<std::uint64_t, BigInt> FactoredInteger::prime_exponents() const {
  std::map<std::uint64_t, BigInt> out;
  for (const auto& [base, exponent] : factors_) {
    std::uint64_t b = base;
    for (std::uint64_t p = 2; p * p <= b; ++p) {
      while (b % p == 0) {
        out[p] += exponent;
        b /= p;
      }
    }
    if (b > 1) out[b] += exponent;
  }
  return out;
}

BigInt FactoredInteger::value() const {
  BigInt result = 1;
  for (const auto& [base, exponent] : factors_) {
    if (!exponent.fits_ulong_p())
      throw std::overflow_error("FactoredInteger::value: exponent too large to materialize");
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), base, exponent.get_ui());
    result *= power;
  }
  return result;
}

std::string FactoredInteger::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i > 0) os << " · ";
    os << factors_[i].first;
    if (factors_[i].second != 1) os << '^' << factors_[i].second.get_str();
  }
  return os.str();
}

}  // namespace gammacrit
