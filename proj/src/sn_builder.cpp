#include "gammacrit/sn_builder.hpp"

#include <algorithm>
#include <sstream>

namespace gammacrit {

const char* to_string(LinearFormula f) {
  switch (f) {
    case LinearFormula::kTripleSum: return "triple-sum";
    case LinearFormula::kSignedPairs: return "signed-pairs";
    case LinearFormula::kHarmonicDiff: return "harmonic-diff";
  }
  return "?";
}

namespace {

int sign_of_power(std::int64_t e) { return (e % 2 == 0) ? 1 : -1; }

void require_positive(std::uint32_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": n must be >= 1");
}

// 2 (-1)^{i+j-1} C(n,i) C(n,j) / (j-i), i < j
BigRational pair_term(const std::vector<BigInt>& row, std::uint32_t i, std::uint32_t j) {
  BigRational t(row[i] * row[j] * 2, j - i);
  t.canonicalize();
  if (sign_of_power(static_cast<std::int64_t>(i) + j - 1) < 0) t = -t;
  return t;
}

std::vector<BigRational> triple_sum_coefficients(std::uint32_t n) {
  const auto row = binomial_row(n);
  // i never exceeds (n-1)/2, since i <= min(k-1, n-k).
  const std::uint32_t i_max = (n - 1) / 2;
  // inner[i] = sum_{j=i+1}^{n-i} 2/j; built outward from the middle.
  std::vector<BigRational> inner(i_max + 1);
  for (std::uint32_t step = 0; step <= i_max; ++step) {
    const std::uint32_t i = i_max - step;
    BigRational acc = 0;
    std::uint32_t j_lo = i + 1, j_hi = n - i;
    if (step > 0) {
      acc = inner[i + 1];
      // inner[i+1] covers j in [i+2, n-i-1]
      acc += BigRational(2, i + 1);
      acc += BigRational(2, n - i);
    } else {
      for (std::uint32_t j = j_lo; j <= j_hi; ++j) acc += BigRational(2, j);
    }
    inner[i] = acc;
  }
  // prefix[m] = sum_{i<=m} C(n,i)^2 inner[i]
  std::vector<BigRational> prefix(i_max + 1);
  BigRational running = 0;
  for (std::uint32_t i = 0; i <= i_max; ++i) {
    running += BigRational(row[i] * row[i]) * inner[i];
    prefix[i] = running;
  }
  std::vector<BigRational> c(n);
  for (std::uint32_t k = 1; k <= n; ++k) c[k - 1] = prefix[std::min(k - 1, n - k)];
  return c;
}

std::vector<BigRational> signed_pairs_coefficients(std::uint32_t n) {
  const auto row = binomial_row(n);
  std::vector<BigRational> c(n);
  // k = 1: i = 0, all j >= 1
  BigRational acc = 0;
  for (std::uint32_t j = 1; j <= n; ++j) acc += pair_term(row, 0, j);
  c[0] = acc;
  for (std::uint32_t k = 1; k < n; ++k) {
    // move from index set {i<k<=j} to {i<k+1<=j}: gain row i=k, lose column j=k
    for (std::uint32_t j = k + 1; j <= n; ++j) acc += pair_term(row, k, j);
    for (std::uint32_t i = 0; i < k; ++i) acc -= pair_term(row, i, k);
    c[k] = acc;
  }
  return c;
}

std::vector<BigRational> harmonic_diff_coefficients(std::uint32_t n) {
  const auto row = binomial_row(n);
  const auto h = harmonic_table(n);
  std::vector<BigRational> c(n);
  BigRational acc = 0;
  for (std::uint32_t k = 1; k <= n; ++k) {
    const std::uint32_t i = k - 1;
    acc += BigRational(row[i] * row[i] * 2) * (h[n - i] - h[i]);
    c[k - 1] = acc;
  }
  return c;
}

}  // namespace

std::vector<BigRational> linear_form_coefficients(std::uint32_t n, LinearFormula formula) {
  require_positive(n, "linear_form_coefficients");
  switch (formula) {
    case LinearFormula::kTripleSum: return triple_sum_coefficients(n);
    case LinearFormula::kSignedPairs: return signed_pairs_coefficients(n);
    case LinearFormula::kHarmonicDiff: return harmonic_diff_coefficients(n);
  }
  throw std::invalid_argument("linear_form_coefficients: unknown formula");
}

ExponentTable exponent_table(std::uint32_t n, LinearFormula formula) {
  const auto coeffs = linear_form_coefficients(n, formula);
  const BigInt d2n = lcm_upto(2 * n);
  ExponentTable table{n, {}};
  table.exponents.reserve(n);
  for (std::uint32_t k = 1; k <= n; ++k) {
    BigRational e = coeffs[k - 1] * d2n;
    if (!is_integral(e)) {
      std::ostringstream os;
      os << "exponent_table(" << n << ", " << to_string(formula) << "): e_{n," << k
         << "} = " << e.get_str() << " is not an integer";
      throw ConsistencyError(os.str());
    }
    table.exponents.push_back(e.get_num());
  }
  return table;
}

SnFactorization s_n_factored(std::uint32_t n) {
  const ExponentTable table = exponent_table(n);
  const BigInt dn = lcm_upto(n);
  const BigInt d2n = lcm_upto(2 * n);
  if (d2n % dn != 0) throw ConsistencyError("s_n_factored: d_n does not divide d_2n");
  SnFactorization out;
  out.r = d2n / dn;
  const BigInt two_r = 2 * out.r;
  std::vector<FactoredInteger::Factor> big, small;
  for (std::uint32_t k = 1; k <= n; ++k) {
    const BigInt& e = table[k];
    if (e <= 0 || e % two_r != 0) {
      std::ostringstream os;
      os << "s_n_factored(" << n << "): e_{n," << k << "} = " << e.get_str()
         << " is not a positive multiple of 2 r_n = " << two_r.get_str();
      throw ConsistencyError(os.str());
    }
    big.emplace_back(n + k, e);
    small.emplace_back(n + k, e / two_r);
  }
  out.S = FactoredInteger(std::move(big));
  out.s = FactoredInteger(std::move(small));
  return out;
}

std::string render_grouped(const SnFactorization& f) {
  // group bases of s by exponent, in order of first appearance
  std::vector<std::pair<BigInt, BigInt>> groups;  // (exponent, product of bases)
  for (const auto& [base, exponent] : f.s.factors()) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == exponent; });
    if (it == groups.end())
      groups.emplace_back(exponent, BigInt(static_cast<unsigned long>(base)));
    else
      it->second *= static_cast<unsigned long>(base);
  }
  const BigInt two_r = 2 * f.r;
  std::ostringstream os;
  if (groups.size() == 1 && groups[0].first == 1) {
    os << groups[0].second.get_str() << '^' << two_r.get_str();
    return os.str();
  }
  os << '(';
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (g > 0) os << " · ";
    os << groups[g].second.get_str();
    if (groups[g].first != 1) os << '^' << groups[g].first.get_str();
  }
  os << ")^" << two_r.get_str();
  return os.str();
}

BigRational lemma11_left(std::uint32_t n, std::uint32_t k) {
  const auto row = binomial_row(n);
  BigRational sum = 0;
  for (std::uint32_t j = k + 1; j <= n; ++j) {
    BigRational t(row[j], j - k);
    t.canonicalize();
    sum += sign_of_power(static_cast<std::int64_t>(k) + j - 1) > 0 ? t : BigRational(-t);
  }
  return sum;
}

bool verify_lemma11_14(std::uint32_t n, std::uint32_t k) {
  if (n == 0 || k >= n) throw std::invalid_argument("verify_lemma11_14: need 0 <= k < n");
  const BigRational rhs = BigRational(binomial(n, k)) * (harmonic(n) - harmonic(k));
  return lemma11_left(n, k) == rhs;
}

bool verify_lemma11_15(std::uint32_t n, std::uint32_t k) {
  if (k == 0 || k > n) throw std::invalid_argument("verify_lemma11_15: need 0 < k <= n");
  const auto row = binomial_row(n);
  BigRational lhs = 0;
  for (std::uint32_t i = 0; i < k; ++i) {
    BigRational t(row[i], k - i);
    t.canonicalize();
    lhs += sign_of_power(static_cast<std::int64_t>(k) + i - 1) > 0 ? t : BigRational(-t);
  }
  const BigRational rhs = BigRational(row[k]) * (harmonic(n) - harmonic(n - k));
  return lhs == rhs;
}

bool verify_prop10(std::uint32_t n, std::uint32_t k) {
  if (k == 0 || k > n) throw std::invalid_argument("verify_prop10: need 1 <= k <= n");
  const auto row = binomial_row(n);
  const auto h = harmonic_table(n);
  BigRational lhs = 0;
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = k; j <= n; ++j) {
      BigRational t(row[i] * row[j], j - i);
      t.canonicalize();
      lhs += sign_of_power(static_cast<std::int64_t>(i) + j - 1) > 0 ? t : BigRational(-t);
    }
  }
  BigRational rhs = 0;
  for (std::uint32_t i = 0; i < k; ++i) rhs += BigRational(row[i] * row[i]) * (h[n - i] - h[i]);
  return lhs == rhs;
}

}  // namespace gammacrit
