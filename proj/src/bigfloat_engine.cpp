#include "gammacrit/bigfloat_engine.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "gammacrit/sn_builder.hpp"

namespace gammacrit {

namespace {

// ceil(log2(1 / r)) for a positive double radius
long bits_below(double target_radius) {
  if (!(target_radius > 0) || !std::isfinite(target_radius))
    throw std::invalid_argument("target radius must be positive and finite");
  return static_cast<long>(std::ceil(-std::log2(target_radius)));
}

long bit_length(const BigInt& z) {
  return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

// Bits of a ceiling of |q|.
long magnitude_bits(const BigRational& q) {
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return bit_length(BigInt(abs(c))) + 1;
}

long ceil_log2(std::uint64_t x) {
  long b = 0;
  while ((std::uint64_t{1} << b) < x && b < 63) ++b;
  return b;
}

CertifiedReal compute_log(std::uint64_t m, mpfr_prec_t precision) {
  BigFloat mid(precision);
  mpfr_set_ui(mid.get(), 0, MPFR_RNDN);
  if (m == 1) return {std::move(mid), BigFloat(kRadiusPrecision)};
  // correctly rounded: error <= half an ulp; we record a full ulp
  const int t = mpfr_log_ui(mid.get(), m, MPFR_RNDN);
  BigFloat rad(kRadiusPrecision);
  if (t != 0) mpfr_set_ui_2exp(rad.get(), 1, mpfr_get_exp(mid.get()) - precision, MPFR_RNDU);
  return {std::move(mid), std::move(rad)};
}

}  // namespace

CertifiedReal LogCache::log(std::uint64_t m, mpfr_prec_t precision) {
  if (m == 0) throw std::invalid_argument("log of zero");
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(m);
    if (it != entries_.end() && it->second.precision() >= precision) {
      return it->second.precision() == precision ? it->second : it->second.with_precision(precision);
    }
  }
  CertifiedReal fresh = compute_log(m, precision);
  {
    std::unique_lock lock(mutex_);
    auto it = entries_.find(m);
    if (it == entries_.end())
      entries_.emplace(m, fresh);
    else if (it->second.precision() < precision)
      it->second = fresh;
  }
  return fresh;
}

std::size_t LogCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void LogCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

LogCache& LogCache::global() {
  static LogCache cache;
  return cache;
}

CertifiedReal log_int_at(std::uint64_t m, mpfr_prec_t precision) {
  if (m == 0) throw std::invalid_argument("log_int: m must be >= 1");
  return LogCache::global().log(m, precision);
}

CertifiedReal log_int(std::uint64_t m, double target_radius) {
  if (m == 0) throw std::invalid_argument("log_int: m must be >= 1");
  // |log m| < 64, so relative precision bits + 7 suffices
  const mpfr_prec_t precision = std::max<long>(bits_below(target_radius) + 8, 53);
  return log_int_at(m, precision);
}

CertifiedReal log_of(const FactoredInteger& x, mpfr_prec_t precision) {
  CertifiedReal sum = CertifiedReal::from_int(0, precision);
  for (const auto& [base, exponent] : x.factors()) sum = sum + log_int_at(base, precision) * exponent;
  return sum;
}

long log_S_magnitude_bits(std::uint32_t n) {
  const BigRational bound = a_n(n) * BigRational(lcm_upto(2 * n));
  return magnitude_bits(bound);
}

CertifiedReal log_S_at(std::uint32_t n, mpfr_prec_t precision) {
  const ExponentTable table = exponent_table(n);
  CertifiedReal sum = CertifiedReal::from_int(0, precision);
  for (std::uint32_t k = 1; k <= n; ++k) sum = sum + log_int_at(n + k, precision) * table[k];
  return sum;
}

CertifiedReal log_S(std::uint32_t n, double target_radius) {
  if (n == 0) throw std::invalid_argument("log_S: n must be >= 1");
  // each of the n terms carries relative error ~2^-p of a value <= log S_n
  mpfr_prec_t precision = log_S_magnitude_bits(n) + bits_below(target_radius) + ceil_log2(n) + 8;
  for (;;) {
    CertifiedReal x = log_S_at(n, precision);
    if (x.rad_double() <= target_radius) return x;
    precision += 32;
  }
}

FractionalPart frac_log_S(std::uint32_t n, long digits, const FracOptions& options) {
  if (n == 0) throw std::invalid_argument("frac_log_S: n must be >= 1");
  if (digits < 1) throw std::invalid_argument("frac_log_S: digits must be >= 1");
  const mpfr_prec_t start = std::min<mpfr_prec_t>(
      log_S_magnitude_bits(n) + bits_for_digits(digits + options.guard_digits) + ceil_log2(n),
      options.max_precision);
  return certified_frac([n](mpfr_prec_t p) { return log_S_at(n, p); }, start, digits, options);
}

CertifiedReal l_n_at(std::uint32_t n, mpfr_prec_t precision) {
  if (n == 0) throw std::invalid_argument("l_n: n must be >= 1");
  const auto coeffs = linear_form_coefficients(n, LinearFormula::kTripleSum);
  CertifiedReal sum = CertifiedReal::from_int(0, precision);
  for (std::uint32_t k = 1; k <= n; ++k) sum = sum + log_int_at(n + k, precision) * coeffs[k - 1];
  return sum;
}

CertifiedReal l_n(std::uint32_t n, double target_radius) {
  if (n == 0) throw std::invalid_argument("l_n: n must be >= 1");
  BigRational total = 0;
  for (const auto& c : linear_form_coefficients(n, LinearFormula::kTripleSum)) total += c;
  // L_n <= (sum of coefficients) * log(2n)
  mpfr_prec_t precision = magnitude_bits(total) + ceil_log2(2 * n) + bits_below(target_radius) +
                          ceil_log2(n) + 8;
  for (;;) {
    CertifiedReal x = l_n_at(n, precision);
    if (x.rad_double() <= target_radius) return x;
    precision += 32;
  }
}

CertifiedReal laplace_leading_term(std::uint32_t n, double relative_slack, mpfr_prec_t precision) {
  if (n == 0) throw std::invalid_argument("laplace_leading_term: n must be >= 1");
  // 4^{-2n} pi / (3 n log 4), computed to full precision then given its slack
  BigFloat v(precision), t(precision);
  mpfr_const_pi(v.get(), MPFR_RNDN);
  mpfr_log_ui(t.get(), 4, MPFR_RNDN);
  mpfr_mul_ui(t.get(), t.get(), 3UL * n, MPFR_RNDN);
  mpfr_div(v.get(), v.get(), t.get(), MPFR_RNDN);
  mpfr_div_2ui(v.get(), v.get(), 4UL * n, MPFR_RNDN);
  BigFloat rad(kRadiusPrecision);
  mpfr_mul_d(rad.get(), v.get(), relative_slack, MPFR_RNDU);
  mpfr_abs(rad.get(), rad.get(), MPFR_RNDU);
  return {std::move(v), std::move(rad)};
}

GammaApprox gamma_approx_at(std::uint32_t n, mpfr_prec_t precision) {
  if (n == 0) throw std::invalid_argument("gamma_approx: n must be >= 1");
  const BigInt central = binomial(2 * n, n);
  CertifiedReal a = CertifiedReal::from_rational(a_n(n), precision);
  CertifiedReal gamma = (a - l_n_at(n, precision)) / central;
  CertifiedReal method = laplace_leading_term(n) / central;
  return {std::move(gamma), std::move(method)};
}

GammaApprox gamma_approx(std::uint32_t n, double target_radius) {
  if (n == 0) throw std::invalid_argument("gamma_approx: n must be >= 1");
  // A_n and L_n are about C(2n,n) gamma in size; the division gives back 2n bits
  mpfr_prec_t precision = 2 * static_cast<long>(n) + 8 + bits_below(target_radius) + ceil_log2(n) + 8;
  for (;;) {
    GammaApprox g = gamma_approx_at(n, precision);
    if (g.gamma.rad_double() <= target_radius) return g;
    precision += 32;
  }
}

CertifiedReal gamma_reference(std::uint32_t n, mpfr_prec_t precision) {
  const GammaApprox g = gamma_approx_at(n, precision);
  // half-width of (0, 16^{-n} / C(2n,n))
  CertifiedReal half = CertifiedReal::from_rational(
      BigRational(1, BigInt(binomial(2 * n, n) << (4 * n + 1))), precision);
  CertifiedReal shifted = g.gamma + half;
  return shifted.widened(half.upper());
}

CertifiedReal gamma_reference_bits(long target_bits) {
  const long wanted = std::max(target_bits, 8L) + 4;
  // 16^{-n}/C(2n,n) <= 2 sqrt(n) 2^{-6n}
  std::uint32_t n = 1;
  while (6L * n - 1 - ceil_log2(n) / 2 - 1 < wanted) ++n;
  const mpfr_prec_t precision = wanted + 2 * static_cast<long>(n) + ceil_log2(n) + 24;
  return gamma_reference(n, precision);
}

BigInt decimal_digit_count(const FactoredInteger& x, const FracOptions& options) {
  if (x.empty()) return 1;
  // exact powers of ten sit on a digit boundary that no enclosure can resolve
  const auto primes = x.prime_exponents();
  if (primes.size() == 2 && primes.count(2) && primes.count(5) && primes.at(2) == primes.at(5))
    return primes.at(2) + 1;
  // log10 x = log x / log 10; the digit count is floor(log10 x) + 1
  BigInt weight = 0;
  for (const auto& [base, exponent] : x.factors()) weight += exponent * static_cast<unsigned long>(ceil_log2(base) + 1);
  const mpfr_prec_t start = std::min<mpfr_prec_t>(bit_length(weight) + 64, options.max_precision);
  auto eval = [&x](mpfr_prec_t p) { return log_of(x, p) / log_int_at(10, p); };
  FractionalPart part = certified_frac(eval, start, 1, options);
  return part.integer_part + 1;
}

}  // namespace gammacrit
