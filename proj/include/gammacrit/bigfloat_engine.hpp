#pragma once

// Certified evaluation of log S_n, its fractional part, the linear form L_n
// and the approximation gamma ~ (A_n - L_n) / C(2n,n).

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "gammacrit/certified_real.hpp"
#include "gammacrit/factored_integer.hpp"

namespace gammacrit {

/// Raised when adaptive precision hits its configured ceiling before the
/// requested result could be certified.
class PrecisionCapError : public std::runtime_error {
 public:
  PrecisionCapError(const std::string& what, mpfr_prec_t reached)
      : std::runtime_error(what), reached_(reached) {}
  mpfr_prec_t reached() const { return reached_; }

 private:
  mpfr_prec_t reached_;
};

/// log(m) per base, kept at the highest precision requested so far.
/// Readers share the lock; a miss computes outside it and publishes the
/// result only if it is more precise than what is already stored.
class LogCache {
 public:
  CertifiedReal log(std::uint64_t m, mpfr_prec_t precision);
  std::size_t size() const;
  void clear();

  static LogCache& global();

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, CertifiedReal> entries_;
};

/// log(m) with radius <= target_radius. Throws std::invalid_argument for m == 0.
CertifiedReal log_int(std::uint64_t m, double target_radius);
/// log(m) rounded to `precision` bits (radius about one ulp).
CertifiedReal log_int_at(std::uint64_t m, mpfr_prec_t precision);

/// sum_b e_b log(b) for a factored integer, evaluated at `precision` bits.
CertifiedReal log_of(const FactoredInteger& x, mpfr_prec_t precision);

/// Upper bound on log2(log S_n), from the exact integer d_{2n} A_n > log S_n.
long log_S_magnitude_bits(std::uint32_t n);

/// log S_n evaluated with every log at `precision` bits.
CertifiedReal log_S_at(std::uint32_t n, mpfr_prec_t precision);
/// log S_n with radius <= target_radius.
CertifiedReal log_S(std::uint32_t n, double target_radius);

struct FracOptions {
  /// Ceiling on working precision; exceeding it raises PrecisionCapError.
  mpfr_prec_t max_precision = 1L << 22;
  /// Extra decimal digits beyond integer part and requested digits.
  long guard_digits = 16;
};

struct FractionalPart {
  CertifiedReal frac;        // {log S_n}, inside [0, 1)
  BigInt integer_part;       // floor(log S_n)
  std::string truncated;     // first `digits` decimals, certified
  mpfr_prec_t precision = 0; // working precision that settled it
};

/// {log S_n} with the integer part and the first `digits` truncated
/// decimals certified; precision doubles until both are unambiguous.
FractionalPart frac_log_S(std::uint32_t n, long digits, const FracOptions& options = {});

/// Fractional part of an arbitrary certified value, with the same
/// escalation contract; `eval(precision)` recomputes the value.
template <class Eval>
FractionalPart certified_frac(Eval&& eval, mpfr_prec_t start, long digits, const FracOptions& options);

/// L_n from its rational coefficients (the triple-sum form), radius <= target_radius.
CertifiedReal l_n(std::uint32_t n, double target_radius);
CertifiedReal l_n_at(std::uint32_t n, mpfr_prec_t precision);

/// Leading Laplace term 4^{-2n} pi / (3 n log 4) of I_n; radius = relative_slack * value.
CertifiedReal laplace_leading_term(std::uint32_t n, double relative_slack = 1.0,
                                   mpfr_prec_t precision = 128);

struct GammaApprox {
  CertifiedReal gamma;         // (A_n - L_n) / C(2n,n), arithmetic radius only
  CertifiedReal method_error;  // estimate of gamma - approximation; not a bound
};

/// (A_n - L_n) / C(2n,n) with arithmetic radius <= target_radius.
GammaApprox gamma_approx(std::uint32_t n, double target_radius);
GammaApprox gamma_approx_at(std::uint32_t n, mpfr_prec_t precision);

/// Rigorous enclosure of gamma from index n: gamma - approx lies in
/// (0, 16^{-n} / C(2n,n)).
CertifiedReal gamma_reference(std::uint32_t n, mpfr_prec_t precision);
/// Smallest-index reference whose radius is below target_radius (as 2^-bits).
CertifiedReal gamma_reference_bits(long target_bits);

/// Number of decimal digits of the integer x (x >= 1), certified.
BigInt decimal_digit_count(const FactoredInteger& x, const FracOptions& options = {});

// ---------------------------------------------------------------------------

template <class Eval>
FractionalPart certified_frac(Eval&& eval, mpfr_prec_t start, long digits, const FracOptions& options) {
  mpfr_prec_t precision = start;
  for (;;) {
    CertifiedReal x = eval(precision);
    BigInt lo_floor, hi_floor;
    mpfr_get_z(lo_floor.get_mpz_t(), x.lower().get(), MPFR_RNDD);
    mpfr_get_z(hi_floor.get_mpz_t(), x.upper().get(), MPFR_RNDD);
    if (lo_floor == hi_floor) {
      CertifiedReal frac = x - CertifiedReal::from_int(lo_floor, x.precision());
      if (auto text = certified_truncation(frac, digits)) {
        return FractionalPart{std::move(frac), lo_floor, *text, precision};
      }
    }
    if (precision >= options.max_precision) {
      throw PrecisionCapError("fractional part undecided at precision cap of " +
                                  std::to_string(options.max_precision) + " bits",
                              precision);
    }
    precision = std::min(precision * 2, options.max_precision);
  }
}

}  // namespace gammacrit
