#pragma once

// Ball arithmetic over MPFR: a midpoint at working precision plus a radius
// that is always rounded upward, so the true value stays inside
// [mid - rad, mid + rad] through every operation.

#include <optional>
#include <string>

#include <mpfr.h>

#include "gammacrit/exact_core.hpp"

namespace gammacrit {

/// Owning wrapper around mpfr_t with value semantics.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = 64);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  static BigFloat from_int(const BigInt& z, mpfr_prec_t precision, mpfr_rnd_t rnd = MPFR_RNDN);
  static BigFloat from_double(double d, mpfr_prec_t precision = 64);
  static BigFloat pow2(long e, mpfr_prec_t precision = 64);

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  /// Exact value of this binary float as a rational.
  BigRational to_rational() const;

  int compare(const BigFloat& other) const { return mpfr_cmp(value_, other.value_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return a.compare(b) < 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return a.compare(b) <= 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return a.compare(b) > 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return a.compare(b) >= 0; }

 private:
  mpfr_t value_;
};

/// Precision of radii; radii need only a few significant bits.
inline constexpr mpfr_prec_t kRadiusPrecision = 64;

/// Bits needed to represent 10^-digits.
mpfr_prec_t bits_for_digits(long digits);

/// A real number known to lie in [mid - rad, mid + rad].
class CertifiedReal {
 public:
  CertifiedReal() : mid_(64), rad_(kRadiusPrecision) {}
  CertifiedReal(BigFloat mid, BigFloat rad);

  /// Exact integer (radius 0 when it fits the precision).
  static CertifiedReal from_int(const BigInt& z, mpfr_prec_t precision);
  /// Nearest float to q, with the rounding error as radius.
  static CertifiedReal from_rational(const BigRational& q, mpfr_prec_t precision);
  /// Ball centered at mid_value with the given radius (both taken as doubles).
  static CertifiedReal from_double(double mid_value, double radius);

  const BigFloat& mid() const { return mid_; }
  const BigFloat& rad() const { return rad_; }
  mpfr_prec_t precision() const { return mid_.precision(); }

  double mid_double() const { return mid_.to_double(); }
  double rad_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

  /// mid - rad rounded down, mid + rad rounded up.
  BigFloat lower() const;
  BigFloat upper() const;

  bool contains_zero() const;
  bool contains(const BigRational& q) const;
  /// Whole ball strictly above / below q.
  bool certainly_greater(const BigRational& q) const;
  bool certainly_less(const BigRational& q) const;
  bool certainly_positive() const { return certainly_greater(0); }

  /// Radius widened by extra (rounded up).
  CertifiedReal widened(const BigFloat& extra) const;
  /// Same ball, midpoint re-rounded to a new precision.
  CertifiedReal with_precision(mpfr_prec_t precision) const;

  friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator-(const CertifiedReal& a);
  friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b);
  /// Throws std::domain_error if b's ball contains zero.
  friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b);
  friend CertifiedReal operator*(const CertifiedReal& a, const BigInt& m);
  friend CertifiedReal operator*(const CertifiedReal& a, const BigRational& q);
  friend CertifiedReal operator/(const CertifiedReal& a, const BigInt& m);

 private:
  BigFloat mid_;
  BigFloat rad_;
};

/// Radius helpers, all rounded upward at kRadiusPrecision.
BigFloat radius_of_double(double r);
BigFloat add_up(const BigFloat& a, const BigFloat& b);
BigFloat mul_up(const BigFloat& a, const BigFloat& b);
BigFloat abs_up(const BigFloat& a);

enum class DecimalRounding { kHalfEven, kTruncate };

/// Midpoint printed with exactly `digits` digits after the point.
/// kTruncate rounds toward minus infinity (the "0.7725..." convention).
std::string render_fixed(const BigFloat& x, long digits, DecimalRounding mode);
std::string render_fixed(const BigRational& x, long digits, DecimalRounding mode);

/// Truncated digits shared by every point of the ball, if the ball does not
/// straddle a digit boundary.
std::optional<std::string> certified_truncation(const CertifiedReal& x, long digits);

/// Radius in exponent notation, rounded up, e.g. "3.1e-15".
std::string render_radius(const BigFloat& r);

/// x in exponent notation with `significant` digits, rounded in direction rnd
/// (MPFR_RNDD for lower endpoints, MPFR_RNDU for upper ones).
std::string render_sci(const BigFloat& x, int significant, mpfr_rnd_t rnd);

/// "mid ± rad" with the midpoint rounded half-even to `digits`.
std::string render(const CertifiedReal& x, long digits);

}  // namespace gammacrit
