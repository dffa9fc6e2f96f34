#include "gammacrit/certified_real.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace gammacrit {

BigFloat::BigFloat(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  // leave `other` valid but minimal
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigFloat BigFloat::from_int(const BigInt& z, mpfr_prec_t precision, mpfr_rnd_t rnd) {
  BigFloat f(precision);
  mpfr_set_z(f.value_, z.get_mpz_t(), rnd);
  return f;
}

BigFloat BigFloat::from_double(double d, mpfr_prec_t precision) {
  BigFloat f(std::max<mpfr_prec_t>(precision, 53));
  mpfr_set_d(f.value_, d, MPFR_RNDN);
  return f;
}

BigFloat BigFloat::pow2(long e, mpfr_prec_t precision) {
  BigFloat f(precision);
  mpfr_set_ui_2exp(f.value_, 1, e, MPFR_RNDN);
  return f;
}

BigRational BigFloat::to_rational() const {
  if (mpfr_zero_p(value_)) return 0;
  if (!mpfr_number_p(value_)) throw std::domain_error("BigFloat::to_rational: not finite");
  BigInt z;
  const mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), value_);
  BigRational q(z);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

mpfr_prec_t bits_for_digits(long digits) {
  return static_cast<mpfr_prec_t>(std::ceil(static_cast<double>(std::max(digits, 0L)) * 3.3219280948873623)) + 1;
}

// Radius helpers

BigFloat radius_of_double(double r) {
  if (!(r >= 0) || !std::isfinite(r)) throw std::invalid_argument("radius must be finite and >= 0");
  BigFloat out(kRadiusPrecision);
  mpfr_set_d(out.get(), r, MPFR_RNDU);
  return out;
}

BigFloat add_up(const BigFloat& a, const BigFloat& b) {
  BigFloat out(kRadiusPrecision);
  mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDU);
  return out;
}

BigFloat mul_up(const BigFloat& a, const BigFloat& b) {
  BigFloat out(kRadiusPrecision);
  mpfr_mul(out.get(), a.get(), b.get(), MPFR_RNDU);
  return out;
}

BigFloat abs_up(const BigFloat& a) {
  BigFloat out(kRadiusPrecision);
  mpfr_abs(out.get(), a.get(), MPFR_RNDU);
  return out;
}

namespace {

// Bound on |exact - v| after an operation that returned ternary value t.
BigFloat rounding_error(const BigFloat& v, int ternary) {
  BigFloat err(kRadiusPrecision);
  if (ternary == 0 || v.is_zero()) return err;
  // one ulp; round-to-nearest is off by at most half of it
  mpfr_set_ui_2exp(err.get(), 1, mpfr_get_exp(v.get()) - v.precision(), MPFR_RNDU);
  return err;
}

mpfr_prec_t joint_precision(const CertifiedReal& a, const CertifiedReal& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

CertifiedReal::CertifiedReal(BigFloat mid, BigFloat rad) : mid_(std::move(mid)), rad_(kRadiusPrecision) {
  if (!mpfr_number_p(rad.get()) || mpfr_sgn(rad.get()) < 0)
    throw std::invalid_argument("CertifiedReal: radius must be finite and >= 0");
  if (!mpfr_number_p(mid_.get())) throw std::invalid_argument("CertifiedReal: midpoint not finite");
  mpfr_set(rad_.get(), rad.get(), MPFR_RNDU);
}

CertifiedReal CertifiedReal::from_int(const BigInt& z, mpfr_prec_t precision) {
  BigFloat mid(precision);
  const int t = mpfr_set_z(mid.get(), z.get_mpz_t(), MPFR_RNDN);
  BigFloat rad = rounding_error(mid, t);
  return {std::move(mid), std::move(rad)};
}

CertifiedReal CertifiedReal::from_rational(const BigRational& q, mpfr_prec_t precision) {
  BigFloat mid(precision);
  const int t = mpfr_set_q(mid.get(), q.get_mpq_t(), MPFR_RNDN);
  BigFloat rad = rounding_error(mid, t);
  return {std::move(mid), std::move(rad)};
}

CertifiedReal CertifiedReal::from_double(double mid_value, double radius) {
  return {BigFloat::from_double(mid_value), radius_of_double(radius)};
}

BigFloat CertifiedReal::lower() const {
  BigFloat out(precision());
  mpfr_sub(out.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return out;
}

BigFloat CertifiedReal::upper() const {
  BigFloat out(precision());
  mpfr_add(out.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return out;
}

bool CertifiedReal::contains_zero() const { return lower().sign() <= 0 && upper().sign() >= 0; }

bool CertifiedReal::contains(const BigRational& q) const {
  return mpfr_cmp_q(lower().get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(upper().get(), q.get_mpq_t()) >= 0;
}

bool CertifiedReal::certainly_greater(const BigRational& q) const {
  return mpfr_cmp_q(lower().get(), q.get_mpq_t()) > 0;
}

bool CertifiedReal::certainly_less(const BigRational& q) const {
  return mpfr_cmp_q(upper().get(), q.get_mpq_t()) < 0;
}

CertifiedReal CertifiedReal::widened(const BigFloat& extra) const {
  return {mid_, add_up(rad_, abs_up(extra))};
}

CertifiedReal CertifiedReal::with_precision(mpfr_prec_t precision) const {
  BigFloat mid(precision);
  const int t = mpfr_set(mid.get(), mid_.get(), MPFR_RNDN);
  BigFloat rad = add_up(rad_, rounding_error(mid, t));
  return {std::move(mid), std::move(rad)};
}

CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
  BigFloat mid(joint_precision(a, b));
  const int t = mpfr_add(mid.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  BigFloat rad = add_up(add_up(a.rad_, b.rad_), rounding_error(mid, t));
  return {std::move(mid), std::move(rad)};
}

CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) {
  BigFloat mid(joint_precision(a, b));
  const int t = mpfr_sub(mid.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  BigFloat rad = add_up(add_up(a.rad_, b.rad_), rounding_error(mid, t));
  return {std::move(mid), std::move(rad)};
}

CertifiedReal operator-(const CertifiedReal& a) {
  BigFloat mid(a.precision());
  mpfr_neg(mid.get(), a.mid_.get(), MPFR_RNDN);
  return {std::move(mid), a.rad_};
}

CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
  BigFloat mid(joint_precision(a, b));
  const int t = mpfr_mul(mid.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  // |a| rb + |b| ra + ra rb
  BigFloat rad = add_up(mul_up(abs_up(a.mid_), b.rad_), mul_up(abs_up(b.mid_), a.rad_));
  rad = add_up(rad, mul_up(a.rad_, b.rad_));
  rad = add_up(rad, rounding_error(mid, t));
  return {std::move(mid), std::move(rad)};
}

CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b) {
  // |b| - rb, rounded down, must be positive
  BigFloat b_abs_lo(kRadiusPrecision);
  mpfr_abs(b_abs_lo.get(), b.mid_.get(), MPFR_RNDD);
  mpfr_sub(b_abs_lo.get(), b_abs_lo.get(), b.rad_.get(), MPFR_RNDD);
  if (b_abs_lo.sign() <= 0) throw std::domain_error("CertifiedReal: division by a ball containing zero");

  BigFloat mid(joint_precision(a, b));
  const int t = mpfr_div(mid.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  // (|b| ra + |a| rb) / (|b| (|b| - rb))
  BigFloat num = add_up(mul_up(abs_up(b.mid_), a.rad_), mul_up(abs_up(a.mid_), b.rad_));
  BigFloat den(kRadiusPrecision);
  mpfr_abs(den.get(), b.mid_.get(), MPFR_RNDD);
  mpfr_mul(den.get(), den.get(), b_abs_lo.get(), MPFR_RNDD);
  BigFloat rad(kRadiusPrecision);
  mpfr_div(rad.get(), num.get(), den.get(), MPFR_RNDU);
  rad = add_up(rad, rounding_error(mid, t));
  return {std::move(mid), std::move(rad)};
}

CertifiedReal operator*(const CertifiedReal& a, const BigInt& m) {
  BigFloat mid(a.precision());
  const int t = mpfr_mul_z(mid.get(), a.mid_.get(), m.get_mpz_t(), MPFR_RNDN);
  BigFloat m_abs = abs_up(BigFloat::from_int(m, kRadiusPrecision, MPFR_RNDA));
  BigFloat rad = add_up(mul_up(a.rad_, m_abs), rounding_error(mid, t));
  return {std::move(mid), std::move(rad)};
}

CertifiedReal operator/(const CertifiedReal& a, const BigInt& m) {
  if (m == 0) throw std::domain_error("CertifiedReal: division by zero");
  BigFloat mid(a.precision());
  const int t = mpfr_div_z(mid.get(), a.mid_.get(), m.get_mpz_t(), MPFR_RNDN);
  BigFloat m_abs(kRadiusPrecision);
  mpfr_set_z(m_abs.get(), m.get_mpz_t(), MPFR_RNDZ);
  mpfr_abs(m_abs.get(), m_abs.get(), MPFR_RNDZ);
  BigFloat rad(kRadiusPrecision);
  mpfr_div(rad.get(), a.rad_.get(), m_abs.get(), MPFR_RNDU);
  rad = add_up(rad, rounding_error(mid, t));
  return {std::move(mid), std::move(rad)};
}

CertifiedReal operator*(const CertifiedReal& a, const BigRational& q) {
  return (a * q.get_num()) / q.get_den();
}

std::string render_fixed(const BigFloat& x, long digits, DecimalRounding mode) {
  return render_fixed(x.to_rational(), digits, mode);
}

std::string render_fixed(const BigRational& x, long digits, DecimalRounding mode) {
  if (digits < 0) throw std::invalid_argument("render_fixed: digits must be >= 0");
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const BigRational scaled = x * BigRational(scale);
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  if (mode == DecimalRounding::kHalfEven) {
    const int c = cmp(BigInt(2 * r), scaled.get_den());
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  }
  const bool negative = q < 0;
  std::string body = BigInt(abs(q)).get_str();
  if (body.size() <= static_cast<std::size_t>(digits))
    body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
  if (digits > 0) body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  return negative ? "-" + body : body;
}

std::optional<std::string> certified_truncation(const CertifiedReal& x, long digits) {
  std::string lo = render_fixed(x.lower(), digits, DecimalRounding::kTruncate);
  std::string hi = render_fixed(x.upper(), digits, DecimalRounding::kTruncate);
  if (lo != hi) return std::nullopt;
  return lo;
}

std::string render_radius(const BigFloat& r) {
  if (r.is_zero()) return "0";
  mpfr_exp_t exp10 = 0;
  char* s = mpfr_get_str(nullptr, &exp10, 10, 2, r.get(), MPFR_RNDU);
  std::string digits(s);
  mpfr_free_str(s);
  std::string out;
  out += digits[0];
  out += '.';
  out += digits[1];
  out += 'e';
  const long e = static_cast<long>(exp10) - 1;
  out += (e < 0 ? "-" : "+");
  const std::string mag = std::to_string(e < 0 ? -e : e);
  if (mag.size() < 2) out += '0';
  out += mag;
  return out;
}

std::string render(const CertifiedReal& x, long digits) {
  return render_fixed(x.mid(), digits, DecimalRounding::kHalfEven) + " ± " + render_radius(x.rad());
}

}  // namespace gammacrit

namespace gammacrit {

std::string render_sci(const BigFloat& x, int significant, mpfr_rnd_t rnd) {
  if (significant < 1) throw std::invalid_argument("render_sci: need at least one significant digit");
  if (x.is_zero()) return "0";
  char* buf = nullptr;
  const char* format = rnd == MPFR_RNDD ? "%.*RDe" : rnd == MPFR_RNDU ? "%.*RUe" : "%.*RNe";
  if (mpfr_asprintf(&buf, format, significant - 1, x.get()) < 0) throw std::runtime_error("render_sci: formatting failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace gammacrit
