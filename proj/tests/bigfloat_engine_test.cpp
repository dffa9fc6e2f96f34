#include "gammacrit/bigfloat_engine.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gammacrit/exact_core.hpp"
#include "gammacrit/sn_builder.hpp"
#include "gtest/gtest.h"

namespace gammacrit {
namespace {

constexpr const char* kGamma = "0.57721566490153286060651209008240243104215933593992";

BigRational decimal(const std::string& s) {
  const auto dot = s.find('.');
  const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
  BigRational q(BigInt(digits, 10), den);
  q.canonicalize();
  return q;
}

BigRational pow2_inverse(unsigned long k) {
  BigInt d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, k);
  return BigRational(1, 1) / BigRational(d);
}

// log(m) from 2 atanh((y-1)/(y+1)) in exact rationals; returns the partial
// sum and a bound on the remainder.
std::pair<BigRational, BigRational> atanh_log(std::uint64_t m, unsigned bits) {
  auto atanh_series = [bits](const BigRational& z, BigRational& tail) {
    BigRational sum = 0, power = z, z2 = z * z;
    const BigRational eps = pow2_inverse(bits);
    for (unsigned long j = 0;; ++j) {
      const BigRational term = power / BigRational(2 * j + 1);
      sum += term;
      power *= z2;
      if (power < eps) {
        tail = power / (BigRational(1) - z2);
        return sum;
      }
    }
  };
  unsigned k = 0;
  while ((std::uint64_t{1} << (k + 1)) <= m) ++k;
  BigRational y(BigInt(std::to_string(m)), BigInt(1));
  y /= BigRational(BigInt(1) << k);
  y.canonicalize();
  BigRational tail_y, tail_2;
  const BigRational log_y = 2 * atanh_series((y - 1) / (y + 1), tail_y);
  const BigRational log_2 = 2 * atanh_series(BigRational(1, 3), tail_2);
  return {log_y + k * log_2, 2 * tail_y + 2 * k * tail_2};
}

TEST(LogInt, MatchesAtanhSeries) {
  for (std::uint64_t m : {2ull, 3ull, 7ull, 10ull, 97ull, 1000003ull, 4294967311ull}) {
    const auto [oracle, tail] = atanh_log(m, 300);
    for (mpfr_prec_t p : {53, 128, 256}) {
      const CertifiedReal x = log_int_at(m, p);
      EXPECT_TRUE(x.widened(BigFloat::from_int(1, 64)).contains(oracle));
      const BigRational gap = abs(x.mid().to_rational() - oracle);
      EXPECT_LE(gap, x.rad().to_rational() + tail) << m << " at " << p;
    }
  }
}

TEST(LogInt, TargetRadius) {
  const CertifiedReal x = log_int(12, 1e-40);
  EXPECT_LE(x.rad_double(), 1e-40);
  EXPECT_NEAR(x.mid_double(), 2.484906649788, 1e-12);
  EXPECT_TRUE(log_int(1, 1e-20).contains(0));
  EXPECT_THROW(log_int(0, 1e-10), std::invalid_argument);
  EXPECT_THROW(log_int_at(0, 64), std::invalid_argument);
}

TEST(LogCache, KeepsMostPrecise) {
  LogCache cache;
  EXPECT_EQ(cache.size(), 0u);
  const auto lo = cache.log(5, 64);
  const auto hi = cache.log(5, 512);
  const auto again = cache.log(5, 64);
  EXPECT_EQ(cache.size(), 1u);
  EXPECT_GE(again.precision(), 64);
  EXPECT_TRUE(lo.contains(hi.mid().to_rational()));
  EXPECT_TRUE(again.contains(hi.mid().to_rational()));
  cache.clear();
  EXPECT_EQ(cache.size(), 0u);
}

TEST(LogS, FrozenValues) {
  EXPECT_TRUE(log_S(3, 1e-15).widened(BigFloat::from_double(1e-15)).contains(decimal("1922.344656126464321")));
  const CertifiedReal s1 = log_S(1, 1e-30);
  const CertifiedReal four_log2 = log_int_at(2, 200) * BigInt(4);
  EXPECT_TRUE((s1 - four_log2).contains_zero());
  const CertifiedReal s2 = log_S(2, 1e-30);
  EXPECT_TRUE((s2 - log_int_at(12, 200) * BigInt(36)).contains_zero());
}

TEST(LogS, MagnitudeBound) {
  for (std::uint32_t n = 1; n <= 40; ++n) {
    const CertifiedReal s = log_S_at(n, 128);
    EXPECT_LT(s.upper(), BigFloat::pow2(log_S_magnitude_bits(n))) << n;
  }
}

TEST(LogS, SoundAtDoublePrecision) {
  for (std::uint32_t n : {1u, 5u, 17u, 60u}) {
    for (mpfr_prec_t p : {64, 200}) {
      const CertifiedReal coarse = log_S_at(n, p);
      const CertifiedReal fine = log_S_at(n, 2 * p);
      EXPECT_TRUE(coarse.contains(fine.lower().to_rational())) << n;
      EXPECT_TRUE(coarse.contains(fine.upper().to_rational())) << n;
    }
  }
}

TEST(FracLogS, FrozenTruncations) {
  const std::vector<std::string> frozen{"0.772588722239781", "0.456639392368011", "0.344656126464321",
                                        "0.721202938016183", "0.964508971496766", "0.554691541222948",
                                        "0.202699393092945"};
  for (std::uint32_t n = 1; n <= frozen.size(); ++n) {
    const FractionalPart f = frac_log_S(n, 12);
    EXPECT_EQ(f.truncated, frozen[n - 1].substr(0, 14)) << n;
    EXPECT_EQ(frac_log_S(n, 4).truncated, frozen[n - 1].substr(0, 6)) << n;
  }
  EXPECT_EQ(frac_log_S(3, 4).integer_part, 1922);
}

TEST(FracLogS, ConsistentWithLogS) {
  for (std::uint32_t n : {1u, 2u, 9u, 33u, 150u}) {
    const FractionalPart f = frac_log_S(n, 10);
    EXPECT_GE(f.frac.lower(), BigFloat(64)) << n;
    EXPECT_LT(f.frac.upper(), BigFloat::from_double(1.0)) << n;
    const CertifiedReal whole = log_S_at(n, f.precision);
    const CertifiedReal back = f.frac + CertifiedReal::from_int(f.integer_part, f.precision);
    EXPECT_TRUE((whole - back).contains_zero()) << n;
    const BigRational t = decimal(f.truncated);
    EXPECT_TRUE(f.frac.certainly_greater(t - BigRational(1, 1000000000)));
    EXPECT_LE(t, f.frac.lower().to_rational());
  }
}

TEST(FracLogS, Errors) {
  EXPECT_THROW(frac_log_S(0, 4), std::invalid_argument);
  EXPECT_THROW(frac_log_S(1, 0), std::invalid_argument);
  FracOptions tight;
  tight.max_precision = 64;
  try {
    frac_log_S(1, 40, tight);
    FAIL() << "expected PrecisionCapError";
  } catch (const PrecisionCapError& e) {
    EXPECT_EQ(e.reached(), 64);
  }
}

TEST(Ln, TimesLcmIsLogS) {
  for (std::uint32_t n = 1; n <= 12; ++n) {
    const CertifiedReal l = l_n(n, 1e-30);
    EXPECT_LE(l.rad_double(), 1e-30);
    const CertifiedReal scaled = l * lcm_upto(2 * n);
    EXPECT_TRUE((scaled - log_S_at(n, 200)).contains_zero()) << n;
  }
  EXPECT_THROW(l_n(0, 1e-10), std::invalid_argument);
}

TEST(GammaApprox, FrozenValues) {
  const std::vector<std::string> frozen{
      "0.55685281944005469058", "0.57699111955044428933", "0.57721278656127973248",
      "0.57721562580037387443", "0.57721566435347143996", "0.57721566489369806511",
  };
  for (std::uint32_t n = 1; n <= frozen.size(); ++n) {
    const GammaApprox g = gamma_approx(n, 1e-25);
    EXPECT_LE(g.gamma.rad_double(), 1e-25);
    EXPECT_TRUE(g.gamma.widened(BigFloat::from_double(1e-20)).contains(decimal(frozen[n - 1]))) << n;
  }
  EXPECT_EQ(render_fixed(gamma_approx(1, 1e-20).gamma.mid(), 12, DecimalRounding::kHalfEven), "0.556852819440");
}

TEST(GammaApprox, ClosedFormAtOne) {
  const CertifiedReal closed = CertifiedReal::from_rational(BigRational(5, 4), 200) - log_int_at(2, 200);
  EXPECT_TRUE((gamma_approx_at(1, 200).gamma - closed).contains_zero());
}

TEST(GammaApprox, ErrorLiesInBound) {
  const BigRational gamma = decimal(kGamma);
  for (std::uint32_t n = 1; n <= 12; ++n) {
    const GammaApprox g = gamma_approx(n, 1e-45);
    BigInt sixteen_n;
    mpz_ui_pow_ui(sixteen_n.get_mpz_t(), 16, n);
    const BigRational bound = BigRational(1) / BigRational(sixteen_n * binomial(2 * n, n));
    EXPECT_TRUE(g.gamma.certainly_less(gamma)) << n;
    EXPECT_TRUE(g.gamma.certainly_greater(gamma - bound)) << n;
    EXPECT_GT(g.method_error.mid_double(), 0.0) << n;
  }
}

TEST(GammaApprox, MonotoneConvergence) {
  std::vector<CertifiedReal> g;
  for (std::uint32_t n = 1; n <= 25; ++n) g.push_back(gamma_approx_at(n, 256).gamma);
  BigRational previous = -1;
  for (std::uint32_t n = 1; n <= 20; ++n) {
    const BigRational step = abs((g[n] - g[n - 1]).mid().to_rational());
    if (previous >= 0) {
      EXPECT_LT(step, previous) << n;
    }
    previous = step;
    const long digits = static_cast<long>(std::floor(6.0 * (n - 1) * std::log10(2.0)));
    BigInt ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, digits);
    EXPECT_LT(abs((g[n + 3] - g[n - 1]).mid().to_rational()), BigRational(1) / BigRational(ten)) << n;
  }
}

TEST(GammaReference, ContainsGamma) {
  const BigRational gamma = decimal(kGamma);
  for (std::uint32_t n : {1u, 4u, 10u}) EXPECT_TRUE(gamma_reference(n, 128).contains(gamma)) << n;
  const CertifiedReal tight = gamma_reference_bits(120);
  EXPECT_LT(tight.rad(), BigFloat::pow2(-120));
  EXPECT_TRUE(tight.contains(gamma));
}

TEST(LaplaceTerm, TracksMethodError) {
  for (std::uint32_t n : {4u, 8u, 16u}) {
    const CertifiedReal lead = laplace_leading_term(n, 0.0);
    const double ratio = gamma_approx(n, 1e-60).method_error.mid_double() /
                         (lead.mid_double() / binomial(2 * n, n).get_d());
    EXPECT_GT(ratio, 0.8) << n;
    EXPECT_LT(ratio, 1.2) << n;
  }
}

TEST(DigitCount, SmallValues) {
  using F = FactoredInteger;
  EXPECT_EQ(decimal_digit_count(F()), 1);
  EXPECT_EQ(decimal_digit_count(F({{999, 1}})), 3);
  EXPECT_EQ(decimal_digit_count(F({{1000, 1}})), 4);
  EXPECT_EQ(decimal_digit_count(F({{2, 5}, {5, 5}})), 6);
  EXPECT_EQ(decimal_digit_count(F({{10, 40}})), 41);
  EXPECT_EQ(decimal_digit_count(F({{2, 4}})), 2);
  for (std::uint32_t n = 1; n <= 5; ++n) {
    const F s = s_n_factored(n).S;
    EXPECT_EQ(decimal_digit_count(s), s.value().get_str().size()) << n;
  }
}

}  // namespace
}  // namespace gammacrit
