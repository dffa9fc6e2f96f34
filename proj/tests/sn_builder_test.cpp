#include "gammacrit/sn_builder.hpp"

#include <stdexcept>
#include <vector>

#include "gammacrit/exact_core.hpp"
#include "gtest/gtest.h"

namespace gammacrit {
namespace {

std::vector<BigInt> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

TEST(SnBuilder, FrozenExponentTables) {
  const std::vector<std::vector<BigInt>> frozen{
      ints({4}),
      ints({36, 36}),
      ints({220, 760, 220}),
      ints({3500, 25900, 25900, 3500}),
      ints({11508, 148008, 316008, 148008, 11508}),
      ints({135828, 2697156, 9973656, 9973656, 2697156, 135828}),
  };
  for (std::uint32_t n = 1; n <= frozen.size(); ++n) {
    for (auto formula : {LinearFormula::kTripleSum, LinearFormula::kSignedPairs, LinearFormula::kHarmonicDiff}) {
      EXPECT_EQ(exponent_table(n, formula).exponents, frozen[n - 1]) << n << " " << to_string(formula);
    }
  }
}

TEST(SnBuilder, ThreeFormulasAgree) {
  for (std::uint32_t n = 1; n <= 200; n += (n < 60 ? 1 : 9)) {
    const auto a = exponent_table(n, LinearFormula::kTripleSum);
    const auto b = exponent_table(n, LinearFormula::kSignedPairs);
    const auto c = exponent_table(n, LinearFormula::kHarmonicDiff);
    ASSERT_EQ(a, b) << n;
    ASSERT_EQ(b, c) << n;
  }
}

TEST(SnBuilder, ExponentsPositiveAndDivisible) {
  for (std::uint32_t n = 1; n <= 120; ++n) {
    const auto t = exponent_table(n);
    const BigInt two_r = 2 * lcm_upto(2 * n) / lcm_upto(n);
    for (std::uint32_t k = 1; k <= n; ++k) {
      ASSERT_GT(t[k], 0) << n << " " << k;
      ASSERT_EQ(t[k] % two_r, 0) << n << " " << k;
    }
  }
}

TEST(SnBuilder, IndexingIsOneBased) {
  const auto t = exponent_table(3);
  EXPECT_EQ(t[1], 220);
  EXPECT_EQ(t[2], 760);
  EXPECT_THROW(t[0], std::out_of_range);
  EXPECT_THROW(t[4], std::out_of_range);
}

TEST(SnBuilder, RejectsZero) {
  EXPECT_THROW(exponent_table(0), std::invalid_argument);
  EXPECT_THROW(s_n_factored(0), std::invalid_argument);
  EXPECT_THROW(linear_form_coefficients(0, LinearFormula::kTripleSum), std::invalid_argument);
}

TEST(SnBuilder, Factorization) {
  const auto f = s_n_factored(3);
  EXPECT_EQ(f.S.to_string(), "4^220 · 5^760 · 6^220");
  EXPECT_EQ(f.r, 10);
  EXPECT_EQ(f.s.to_string(), "4^11 · 5^38 · 6^11");
  EXPECT_EQ(s_n_factored(1).S.value(), 16);
  EXPECT_EQ(s_n_factored(2).S.value(), BigInt("708801874985091845381344307009569161216"));
}

TEST(SnBuilder, GroupedRendering) {
  const std::vector<std::string> expected{
      "2^4",
      "(12^3)^12",
      "(24^11 · 5^38)^20",
      "(40^25 · 42^185)^140",
      "(60^137 · 63^1762 · 8^3762)^84",
      "(84^147 · 88^2919 · 90^10794)^924",
  };
  for (std::uint32_t n = 1; n <= expected.size(); ++n) EXPECT_EQ(render_grouped(s_n_factored(n)), expected[n - 1]);
}

TEST(SnBuilder, GroupedValueMatchesS) {
  for (std::uint32_t n = 1; n <= 12; ++n) {
    const auto f = s_n_factored(n);
    std::vector<FactoredInteger::Factor> powered;
    for (const auto& [base, e] : f.s.factors()) powered.emplace_back(base, e * 2 * f.r);
    EXPECT_TRUE(FactoredInteger::from_unsorted(powered).same_value(f.S)) << n;
  }
}

TEST(SnBuilder, HarmonicIdentities) {
  for (std::uint32_t n = 1; n <= 100; n += (n < 30 ? 1 : 7)) {
    for (std::uint32_t k = 0; k < n; ++k) ASSERT_TRUE(verify_lemma11_14(n, k)) << n << " " << k;
    for (std::uint32_t k = 1; k <= n; ++k) {
      ASSERT_TRUE(verify_lemma11_15(n, k)) << n << " " << k;
      ASSERT_TRUE(verify_prop10(n, k)) << n << " " << k;
    }
  }
}

TEST(SnBuilder, IdentityIndexRanges) {
  EXPECT_THROW(verify_lemma11_14(3, 3), std::invalid_argument);
  EXPECT_THROW(verify_lemma11_15(3, 0), std::invalid_argument);
  EXPECT_THROW(verify_lemma11_15(3, 4), std::invalid_argument);
  EXPECT_THROW(verify_prop10(3, 0), std::invalid_argument);
  EXPECT_THROW(verify_prop10(0, 0), std::invalid_argument);
}

TEST(SnBuilder, LeftSideRecursion) {
  for (std::uint32_t n = 2; n <= 60; ++n) {
    EXPECT_EQ(lemma11_left(n, 0), lemma11_left(n - 1, 0) + BigRational(1, n)) << n;
    for (std::uint32_t k = 1; k < n; ++k)
      ASSERT_EQ(lemma11_left(n, k), lemma11_left(n - 1, k) + lemma11_left(n - 1, k - 1)) << n << " " << k;
  }
}

}  // namespace
}  // namespace gammacrit
