#pragma once

// Irrationality criteria built on {log S_n}: denominator-exclusion records,
// the consecutive-index test, the I_n growth diagnostic, and surveys.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gammacrit/bigfloat_engine.hpp"
#include "gammacrit/factored_integer.hpp"

namespace gammacrit {

/// {log S_n} as an exact rational ball, together with its certified
/// truncated digits. Produced from a FractionalPart, or re-read from its
/// text form; both routes give the same value, so cached and fresh
/// results make identical decisions.
struct FracEnclosure {
  std::uint32_t n = 0;
  long digits = 0;
  std::string truncated;    // e.g. "0.7725"
  std::string mid_text;     // midpoint, kPayloadExtraDigits more digits
  std::string radius_text;  // e.g. "3.1e-15", covers the midpoint rounding
  BigRational mid;
  BigRational radius;

  BigRational lower() const { return mid - radius; }
  BigRational upper() const { return mid + radius; }

  /// "truncated;mid;radius"
  std::string to_payload() const;
  /// Throws std::invalid_argument on malformed text.
  static FracEnclosure from_payload(std::uint32_t n, long digits, std::string_view payload);
};

/// Decimal digits kept in the midpoint beyond the requested ones.
inline constexpr long kPayloadExtraDigits = 12;

FracEnclosure enclose(std::uint32_t n, long digits, const FractionalPart& part);

/// Where fractional parts come from (the engine directly, or a cache).
/// May throw PrecisionCapError.
using FracSource = std::function<FracEnclosure(std::uint32_t n, long digits)>;

/// The engine, with the given options, as a FracSource.
FracSource engine_source(FracOptions options = {});

/// Exponents of d_{2n} C(2n,n) over primes p <= 2n.
FactoredInteger exclusion_modulus(std::uint32_t n);

enum class Verdict { kHolds, kFails, kUndecided };
const char* to_string(Verdict v);

struct ExclusionRecord {
  std::uint32_t n = 0;
  std::optional<FracEnclosure> frac;  // the enclosure that settled the comparison
  BigRational threshold;              // 2^{-n}
  Verdict verdict = Verdict::kUndecided;
  FactoredInteger modulus;            // d_{2n} C(2n,n)
  std::string statement;              // only when verdict == kHolds

  bool holds() const { return verdict == Verdict::kHolds; }
  bool decided() const { return verdict != Verdict::kUndecided; }
};

struct CriteriaOptions {
  long start_digits = 6;
  /// Give up (undecided) once this many digits did not settle a comparison.
  long max_digits = 4096;
};

/// {log S_n} >= 2^{-n}, decided by interval; on success, records that a
/// rational gamma = p/q would need q not dividing d_{2n} C(2n,n).
ExclusionRecord check_corollary6(std::uint32_t n, const FracSource& source = engine_source(),
                                 const CriteriaOptions& options = {});

struct ConsecutiveCheck {
  std::uint32_t n = 0;
  bool applicable = false;  // d_{2n} == d_{2n+2}
  Verdict verdict = Verdict::kUndecided;  // {log S_n} <= 16 {log S_{n+1}}
  std::string statement;
};

ConsecutiveCheck check_corollary8(std::uint32_t n, const FracSource& source = engine_source(),
                                  const CriteriaOptions& options = {});

struct TrendPoint {
  std::uint32_t n = 0;
  CertifiedReal scaled;  // 4^{2n} n I_n
};

struct TrendReport {
  std::vector<TrendPoint> points;
  CertifiedReal target;  // pi / (6 log 2)
};

/// 4^{2n} n I_n for n = 1..n_max, with I_n rebuilt from the identity and a
/// gamma enclosure far tighter than 16^{-n}. Diagnostic only.
TrendReport trend_corollary7(std::uint32_t n_max);

struct SurveyRow {
  std::uint32_t n = 0;
  std::optional<FracEnclosure> frac;  // at the survey's digit count; empty if undecided
  Verdict corollary6 = Verdict::kUndecided;
  FactoredInteger modulus;
  bool corollary8_applicable = false;
  Verdict corollary8 = Verdict::kUndecided;
  BigRational cumulative_sum;  // of emitted truncated frac values
  std::uint32_t cumulative_count = 0;

  bool decided() const { return frac.has_value() && corollary6 != Verdict::kUndecided; }
  std::optional<BigRational> cumulative_average() const;
};

/// Running mean of the truncated frac values, in row order.
struct SurveyAccumulator {
  BigRational sum = 0;
  std::uint32_t count = 0;
  void add(SurveyRow& row);
};

/// Everything in a row except the running mean; independent of other rows.
SurveyRow evaluate_row(std::uint32_t n, long digits, const FracSource& source,
                       const CriteriaOptions& options = {});

/// Rows n_from..n_to in ascending order, computed on `threads` workers
/// (0 = hardware concurrency). Undecided rows do not stop the survey.
std::vector<SurveyRow> survey(std::uint32_t n_from, std::uint32_t n_to, long digits,
                              const FracSource& source = engine_source(), unsigned threads = 0,
                              const CriteriaOptions& options = {});

/// CSV header and row rendering.
std::string survey_csv_header();
std::string survey_csv_line(const SurveyRow& row, long digits);

/// Exact value of a decimal string such as "-0.0123" or "3.1e-15".
BigRational parse_decimal(std::string_view text);

}  // namespace gammacrit
