#include "gammacrit/criteria.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "gammacrit/analytic_oracles.hpp"
#include "gammacrit/exact_core.hpp"

namespace gammacrit {

BigRational parse_decimal(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("parse_decimal: malformed number '" + std::string(text) + "'"); };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) negative = text[pos++] == '-';
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false, seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw bad();
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw bad();
    ++pos;
    std::string exp_text(text.substr(pos));
    if (exp_text.empty()) throw bad();
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != exp_text.size()) throw bad();
  }
  BigRational q(BigInt(digits, 10));
  const long shift = exponent - fraction_digits;
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift >= 0)
    q *= BigRational(ten_pow);
  else
    q /= BigRational(ten_pow);
  return negative ? BigRational(-q) : q;
}

FracEnclosure enclose(std::uint32_t n, long digits, const FractionalPart& part) {
  FracEnclosure e;
  e.n = n;
  e.digits = digits;
  e.truncated = part.truncated;
  e.mid_text = render_fixed(part.frac.mid(), digits + kPayloadExtraDigits, DecimalRounding::kHalfEven);
  e.mid = parse_decimal(e.mid_text);
  BigRational shift = part.frac.mid().to_rational() - e.mid;
  if (shift < 0) shift = -shift;
  const BigRational total = part.frac.rad().to_rational() + shift;
  BigFloat total_up(kRadiusPrecision);
  mpfr_set_q(total_up.get(), total.get_mpq_t(), MPFR_RNDU);
  e.radius_text = render_radius(total_up);
  e.radius = parse_decimal(e.radius_text);
  return e;
}

std::string FracEnclosure::to_payload() const { return truncated + ";" + mid_text + ";" + radius_text; }

FracEnclosure FracEnclosure::from_payload(std::uint32_t n, long digits, std::string_view payload) {
  const auto first = payload.find(';');
  const auto second = first == std::string_view::npos ? first : payload.find(';', first + 1);
  if (second == std::string_view::npos || payload.find(';', second + 1) != std::string_view::npos)
    throw std::invalid_argument("FracEnclosure: payload needs three ';'-separated fields");
  FracEnclosure e;
  e.n = n;
  e.digits = digits;
  e.truncated = std::string(payload.substr(0, first));
  e.mid_text = std::string(payload.substr(first + 1, second - first - 1));
  e.radius_text = std::string(payload.substr(second + 1));
  e.mid = parse_decimal(e.mid_text);
  e.radius = parse_decimal(e.radius_text);
  parse_decimal(e.truncated);
  if (e.radius < 0) throw std::invalid_argument("FracEnclosure: negative radius");
  return e;
}

FracSource engine_source(FracOptions options) {
  return [options](std::uint32_t n, long digits) { return enclose(n, digits, frac_log_S(n, digits, options)); };
}

FactoredInteger exclusion_modulus(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("exclusion_modulus: n must be >= 1");
  const std::uint64_t two_n = 2ULL * n;
  std::vector<FactoredInteger::Factor> factors;
  for (std::uint32_t p : primes_upto(static_cast<std::uint32_t>(two_n))) {
    long exponent = 0;
    // d_{2n}: largest power of p up to 2n
    for (std::uint64_t q = p; q <= two_n; q *= p) ++exponent;
    // C(2n,n): Legendre, floor(2n/p^i) - 2 floor(n/p^i)
    for (std::uint64_t q = p; q <= two_n; q *= p) exponent += static_cast<long>(two_n / q - 2 * (n / q));
    factors.emplace_back(p, BigInt(exponent));
  }
  return FactoredInteger(std::move(factors));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "true";
    case Verdict::kFails: return "false";
    case Verdict::kUndecided: return "undecided";
  }
  return "?";
}

namespace {

BigRational power_of_two_inverse(std::uint32_t n) {
  BigInt d = 1;
  d <<= n;
  return BigRational(1, d);
}

std::string describe_modulus(const FactoredInteger& m) {
  std::string text = m.to_string();
  // print the value too when it is short
  const std::string digits = m.value().get_str();
  if (digits.size() <= 40) text += " = " + digits;
  return text;
}

// Escalates digits until `decide` returns a verdict; undecided on cap.
template <class Decide>
Verdict escalate(long start, const CriteriaOptions& options, Decide&& decide) {
  for (long d = start; d <= options.max_digits; d *= 2) {
    try {
      const Verdict v = decide(d);
      if (v != Verdict::kUndecided) return v;
    } catch (const PrecisionCapError&) {
      return Verdict::kUndecided;
    }
  }
  return Verdict::kUndecided;
}

}  // namespace

ExclusionRecord check_corollary6(std::uint32_t n, const FracSource& source, const CriteriaOptions& options) {
  if (n == 0) throw std::invalid_argument("check_corollary6: n must be >= 1");
  ExclusionRecord record;
  record.n = n;
  record.threshold = power_of_two_inverse(n);
  record.modulus = exclusion_modulus(n);
  record.verdict = escalate(options.start_digits, options, [&](long d) {
    FracEnclosure e = source(n, d);
    Verdict v = Verdict::kUndecided;
    if (e.lower() >= record.threshold)
      v = Verdict::kHolds;
    else if (e.upper() < record.threshold)
      v = Verdict::kFails;
    record.frac = std::move(e);
    return v;
  });
  if (record.holds()) {
    std::ostringstream os;
    os << "{log S_" << n << "} = " << record.frac->truncated << "... >= 2^-" << n
       << ", so IF gamma = p/q with integers p, q THEN q does not divide d_" << 2 * n << " * C(" << 2 * n
       << "," << n << ") = " << describe_modulus(record.modulus) << "; in particular |q| > " << 2 * n;
    record.statement = os.str();
  }
  return record;
}

ConsecutiveCheck check_corollary8(std::uint32_t n, const FracSource& source, const CriteriaOptions& options) {
  if (n == 0) throw std::invalid_argument("check_corollary8: n must be >= 1");
  ConsecutiveCheck check;
  check.n = n;
  check.applicable = lcm_upto(2 * n) == lcm_upto(2 * n + 2);
  if (!check.applicable) return check;
  check.verdict = escalate(options.start_digits, options, [&](long d) {
    const FracEnclosure a = source(n, d);
    const FracEnclosure b = source(n + 1, d);
    if (a.upper() <= b.lower() * 16) return Verdict::kHolds;
    if (a.lower() > b.upper() * 16) return Verdict::kFails;
    return Verdict::kUndecided;
  });
  if (check.verdict == Verdict::kHolds) {
    std::ostringstream os;
    os << "d_" << 2 * n << " = d_" << 2 * n + 2 << " and {log S_" << n << "} <= 16 {log S_" << n + 1
       << "}, so IF gamma = p/q with integers p, q > 0 THEN q > " << 2 * n + 2;
    check.statement = os.str();
  }
  return check;
}

TrendReport trend_corollary7(std::uint32_t n_max) {
  if (n_max == 0) throw std::invalid_argument("trend_corollary7: n_max must be >= 1");
  // gamma about 30 digits tighter than the smallest I_n / C(2n,n) in range
  const CertifiedReal gamma_ref = gamma_reference_bits(6L * n_max + 110);
  TrendReport report;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    const CertifiedReal in = in_from_identity(n, gamma_ref);
    BigInt scale = n;
    scale <<= 4 * n;
    report.points.push_back({n, in * scale});
  }
  BigFloat pi(128);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  const CertifiedReal pi_ball(pi, BigFloat::pow2(-125));
  report.target = pi_ball / (log_int_at(2, 128) * BigInt(6));
  return report;
}

std::optional<BigRational> SurveyRow::cumulative_average() const {
  if (cumulative_count == 0) return std::nullopt;
  return cumulative_sum / BigRational(cumulative_count);
}

void SurveyAccumulator::add(SurveyRow& row) {
  if (row.frac) {
    sum += parse_decimal(row.frac->truncated);
    ++count;
  }
  row.cumulative_sum = sum;
  row.cumulative_count = count;
}

SurveyRow evaluate_row(std::uint32_t n, long digits, const FracSource& source, const CriteriaOptions& options) {
  SurveyRow row;
  row.n = n;
  try {
    row.frac = source(n, digits);
  } catch (const PrecisionCapError&) {
    row.frac.reset();
  }
  CriteriaOptions row_options = options;
  row_options.start_digits = digits;
  const ExclusionRecord record = check_corollary6(n, source, row_options);
  row.corollary6 = record.verdict;
  row.modulus = record.modulus;
  const ConsecutiveCheck next = check_corollary8(n, source, row_options);
  row.corollary8_applicable = next.applicable;
  row.corollary8 = next.verdict;
  return row;
}

namespace {

// Thread-safe memo in front of a FracSource; rows n and n+1 share values.
class MemoSource {
 public:
  explicit MemoSource(FracSource inner) : inner_(std::move(inner)) {}

  FracEnclosure operator()(std::uint32_t n, long digits) {
    {
      std::lock_guard lock(mutex_);
      auto it = memo_.find({n, digits});
      if (it != memo_.end()) return it->second;
    }
    FracEnclosure e = inner_(n, digits);
    std::lock_guard lock(mutex_);
    return memo_.emplace(std::make_pair(n, digits), std::move(e)).first->second;
  }

 private:
  FracSource inner_;
  std::mutex mutex_;
  std::map<std::pair<std::uint32_t, long>, FracEnclosure> memo_;
};

}  // namespace

std::vector<SurveyRow> survey(std::uint32_t n_from, std::uint32_t n_to, long digits, const FracSource& source,
                              unsigned threads, const CriteriaOptions& options) {
  if (n_from == 0 || n_from > n_to) throw std::invalid_argument("survey: need 1 <= n_from <= n_to");
  if (digits < 1) throw std::invalid_argument("survey: digits must be >= 1");
  auto memo = std::make_shared<MemoSource>(source);
  const FracSource shared = [memo](std::uint32_t n, long d) { return (*memo)(n, d); };

  const std::size_t count = static_cast<std::size_t>(n_to - n_from) + 1;
  std::vector<SurveyRow> rows(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        rows[i] = evaluate_row(n_from + static_cast<std::uint32_t>(i), digits, shared, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SurveyAccumulator acc;
  for (auto& row : rows) acc.add(row);
  return rows;
}

std::string survey_csv_header() { return "n,frac,radius,threshold,holds,modulus,d2n_equal_d2n2,cor8_holds,cum_avg"; }

std::string survey_csv_line(const SurveyRow& row, long digits) {
  std::ostringstream os;
  os << row.n << ',' << (row.frac ? row.frac->truncated : "") << ',' << (row.frac ? row.frac->radius_text : "")
     << ",2^-" << row.n << ',' << to_string(row.corollary6) << ',' << row.modulus.to_string() << ','
     << (row.corollary8_applicable ? "true" : "false") << ','
     << (row.corollary8_applicable ? to_string(row.corollary8) : "n/a") << ',';
  if (auto avg = row.cumulative_average()) os << render_fixed(*avg, digits, DecimalRounding::kHalfEven);
  return os.str();
}

}  // namespace gammacrit
