#include "gammacrit/analytic_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "gammacrit/bigfloat_engine.hpp"
#include "gammacrit/exact_core.hpp"

namespace gammacrit {

void QuadratureSpec::validate() const {
  if (!(tolerance > 0)) throw std::invalid_argument("QuadratureSpec: tolerance must be > 0");
  if (max_levels < 1) throw std::invalid_argument("QuadratureSpec: max_levels must be >= 1");
}

namespace {

struct Node {
  long double x, one_minus_x, weight;
  bool fresh;  // not present at the previous level
};

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kTanhSinhSpan = 6.0L;

// Nodes of the tanh-sinh rule with step 2^-level, weights include the step.
std::vector<Node> tanh_sinh_nodes(int level) {
  const long double h = std::ldexp(1.0L, -level);
  const long count = static_cast<long>(kTanhSinhSpan / h);
  std::vector<Node> nodes;
  nodes.reserve(2 * count + 1);
  for (long j = -count; j <= count; ++j) {
    const long double t = j * h;
    const long double u = kPi / 2 * std::sinh(t);
    // x = 1 / (1 + e^{-2u}), 1 - x = 1 / (1 + e^{2u})
    const long double x = 1 / (1 + std::exp(-2 * u));
    const long double s = 1 / (1 + std::exp(2 * u));
    const long double w = h * kPi * std::cosh(t) * x * s;
    if (w == 0) continue;
    nodes.push_back({x, s, w, level == 0 || (j % 2 != 0)});
  }
  return nodes;
}

std::vector<Node> midpoint_nodes(int level) {
  const long count = 4L << level;
  std::vector<Node> nodes;
  nodes.reserve(count);
  for (long i = 0; i < count; ++i) {
    const long double x = (i + 0.5L) / count;
    const long double s = (count - i - 0.5L) / count;
    nodes.push_back({x, s, 1.0L / count, true});
  }
  return nodes;
}

long double log_of_unit(long double x, long double one_minus_x) {
  return one_minus_x < 0.5L ? std::log1p(-one_minus_x) : std::log(x);
}

}  // namespace

CertifiedReal integrate_unit_square(const SquareIntegrand& f, const QuadratureSpec& spec) {
  spec.validate();
  const bool tanh_sinh = spec.transform == QuadratureTransform::kTanhSinh;
  long double previous = 0;
  long double best = 0;
  long double error = std::numeric_limits<long double>::infinity();
  for (int level = 0; level < spec.max_levels; ++level) {
    const auto nodes = tanh_sinh ? tanh_sinh_nodes(level) : midpoint_nodes(level);
    long double sum = 0, magnitude = 0;
    for (const Node& a : nodes) {
      for (const Node& b : nodes) {
        // tanh-sinh nests: reuse the coarser level's sum, add pairs with a new node
        if (tanh_sinh && level > 0 && !a.fresh && !b.fresh) continue;
        const long double term = a.weight * b.weight * f({a.x, a.one_minus_x, b.x, b.one_minus_x});
        sum += term;
        magnitude += std::fabs(term);
      }
    }
    const long double current = (tanh_sinh && level > 0) ? previous / 4 + sum : sum;
    const long double roundoff = 64 * std::numeric_limits<long double>::epsilon() * magnitude;
    if (level > 0) {
      error = std::max(std::fabs(current - previous), roundoff);
      best = current;
      if (level >= 2 && error <= spec.tolerance) {
        return {BigFloat::from_double(static_cast<double>(current)),
                radius_of_double(static_cast<double>(error) + std::fabs(static_cast<double>(current)) * 1e-16)};
      }
    }
    previous = current;
    best = current;
  }
  std::ostringstream os;
  os << "quadrature did not reach tolerance " << spec.tolerance << " within " << spec.max_levels
     << " levels (estimate " << static_cast<double>(best) << ", error " << static_cast<double>(error) << ")";
  throw QuadratureError(os.str(), static_cast<double>(best), static_cast<double>(error));
}

long double in_integrand(std::uint32_t n, const SquarePoint& p) {
  const long double xy = p.x * p.y;
  const long double one_minus_xy =
      xy > 0.5L ? p.one_minus_x + p.one_minus_y - p.one_minus_x * p.one_minus_y : 1 - xy;
  if (one_minus_xy <= 0) return 0;
  const long double neg_log_xy = -(log_of_unit(p.x, p.one_minus_x) + log_of_unit(p.y, p.one_minus_y));
  if (!(neg_log_xy > 0)) return 0;
  const long double base = p.x * p.one_minus_x * p.y * p.one_minus_y;
  return std::pow(base, static_cast<long double>(n)) / (one_minus_xy * neg_log_xy);
}

CertifiedReal quadrature_In(std::uint32_t n, const QuadratureSpec& spec) {
  if (n == 0) throw std::invalid_argument("quadrature_In: n must be >= 1");
  return integrate_unit_square([n](const SquarePoint& p) { return in_integrand(n, p); }, spec);
}

namespace {

// beta_k: coefficient of log(v+k) in F(v), from the pair terms
// 2 (-1)^{i+j} C_i C_j / (j-i) (log(v+j) - log(v+i)).
std::vector<BigRational> series_log_coefficients(std::uint32_t n, const std::vector<BigInt>& row) {
  std::vector<BigRational> beta(n + 1, BigRational(0));
  for (std::uint32_t i = 0; i <= n; ++i) {
    for (std::uint32_t j = i + 1; j <= n; ++j) {
      BigRational c(row[i] * row[j] * 2, BigInt(j - i));
      c.canonicalize();
      if ((i + j) % 2 != 0) c = -c;
      beta[j] += c;
      beta[i] -= c;
    }
  }
  return beta;
}

BigRational reciprocal_part(std::uint32_t n, std::uint64_t v, const std::vector<BigInt>& row) {
  BigRational sum = 0;
  for (std::uint32_t i = 0; i <= n; ++i) {
    BigRational t(row[i] * row[i], BigInt(static_cast<unsigned long>(v + i)));
    t.canonicalize();
    sum += t;
  }
  return sum;
}

CertifiedReal term_from_logs(std::uint32_t n, std::uint64_t v, const std::vector<BigInt>& row,
                             const std::vector<BigRational>& beta, const std::vector<CertifiedReal>& logs,
                             mpfr_prec_t precision) {
  CertifiedReal f = CertifiedReal::from_rational(reciprocal_part(n, v, row), precision);
  for (std::uint32_t k = 0; k <= n; ++k) {
    if (beta[k] != 0) f = f + logs[k] * beta[k];
  }
  return f;
}

CertifiedReal uncached_log(std::uint64_t m, mpfr_prec_t precision) {
  BigFloat mid(precision);
  const int t = mpfr_log_ui(mid.get(), m, MPFR_RNDN);
  BigFloat rad(kRadiusPrecision);
  if (t != 0) mpfr_set_ui_2exp(rad.get(), 1, mpfr_get_exp(mid.get()) - precision, MPFR_RNDU);
  return {std::move(mid), std::move(rad)};
}

BigInt factorial(std::uint32_t n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

// Half-width of the tail enclosure after summing v <= V, in long double.
long double tail_half_width(std::uint32_t n, long double log_fact_sq, long double V) {
  const long double k = std::exp(log_fact_sq) / ((2.0L * n + 1) * (2.0L * n));
  const long double upper = std::exp(-2.0L * n * std::log(V));
  const long double lower = std::exp(-2.0L * n * std::log(V + 1 + n));
  return k * (upper - lower) / 2;
}

}  // namespace

CertifiedReal series_term_In(std::uint32_t n, std::uint64_t v, mpfr_prec_t precision) {
  if (n == 0) throw std::invalid_argument("series_term_In: n must be >= 1");
  if (v == 0) throw std::invalid_argument("series_term_In: v must be >= 1");
  const auto row = binomial_row(n);
  const auto beta = series_log_coefficients(n, row);
  std::vector<CertifiedReal> logs;
  for (std::uint32_t k = 0; k <= n; ++k) logs.push_back(uncached_log(v + k, precision));
  return term_from_logs(n, v, row, beta, logs, precision);
}

CertifiedReal series_In(std::uint32_t n, double tolerance) {
  if (n == 0) throw std::invalid_argument("series_In: n must be >= 1");
  if (!(tolerance > 0)) throw std::invalid_argument("series_In: tolerance must be > 0");
  const BigInt fact = factorial(n);
  const long double log_fact_sq = 2 * std::lgamma(static_cast<long double>(n) + 1);

  // smallest V whose tail enclosure is narrow enough
  std::uint64_t hi = n + 1;
  while (tail_half_width(n, log_fact_sq, static_cast<long double>(hi)) > tolerance / 2) hi *= 2;
  std::uint64_t lo = std::max<std::uint64_t>(n + 1, hi / 2);
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (tail_half_width(n, log_fact_sq, static_cast<long double>(mid)) > tolerance / 2)
      lo = mid + 1;
    else
      hi = mid;
  }
  const std::uint64_t V = hi;

  // exact tail enclosure [K/(V+1+n)^{2n}, K/V^{2n}], K = (n!)^2/((2n+1)(2n))
  const BigRational K(fact * fact, BigInt(static_cast<unsigned long>((2UL * n + 1) * (2UL * n))));
  BigInt v_pow, w_pow;
  mpz_ui_pow_ui(v_pow.get_mpz_t(), V, 2UL * n);
  mpz_ui_pow_ui(w_pow.get_mpz_t(), V + 1 + n, 2UL * n);
  const BigRational tail_hi = K / BigRational(v_pow);
  const BigRational tail_lo = K / BigRational(w_pow);
  const BigRational tail_mid = (tail_hi + tail_lo) / 2;
  const BigRational tail_half = (tail_hi - tail_lo) / 2;

  const auto row = binomial_row(n);
  const auto beta = series_log_coefficients(n, row);
  // pair terms are as large as 4^n log V against F(v) ~ (n!)^2 / ((2n+1) v^{2n+1})
  const long double lv = std::log2(static_cast<long double>(V + n));
  const long cancel_bits = static_cast<long>(std::ceil(2.0L * n + std::log2(lv + 1) +
                                                       std::log2(2.0L * n + 1) + (2.0L * n + 1) * lv -
                                                       log_fact_sq / std::log(2.0L)));
  const long target_bits = static_cast<long>(std::ceil(-std::log2(tolerance))) + 2;
  mpfr_prec_t precision = std::max<long>(cancel_bits, 0) + target_bits +
                          static_cast<long>(std::ceil(std::log2(static_cast<double>(V)))) + 32;

  for (;;) {
    std::vector<CertifiedReal> logs;
    for (std::uint32_t k = 0; k <= n; ++k) logs.push_back(uncached_log(n + 1 + k, precision));
    CertifiedReal sum = CertifiedReal::from_int(0, precision);
    for (std::uint64_t v = n + 1; v <= V; ++v) {
      if (v > n + 1) {
        std::rotate(logs.begin(), logs.begin() + 1, logs.end());
        logs.back() = uncached_log(v + n, precision);
      }
      sum = sum + term_from_logs(n, v, row, beta, logs, precision);
    }
    if (sum.rad_double() <= tolerance / 2) {
      CertifiedReal tail = CertifiedReal::from_rational(tail_mid, precision);
      tail = tail.widened(CertifiedReal::from_rational(tail_half, kRadiusPrecision).upper());
      return sum + tail;
    }
    precision += 64;
  }
}

CertifiedReal asymptotic_In(std::uint32_t n, double relative_slack) {
  return laplace_leading_term(n, relative_slack);
}

CertifiedReal in_from_identity(std::uint32_t n, const CertifiedReal& gamma_ref) {
  if (n == 0) throw std::invalid_argument("in_from_identity: n must be >= 1");
  const mpfr_prec_t precision = std::max<mpfr_prec_t>(gamma_ref.precision(), 64) + 2 * n + 16;
  const CertifiedReal g = gamma_ref.with_precision(precision);
  return g * binomial(2 * n, n) + l_n_at(n, precision) - CertifiedReal::from_rational(a_n(n), precision);
}

CertifiedReal identity5_residual(std::uint32_t n, const CertifiedReal& I, const CertifiedReal& gamma_ref) {
  return I - in_from_identity(n, gamma_ref);
}

CertifiedReal gamma_double_integral(const QuadratureSpec& spec) {
  return integrate_unit_square(
      [](const SquarePoint& p) -> long double {
        const long double xy = p.x * p.y;
        const long double one_minus_xy =
            xy > 0.5L ? p.one_minus_x + p.one_minus_y - p.one_minus_x * p.one_minus_y : 1 - xy;
        if (one_minus_xy <= 0) return 0;
        const long double neg_log_xy = -(log_of_unit(p.x, p.one_minus_x) + log_of_unit(p.y, p.one_minus_y));
        if (!(neg_log_xy > 0)) return 0;
        return p.one_minus_x / (one_minus_xy * neg_log_xy);
      },
      spec);
}

}  // namespace gammacrit
