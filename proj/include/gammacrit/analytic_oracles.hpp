#pragma once

// Independent numerical routes to I_n: a 2D quadrature of the Beukers-type
// integral, the tail series with closed-form partial-fraction terms, and
// the Laplace leading term. Also the residual of
//   I_n = C(2n,n) gamma + L_n - A_n.

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "gammacrit/certified_real.hpp"

namespace gammacrit {

enum class QuadratureTransform {
  kTanhSinh,  // double-exponential nodes clustered at both ends of [0,1]
  kMidpoint,  // plain composite midpoint rule, for comparison only
};

struct QuadratureSpec {
  double tolerance = 1e-12;
  int max_levels = 8;
  QuadratureTransform transform = QuadratureTransform::kTanhSinh;

  void validate() const;
};

/// Raised when the level-to-level error estimate never drops below the
/// tolerance. Carries the best estimate reached.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double achieved_error)
      : std::runtime_error(what), estimate_(estimate), achieved_error_(achieved_error) {}
  double estimate() const { return estimate_; }
  double achieved_error() const { return achieved_error_; }

 private:
  double estimate_;
  double achieved_error_;
};

/// A point of the unit square with complements carried separately, so that
/// 1 - x is accurate when x is close to 1.
struct SquarePoint {
  long double x, one_minus_x, y, one_minus_y;
};

using SquareIntegrand = std::function<long double(const SquarePoint&)>;

/// Integral of f over [0,1]^2 with a heuristic (level-difference) error
/// estimate as radius.
CertifiedReal integrate_unit_square(const SquareIntegrand& f, const QuadratureSpec& spec);

/// (x(1-x)y(1-y))^n / ((1-xy)(-log xy)); 0 at the corner (x,y) = (1,1).
long double in_integrand(std::uint32_t n, const SquarePoint& p);

/// I_n by 2D quadrature.
CertifiedReal quadrature_In(std::uint32_t n, const QuadratureSpec& spec = {});

/// F(v) = int_v^inf (n!/(x(x+1)...(x+n)))^2 dx in closed form, at `precision` bits.
CertifiedReal series_term_In(std::uint32_t n, std::uint64_t v, mpfr_prec_t precision);

/// sum_{v=n+1}^inf F(v) with a rigorous tail enclosure; radius <= tolerance.
CertifiedReal series_In(std::uint32_t n, double tolerance);

/// Leading term 4^{-2n} pi / (3 n log 4); radius = relative_slack * value.
CertifiedReal asymptotic_In(std::uint32_t n, double relative_slack = 1.0);

/// C(2n,n) gamma + L_n - A_n, i.e. I_n reconstructed from a gamma enclosure.
CertifiedReal in_from_identity(std::uint32_t n, const CertifiedReal& gamma_ref);

/// I - (C(2n,n) gamma_ref + L_n - A_n); contains 0 when everything is right.
CertifiedReal identity5_residual(std::uint32_t n, const CertifiedReal& I, const CertifiedReal& gamma_ref);

/// gamma = int int -(1-x) / ((1-xy) log xy) dx dy.
CertifiedReal gamma_double_integral(const QuadratureSpec& spec = {1e-8, 9, QuadratureTransform::kTanhSinh});

}  // namespace gammacrit
