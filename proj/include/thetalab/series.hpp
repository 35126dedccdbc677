#pragma once
// Truncated formal power series over exact rationals, the closed-form
// integer families (Fibonacci, binomial, Catalan), the generating
// functions behind the verification suites, and closed-formula
// evaluation with validity-range metadata.
//
// Convention used throughout: F_0 = 0, F_1 = F_2 = 1.

#include <boost/multiprecision/cpp_int.hpp>

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thetalab/patterns.hpp"

namespace thetalab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt fib(int n);                          // n >= 0
BigInt binom(long long n, long long k);     // 0 outside 0 <= k <= n
BigInt catalan(int n);                      // n >= 0

// A series is its coefficient list c_0..c_order; arithmetic truncates to
// the smaller order of the two operands.
class Series {
public:
  explicit Series(int order);  // zero series, order >= 0
  static Series one(int order);
  static Series x(int order);
  // Polynomial from low-degree coefficients, zero-padded to `order`.
  static Series poly(std::initializer_list<long long> coeffs, int order);
  static Series from_coeffs(std::vector<BigRat> coeffs);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const BigRat& coeff(int k) const { return c_.at(static_cast<std::size_t>(k)); }
  BigRat& coeff(int k) { return c_.at(static_cast<std::size_t>(k)); }
  Series truncated(int order) const;

  friend bool operator==(const Series&, const Series&) = default;

private:
  std::vector<BigRat> c_;  // c_[k] = coefficient of x^k
};

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series series_mul(const Series& a, const Series& b);

// Requires ord_x(b) <= ord_x(a) and exact cancellation of the common
// valuation; the result has order min(a,b) - ord_x(b).
Series series_div(const Series& a, const Series& b);

// Newton iteration for sqrt(a); requires a(0) = 1.
Series series_sqrt(const Series& a);

Series catalan_series(int order);
Series compose_x_squared(const Series& s, int order);  // s(x^2), truncated

// Coefficients of num/den where den induces a linear recurrence on the
// quotient (den(0) != 0).
std::vector<BigRat> rational_gf_coeffs(const Series& num, const Series& den, int order);

// Throws std::runtime_error if any coefficient has a denominator.
std::vector<BigInt> integer_coefficients(const Series& s);

// The named generating functions exercised by the suites.
enum class GfId {
  t132,        // x / (1 - x - x^2)^2
  t213,        // (2x^5 + 9x^4 - 8x^3 - 10x^2 + 13x - 4) / ((x-1)^3 (1 - x - x^2))
  t321,        // 2x^2 / (2x(1-x) - 1 + sqrt(1 - 4x^2))
  t321_dual,   // A/(1-A), A = (x - x^3 c(x^2)) / (1 - x - x^2 c(x^2))
  a321,        // A above: irreducible-by-size series
  f2_231_312,  // 1 / (1 - x - x^2 - x^4)
  f3,          // 1 / (1 - x - x^2 - 2x^3)           (conjectured)
  f4,          // 1 / (1 - x - x^2 - 2x^4 - x^5 - x^6) (conjectured)
  f5,          // 1 / (1 - x - x^2)                   (conjectured)
};
std::optional<GfId> gf_id_from_name(std::string_view name);
std::string gf_name(GfId id);
Series gf_series(GfId id, int order);
std::vector<BigInt> gf_coeffs(GfId id, int order);

// ---- closed formulas with validity ranges ------------------------------

enum class Family { t, t_k, f, f_all_lower_bound, a_irred, a_ni };
enum class FormulaStatus { proven, conjectured, out_of_range };
std::string_view to_string(FormulaStatus s);

struct FormulaResult {
  BigInt value;
  FormulaStatus status = FormulaStatus::out_of_range;
  std::string source;  // the identity being evaluated, in plain math text
};

// Evaluates the closed formula for the requested family at (sigma, k, n)
// and reports whether that point is inside the proven range, inside a
// conjectured range, or outside both (value still computed best-effort).
// Throws std::invalid_argument for combinations with no known formula.
FormulaResult formula_eval(Family family, const std::optional<Pattern>& sigma, int k, int n,
                           std::optional<int> i = std::nullopt);

}  // namespace thetalab
