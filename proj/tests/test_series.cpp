#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "thetalab/series.hpp"

using namespace thetalab;

namespace {

std::vector<long long> small(const std::vector<BigInt>& v) {
  std::vector<long long> out;
  for (const BigInt& x : v) out.push_back(x.convert_to<long long>());
  return out;
}

}  // namespace

TEST_CASE("integer families") {
  CHECK(fib(0) == 0);
  CHECK(fib(1) == 1);
  CHECK(fib(2) == 1);
  CHECK(fib(3) == 2);
  CHECK(fib(4) == 3);
  CHECK(fib(7) == 13);
  CHECK(fib(10) == 55);
  CHECK(fib(90) == BigInt("2880067194370816120"));

  CHECK(binom(0, 0) == 1);
  CHECK(binom(4, 2) == 6);
  CHECK(binom(5, 0) == 1);
  CHECK(binom(5, 5) == 1);
  CHECK(binom(5, 6) == 0);
  CHECK(binom(5, -1) == 0);
  CHECK(binom(-1, 0) == 0);
  CHECK(binom(60, 30) == BigInt("118264581564861424"));

  CHECK(catalan(0) == 1);
  CHECK(catalan(1) == 1);
  CHECK(catalan(2) == 2);
  CHECK(catalan(3) == 5);
  CHECK(catalan(4) == 14);
  CHECK(catalan(10) == 16796);
}

TEST_CASE("series arithmetic basics") {
  const Series f = Series::poly({1, -1, -1}, 8);
  const Series inv = series_div(Series::one(8), f);
  // 1/(1-x-x^2) carries the Fibonacci numbers F_{k+1}
  for (int k = 0; k <= 8; ++k) CHECK(inv.coeff(k) == BigRat(fib(k + 1)));
  CHECK(series_mul(f, inv) == Series::one(8));

  const Series x = Series::x(8);
  CHECK(series_mul(x, x).coeff(2) == 1);
  CHECK((f + x).coeff(1) == 0);
  CHECK((f - x).coeff(1) == -2);
  CHECK(f.truncated(2).order() == 2);

  // division cancels a common valuation
  const Series num = Series::poly({0, 0, 2}, 6);     // 2x^2
  const Series den = Series::poly({0, 2, -2}, 6);    // 2x(1-x)
  const Series q = series_div(num, den);             // x/(1-x)
  CHECK(q.order() == 5);
  for (int k = 1; k <= 5; ++k) CHECK(q.coeff(k) == 1);
  CHECK(q.coeff(0) == 0);

  CHECK_THROWS_AS(series_div(Series::one(4), Series::poly({0, 1}, 4)), std::invalid_argument);
  CHECK_THROWS_AS(series_div(Series::one(4), Series(4)), std::invalid_argument);
}

TEST_CASE("series square root by Newton iteration") {
  const Series a = Series::poly({1, -4}, 12);
  const Series s = series_sqrt(a);
  CHECK(series_mul(s, s) == a);
  // sqrt(1-4x) = 1 - 2x c(x), so coefficient k >= 1 is -2 Catalan(k-1)
  for (int k = 1; k <= 12; ++k) CHECK(s.coeff(k) == BigRat(-2 * catalan(k - 1)));

  const Series c = catalan_series(12);
  CHECK(series_mul(series_mul(Series::x(12), c), c) + Series::one(12) == c);  // c = 1 + x c^2

  const Series b = series_sqrt(Series::poly({1, 0, -4}, 13));
  CHECK(series_mul(b, b) == Series::poly({1, 0, -4}, 13));

  CHECK_THROWS_AS(series_sqrt(Series::poly({2}, 3)), std::invalid_argument);
}

TEST_CASE("rational coefficient extraction matches series division") {
  const Series num = Series::poly({-4, 13, -10, -8, 9, 2}, 14);
  const Series den = series_mul(Series::poly({-1, 3, -3, 1}, 14), Series::poly({1, -1, -1}, 14));
  const auto coeffs = rational_gf_coeffs(num, den, 14);
  const Series direct = gf_series(GfId::t213, 14);
  for (int k = 0; k <= 14; ++k) CHECK(coeffs[static_cast<std::size_t>(k)] == direct.coeff(k));
  CHECK_THROWS_AS(rational_gf_coeffs(num, Series::poly({0, 1}, 3), 3), std::invalid_argument);
}

TEST_CASE("generating functions reproduce the frozen series openings") {
  CHECK(small(gf_coeffs(GfId::t132, 5)) == std::vector<long long>{0, 1, 2, 5, 10, 20});
  CHECK(small(gf_coeffs(GfId::t321, 4)) == std::vector<long long>{0, 1, 2, 4, 9});
  CHECK(small(gf_coeffs(GfId::f2_231_312, 4)) == std::vector<long long>{1, 1, 2, 3, 6});
  CHECK(small(gf_coeffs(GfId::f5, 6)) == std::vector<long long>{1, 1, 2, 3, 5, 8, 13});
  CHECK(small(gf_coeffs(GfId::f3, 6)) == std::vector<long long>{1, 1, 2, 5, 9, 18, 37});
  CHECK(small(gf_coeffs(GfId::f4, 6)) == std::vector<long long>{1, 1, 2, 3, 7, 13, 26});
}

TEST_CASE("the closed form and the dual assembly of the 321 series agree") {
  const auto closed = gf_coeffs(GfId::t321, 24);
  const auto dual = gf_coeffs(GfId::t321_dual, 24);
  CHECK(closed == dual);
}

TEST_CASE("irreducible-family series carries the central binomials") {
  const auto a = gf_coeffs(GfId::a321, 16);
  CHECK(a[0] == 0);
  CHECK(a[1] == 1);
  for (int n = 2; n <= 16; ++n) {
    CHECK(a[static_cast<std::size_t>(n)] == binom(n - 2, (n - 2) / 2));
  }
}

TEST_CASE("t213 series equals its closed formula from n = 2 on") {
  const auto c = gf_coeffs(GfId::t213, 16);
  for (int n = 2; n <= 16; ++n) {
    CHECK(c[static_cast<std::size_t>(n)] == 2 * fib(n + 2) + n * n - 6 * n + 4);
  }
}

TEST_CASE("integer extraction rejects fractional coefficients") {
  std::vector<BigRat> cs = {BigRat(1), BigRat(1, 2)};
  CHECK_THROWS_AS(integer_coefficients(Series::from_coeffs(cs)), std::runtime_error);
}

TEST_CASE("gf ids round trip through names") {
  for (GfId id : {GfId::t132, GfId::t213, GfId::t321, GfId::t321_dual, GfId::a321,
                  GfId::f2_231_312, GfId::f3, GfId::f4, GfId::f5}) {
    CHECK(gf_id_from_name(gf_name(id)) == id);
  }
  CHECK_FALSE(gf_id_from_name("nope").has_value());
}

TEST_CASE("formula evaluation: validity ranges and values") {
  const auto p132 = Pattern::parse("132");
  const auto p213 = Pattern::parse("213");
  const auto p231 = Pattern::parse("231");
  const auto p312 = Pattern::parse("312");
  const auto p321 = Pattern::parse("321");
  const auto p123 = Pattern::parse("123");

  auto r = formula_eval(Family::t, p123, 1, 12);
  CHECK(r.value == 0);
  CHECK(r.status == FormulaStatus::proven);
  r = formula_eval(Family::t, p123, 1, 9);
  CHECK(r.status == FormulaStatus::out_of_range);

  CHECK(formula_eval(Family::t, p213, 1, 2).value == 2);
  CHECK(formula_eval(Family::t, p213, 1, 6).value == 46);
  CHECK(formula_eval(Family::t, p132, 1, 5).value == 20);
  CHECK(formula_eval(Family::t, p132, 1, 0).status == FormulaStatus::out_of_range);
  CHECK(formula_eval(Family::t, p231, 1, 5).value == 16);
  CHECK(formula_eval(Family::t, p312, 1, 8).value == 128);
  CHECK(formula_eval(Family::t, p321, 1, 8).value == 243);

  r = formula_eval(Family::t_k, p213, 2, 6);
  CHECK(r.value == 21);
  CHECK(r.status == FormulaStatus::proven);
  r = formula_eval(Family::t_k, p213, 3, 4);
  CHECK(r.value == 9);
  CHECK(r.status == FormulaStatus::proven);
  CHECK(formula_eval(Family::t_k, p213, 4, 10).value == 14);
  CHECK(formula_eval(Family::t_k, p213, 6, 9).value == 7);
  CHECK(formula_eval(Family::t_k, p321, 2, 6).value == 13);
  CHECK(formula_eval(Family::t_k, p231, 3, 10).value == 89);
  CHECK(formula_eval(Family::t_k, p312, 2, 1).value == 1);

  r = formula_eval(Family::t_k, p132, 2, 9);
  CHECK(r.value == 59);
  CHECK(r.status == FormulaStatus::conjectured);
  CHECK(formula_eval(Family::t_k, p132, 2, 10).value == 75);
  CHECK(formula_eval(Family::t_k, p132, 2, 8).value == 44);
  // linear tails for 132, onsets pinned by exhaustive sweeps to n = 12
  r = formula_eval(Family::t_k, p132, 3, 2);
  CHECK(r.value == 2);
  CHECK(r.status == FormulaStatus::conjectured);
  CHECK(formula_eval(Family::t_k, p132, 3, 12).value == 32);
  CHECK(formula_eval(Family::t_k, p132, 4, 3).value == 5);
  CHECK(formula_eval(Family::t_k, p132, 4, 2).status == FormulaStatus::out_of_range);
  CHECK(formula_eval(Family::t_k, p132, 5, 4).value == 6);
  CHECK(formula_eval(Family::t_k, p132, 6, 3).value == 5);
  CHECK(formula_eval(Family::t_k, p132, 8, 12).value == 5);

  r = formula_eval(Family::f, p132, 2, 7);
  CHECK(r.value == 3);
  CHECK(r.status == FormulaStatus::proven);
  CHECK(formula_eval(Family::f, p123, 1, 5).value == 0);
  CHECK(formula_eval(Family::f, p312, 1, 8).value == 34);
  CHECK(formula_eval(Family::f, p321, 2, 6).value == 13);
  CHECK(formula_eval(Family::f, p231, 2, 6).value == 18);
  CHECK(formula_eval(Family::f, p213, 2, 9).value == 4);
  r = formula_eval(Family::f, p213, 12, 9);
  CHECK(r.value == 16);
  CHECK(r.status == FormulaStatus::conjectured);
  CHECK(formula_eval(Family::f, p132, 14, 8).value == 9);
  CHECK(formula_eval(Family::f, p132, 14, 7).status == FormulaStatus::out_of_range);

  r = formula_eval(Family::f_all_lower_bound, std::nullopt, 2, 10);
  CHECK(r.value == 271);
  CHECK(r.status == FormulaStatus::proven);
  CHECK(formula_eval(Family::f_all_lower_bound, std::nullopt, 2, 11).value == 502);
  CHECK_THROWS_AS(formula_eval(Family::f_all_lower_bound, std::nullopt, 2, 9),
                  std::invalid_argument);

  CHECK(formula_eval(Family::a_irred, std::nullopt, 1, 6).value == 6);
  CHECK(formula_eval(Family::a_irred, std::nullopt, 1, 11).value == 126);
  CHECK(formula_eval(Family::a_irred, std::nullopt, 1, 1).status == FormulaStatus::out_of_range);

  CHECK(formula_eval(Family::a_ni, std::nullopt, 1, 7, 6).value == 6);
  CHECK(formula_eval(Family::a_ni, std::nullopt, 1, 8, 5).value == 3);
  CHECK(formula_eval(Family::a_ni, std::nullopt, 1, 9, 4).value == 0);
  CHECK(formula_eval(Family::a_ni, std::nullopt, 1, 6, 6).value == 0);
  CHECK(formula_eval(Family::a_ni, std::nullopt, 1, 1, 1).value == 1);

  CHECK_THROWS_AS(formula_eval(Family::t, Pattern::parse("2413"), 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(formula_eval(Family::f, p321, 7, 9), std::invalid_argument);
  CHECK_THROWS_AS(formula_eval(Family::a_ni, std::nullopt, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(formula_eval(Family::t, std::nullopt, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(formula_eval(Family::a_ni, std::nullopt, 1, 5, 9), std::invalid_argument);
}
