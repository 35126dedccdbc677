#include <array>
#include <stdexcept>
#include <vector>

#include "brute.hpp"
#include "doctest.h"
#include "thetalab/patterns.hpp"

using namespace thetalab;

namespace {
const std::array<const char*, 6> kLen3 = {"123", "132", "213", "231", "312", "321"};
}

TEST_CASE("containment spot checks") {
  CHECK(contains(parse_permutation("41253"), Pattern::parse("213")));
  CHECK_FALSE(contains(parse_permutation("41253"), Pattern::parse("321")));
  CHECK(avoids(parse_permutation("41253"), Pattern::parse("321")));
  CHECK(contains(parse_permutation("3142"), Pattern::parse("132")));
  CHECK_FALSE(contains(parse_permutation("54321"), Pattern::parse("123")));
  CHECK(contains(parse_permutation("123456"), Pattern::parse("1234")));
  CHECK_FALSE(contains(parse_permutation("123456"), Pattern::parse("4321")));
  CHECK(contains(parse_permutation("2413"), Pattern::parse("2413")));
  CHECK_FALSE(contains(parse_permutation("12"), Pattern::parse("123")));  // m > n
  CHECK(contains(parse_permutation("1"), Pattern::parse("1")));
}

TEST_CASE("length-3 fast scans agree with subset enumeration (exhaustive n <= 7)") {
  std::vector<Pattern> pats;
  for (const char* s : kLen3) pats.push_back(Pattern::parse(s));
  for (int n = 1; n <= 7; ++n) {
    for (const Permutation& p : brute::all_perms(n)) {
      for (const Pattern& sigma : pats) {
        CHECK(contains(p, sigma) == brute::contains_naive(p, sigma));
      }
    }
  }
}

TEST_CASE("backtracking engine agrees with subset enumeration for longer patterns") {
  std::vector<Pattern> pats;
  for (const char* s : {"12", "21", "1234", "2143", "1342", "3142", "4321", "25314"}) {
    pats.push_back(Pattern::parse(s));
  }
  for (int n = 1; n <= 7; ++n) {
    for (const Permutation& p : brute::all_perms(n)) {
      for (const Pattern& sigma : pats) {
        CHECK(contains(p, sigma) == brute::contains_naive(p, sigma));
      }
    }
  }
}

TEST_CASE("extension check equals containment of the extended word (exhaustive n <= 6)") {
  std::vector<Pattern> pats;
  for (const char* s : kLen3) pats.push_back(Pattern::parse(s));
  pats.push_back(Pattern::parse("12"));
  pats.push_back(Pattern::parse("21"));
  pats.push_back(Pattern::parse("2143"));
  pats.push_back(Pattern::parse("1"));
  for (int n = 1; n <= 6; ++n) {
    for (const Permutation& p : brute::all_perms(n)) {
      for (int cut = 1; cut <= n; ++cut) {
        std::vector<int> prefix;
        for (int i = 1; i < cut; ++i) prefix.push_back(p.apply(i));
        const int next = p.apply(cut);
        std::vector<std::uint8_t> prefix8(prefix.begin(), prefix.end());
        const Permutation head = Permutation::from_values([&] {
          std::vector<int> w = prefix;
          w.push_back(next);
          // standardize: relative order is all that matters
          std::vector<int> sorted = w;
          std::sort(sorted.begin(), sorted.end());
          for (int& x : w) {
            x = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) -
                                 sorted.begin()) +
                1;
          }
          return w;
        }());
        for (const Pattern& sigma : pats) {
          const bool expected = contains(head, sigma);
          CHECK(contains_on_extension(std::span<const int>(prefix), next, sigma) == expected);
          CHECK(contains_on_extension(std::span<const std::uint8_t>(prefix8),
                                      static_cast<std::uint8_t>(next), sigma) == expected);
        }
      }
    }
  }
}

TEST_CASE("extension check works on arbitrary distinct integers") {
  const Pattern p213 = Pattern::parse("213");
  const std::vector<int> prefix = {40, 10};
  CHECK(contains_on_extension(prefix, 55, p213));       // 40,10,55 standardizes to 213
  CHECK_FALSE(contains_on_extension(prefix, 5, p213));  // 40,10,5 is decreasing
  const std::vector<int> asc = {3, 7};
  CHECK(contains_on_extension(asc, 100, Pattern::parse("123")));
  CHECK_FALSE(contains_on_extension(asc, 1, Pattern::parse("123")));
}

TEST_CASE("pattern construction") {
  CHECK_THROWS_AS(Pattern{Permutation()}, std::invalid_argument);
  CHECK(Pattern::parse("132") == Pattern(Permutation::from_values({1, 3, 2})));
  CHECK(Pattern::parse("132").length() == 3);
  CHECK(Pattern::parse("2143").length() == 4);
}
