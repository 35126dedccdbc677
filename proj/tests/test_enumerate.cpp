#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <vector>

#include "brute.hpp"
#include "doctest.h"
#include "thetalab/enumerate.hpp"
#include "thetalab/series.hpp"

using namespace thetalab;

namespace {

const std::vector<Pattern>& len3_patterns() {
  static const std::vector<Pattern> pats = {Pattern::parse("123"), Pattern::parse("132"),
                                            Pattern::parse("213"), Pattern::parse("231"),
                                            Pattern::parse("312"), Pattern::parse("321")};
  return pats;
}

std::uint64_t count_T_naive(int n, const Pattern& sigma, int k) {
  std::uint64_t total = 0;
  for (const Permutation& p : brute::all_perms(n)) {
    Permutation cur = p;
    bool ok = true;
    for (int j = 0; j <= k && ok; ++j) {
      if (brute::contains_naive(cur, sigma)) ok = false;
      cur = theta(cur);
    }
    if (ok) ++total;
  }
  return total;
}

std::uint64_t count_F_naive(int n, const Pattern& sigma, int k) {
  std::uint64_t total = 0;
  for (const Permutation& p : brute::all_perms(n)) {
    if (brute::contains_naive(p, sigma)) continue;
    if (theta_power(p, k) == p) ++total;
  }
  return total;
}

struct TempFile {
  std::string path;
  explicit TempFile(const char* tag) {
    path = (std::filesystem::temp_directory_path() /
            (std::string("thetalab-test-") + tag + "-" + std::to_string(::getpid()) + ".csv"))
               .string();
    std::remove(path.c_str());
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("avoider stream: lexicographic, valid, Catalan-counted (n <= 7)") {
  for (int n = 1; n <= 7; ++n) {
    for (const Pattern& sigma : len3_patterns()) {
      std::vector<Permutation> streamed;
      for_each_avoider(n, sigma, [&](const Permutation& p) { streamed.push_back(p); });
      CHECK(streamed.size() == catalan(n).convert_to<std::size_t>());
      CHECK(count_avoiders(n, sigma) == streamed.size());
      std::uint64_t prev_rank = 0;
      bool first = true;
      for (const Permutation& p : streamed) {
        CHECK(avoids(p, sigma));
        const std::uint64_t r = rank(p);
        if (!first) CHECK(r > prev_rank);
        prev_rank = r;
        first = false;
      }
      // same set as the naive filter
      std::uint64_t filtered = 0;
      for (const Permutation& p : brute::all_perms(n)) {
        if (!brute::contains_naive(p, sigma)) ++filtered;
      }
      CHECK(filtered == streamed.size());
    }
  }
}

TEST_CASE("avoider stream handles non-3 patterns") {
  const Pattern p12 = Pattern::parse("12");
  CHECK(count_avoiders(6, p12) == 1);  // only the decreasing word
  const Pattern p1234 = Pattern::parse("1234");
  for (int n = 1; n <= 7; ++n) {
    std::uint64_t naive = 0;
    for (const Permutation& p : brute::all_perms(n)) {
      if (!brute::contains_naive(p, p1234)) ++naive;
    }
    CHECK(count_avoiders(n, p1234) == naive);
  }
  const Pattern p1(Permutation::from_values({1}));
  CHECK(count_avoiders(4, p1) == 0);
}

TEST_CASE("count_T matches the brute-force chain filter (n <= 6, k <= 3)") {
  for (int n = 1; n <= 6; ++n) {
    for (const Pattern& sigma : len3_patterns()) {
      for (int k = 1; k <= 3; ++k) {
        CHECK(count_T(n, sigma, k) == count_T_naive(n, sigma, k));
      }
    }
  }
  CHECK(count_T(3, Pattern::parse("132"), 1) == 5);
  CHECK(count_T(6, Pattern::parse("213"), 2) == 21);
  CHECK(count_T(4, Pattern::parse("213"), 3) == 9);
  CHECK(count_T(12, Pattern::parse("123"), 1) == 0);
}

TEST_CASE("count_F_sigma matches the brute-force fixed filter (n <= 6, k <= 4)") {
  for (int n = 1; n <= 6; ++n) {
    for (const Pattern& sigma : len3_patterns()) {
      for (int k = 1; k <= 4; ++k) {
        CHECK(count_F_sigma(n, sigma, k) == count_F_naive(n, sigma, k));
      }
    }
  }
  CHECK(count_F_sigma(6, Pattern::parse("321"), 2) == 13);
  CHECK(count_F_sigma(3, Pattern::parse("312"), 3) == 5);
}

TEST_CASE("period histogram determines every fixed count below the cap") {
  const int n = 7, k_max = 6;
  for (const Pattern& sigma : {Pattern::parse("231"), Pattern::parse("213")}) {
    const auto hist = avoider_period_counts(n, sigma, k_max);
    REQUIRE(hist.size() == static_cast<std::size_t>(k_max) + 1);
    std::uint64_t total = hist[0];
    for (int j = 1; j <= k_max; ++j) total += hist[static_cast<std::size_t>(j)];
    CHECK(total == count_avoiders(n, sigma));
    for (int k = 1; k <= k_max; ++k) {
      std::uint64_t fixed = 0;
      for (int j = 1; j <= k; ++j) {
        if (k % j == 0) fixed += hist[static_cast<std::size_t>(j)];
      }
      CHECK(fixed == count_F_sigma(n, sigma, k));
    }
  }
}

TEST_CASE("orbit census matches the naive orbit partition (n <= 7)") {
  for (int n = 1; n <= 7; ++n) {
    const OrbitCensus census = orbit_census(n);
    const auto naive =
        brute::orbit_histogram_naive(n, [](const Permutation& p) { return theta(p); });
    CHECK(census.histogram == naive);
    CHECK(census.element_count() == factorial(n));
  }
  const OrbitCensus c3 = orbit_census(3);
  REQUIRE(c3.histogram.size() == 2);
  CHECK(c3.histogram.at(1) == 3);
  CHECK(c3.histogram.at(3) == 1);
  CHECK(orbit_census(4).fixed_count(2) == 7);
}

TEST_CASE("the three fixed-count routes agree (n <= 7)") {
  for (int n = 1; n <= 7; ++n) {
    const OrbitCensus census = orbit_census(n);
    for (int k = 1; k <= 6; ++k) {
      const std::uint64_t via_census = census.fixed_count(static_cast<std::uint64_t>(k));
      CHECK(via_census == count_F_all_direct(n, k));
      CHECK(via_census == count_F_all(n, k));
    }
  }
  CHECK(count_F_all(3, 3) == 6);
  CHECK(count_F_all(4, 2) == 7);
}

TEST_CASE("irreducible double-avoider family") {
  // engine vs a from-scratch filter
  for (int n = 2; n <= 7; ++n) {
    const Pattern p321 = Pattern::parse("321");
    std::uint64_t naive = 0;
    std::vector<std::uint64_t> by_end(static_cast<std::size_t>(n) + 1, 0);
    for (const Permutation& p : brute::all_perms(n)) {
      if (!is_irreducible(p)) continue;
      if (brute::contains_naive(p, p321)) continue;
      const Permutation img = theta(p);
      if (brute::contains_naive(img, p321)) continue;
      ++naive;
      ++by_end[static_cast<std::size_t>(img.apply(n))];
    }
    CHECK(count_irreducible_T321(n) == naive);
    CHECK(count_irreducible_T321(n) == binom(n - 2, (n - 2) / 2));
    const auto all = count_a_ni_all(n);
    REQUIRE(all.size() == by_end.size());
    std::uint64_t sum = 0;
    for (int i = 1; i <= n; ++i) {
      CHECK(all[static_cast<std::size_t>(i)] == by_end[static_cast<std::size_t>(i)]);
      CHECK(count_a_ni(n, i) == by_end[static_cast<std::size_t>(i)]);
      sum += all[static_cast<std::size_t>(i)];
    }
    CHECK(sum == naive);
  }
  CHECK(count_a_ni(6, 1) == 0);
  CHECK(count_a_ni(7, 6) == 6);
  CHECK(count_a_ni(8, 5) == 3);
}

TEST_CASE("cyclic members of the double-avoider classes") {
  CHECK(count_cyclic_T(4, Pattern::parse("132")) == 3);
  CHECK(count_cyclic_T(4, Pattern::parse("213")) == 4);
  for (int n = 1; n <= 7; ++n) {
    CHECK(count_cyclic_T(n, Pattern::parse("231")) == 1);
  }
  // engine vs naive, both variants
  for (int n = 1; n <= 6; ++n) {
    for (const Pattern& sigma : len3_patterns()) {
      std::uint64_t naive_pi = 0, naive_img = 0;
      for (const Permutation& p : brute::all_perms(n)) {
        if (brute::contains_naive(p, sigma)) continue;
        const Permutation img = theta(p);
        if (brute::contains_naive(img, sigma)) continue;
        if (is_cyclic(p)) ++naive_pi;
        if (is_cyclic(img)) ++naive_img;
      }
      CHECK(count_cyclic_T(n, sigma) == naive_pi);
      CHECK(count_cyclic_image_T(n, sigma) == naive_img);
    }
  }
}

TEST_CASE("structural classifiers") {
  CHECK(structural_check(Permutation::identity(6), StructuralLemma::fixed_interval_213));
  CHECK_FALSE(structural_check(parse_permutation("21435"), StructuralLemma::fixed_interval_213));
  CHECK_FALSE(structural_check(parse_permutation("32145"), StructuralLemma::fixed_interval_213));
  // theta(3241) = 2413: the maximum lands in position 2, outside {1, n-1, n}
  CHECK_FALSE(structural_check(parse_permutation("3241"), StructuralLemma::pos_of_n_132));
  CHECK_FALSE(structural_check(parse_permutation("321"), StructuralLemma::irred_end_321));
  CHECK_FALSE(structural_check(parse_permutation("231"), StructuralLemma::order2_shape));
  CHECK(structural_check(parse_permutation("3421"), StructuralLemma::order2_shape));
  CHECK(structural_check(parse_permutation("637948521"), StructuralLemma::order2_shape));
  CHECK_THROWS_AS(structural_check(parse_permutation("123"), StructuralLemma::order2_shape),
                  std::invalid_argument);

  for (int n = 1; n <= 7; ++n) {
    for (const Permutation& p : brute::all_perms(n)) {
      const Permutation img = theta(p);
      if (!brute::contains_naive(p, Pattern::parse("132")) &&
          !brute::contains_naive(img, Pattern::parse("132"))) {
        CHECK(structural_check(p, StructuralLemma::pos_of_n_132));
      }
      if (!brute::contains_naive(p, Pattern::parse("213")) &&
          !brute::contains_naive(img, Pattern::parse("213"))) {
        CHECK(structural_check(p, StructuralLemma::fixed_interval_213));
      }
      if (is_irreducible(p) && !brute::contains_naive(p, Pattern::parse("321")) &&
          !brute::contains_naive(img, Pattern::parse("321"))) {
        CHECK(structural_check(p, StructuralLemma::irred_end_321));
      }
      if (n >= 3 && p.apply(n) != n && theta_power(p, 2) == p) {
        CHECK(structural_check(p, StructuralLemma::order2_shape));
      }
    }
  }
}

TEST_CASE("budget projection and enforcement") {
  CHECK(projected_avoider_nodes(3) == 1 + 3 + 3 * 2 + 5);  // C(3,m)*Catalan(m)
  EnumOptions tight;
  tight.budget.max_steps = 10;
  CHECK_THROWS_AS(count_T(8, Pattern::parse("213"), 1, tight), FeasibilityError);
  try {
    count_T(8, Pattern::parse("213"), 1, tight);
  } catch (const FeasibilityError& e) {
    CHECK(e.projected() > e.budget());
    CHECK(e.budget() == 10);
  }
  tight.budget.force = true;
  CHECK(count_T(8, Pattern::parse("213"), 1, tight) == count_T(8, Pattern::parse("213"), 1));

  CHECK_THROWS_AS(orbit_census(13), MemoryBudgetError);
  CHECK_THROWS_AS(orbit_census(14), MemoryBudgetError);
  EnumOptions forced;
  forced.budget.force = true;
  CHECK_THROWS_AS(orbit_census(14, forced), MemoryBudgetError);  // hard cap
  CHECK_THROWS_AS(count_T(0, Pattern::parse("213"), 1), std::invalid_argument);
  CHECK_THROWS_AS(count_T(17, Pattern::parse("213"), 1), std::invalid_argument);
}

TEST_CASE("parallel execution is exact and deterministic") {
  EnumOptions par;
  par.threads = 4;
  CHECK(count_T(9, Pattern::parse("213"), 2, par) == count_T(9, Pattern::parse("213"), 2));
  CHECK(count_F_sigma(9, Pattern::parse("132"), 6, par) ==
        count_F_sigma(9, Pattern::parse("132"), 6));
  CHECK(avoider_period_counts(9, Pattern::parse("312"), 6, par) ==
        avoider_period_counts(9, Pattern::parse("312"), 6));
  CHECK(orbit_census(8, par).histogram == orbit_census(8).histogram);
}

TEST_CASE("query validation and dispatch") {
  CountQuery q;
  q.kind = QueryKind::T;
  q.sigma = Pattern::parse("132");
  q.n = 5;
  q.k = 1;
  CHECK(run_query(q) == 20);

  CountQuery bad = q;
  bad.sigma.reset();
  CHECK_THROWS_AS(validate_query(bad), std::invalid_argument);

  CountQuery fall;
  fall.kind = QueryKind::FAll;
  fall.n = 4;
  fall.k = 2;
  CHECK(run_query(fall) == 7);
  fall.sigma = Pattern::parse("321");
  CHECK_THROWS_AS(validate_query(fall), std::invalid_argument);

  CountQuery ani;
  ani.kind = QueryKind::ANi;
  ani.n = 7;
  ani.k = 1;
  CHECK_THROWS_AS(validate_query(ani), std::invalid_argument);  // missing i
  ani.i = 6;
  CHECK(run_query(ani) == 6);
  ani.i = 9;
  CHECK_THROWS_AS(validate_query(ani), std::invalid_argument);

  CountQuery cyc;
  cyc.kind = QueryKind::CyclicT;
  cyc.sigma = Pattern::parse("213");
  cyc.n = 4;
  cyc.k = 2;  // cyclic-t does not take k
  CHECK_THROWS_AS(validate_query(cyc), std::invalid_argument);
  cyc.k = 1;
  CHECK(run_query(cyc) == 4);

  CountQuery airr;
  airr.kind = QueryKind::AIrred;
  airr.n = 6;
  airr.sigma = Pattern::parse("132");
  CHECK_THROWS_AS(validate_query(airr), std::invalid_argument);
  airr.sigma = Pattern::parse("321");
  CHECK(run_query(airr) == 6);

  CountQuery with_i = q;
  with_i.i = 3;
  CHECK_THROWS_AS(validate_query(with_i), std::invalid_argument);

  for (QueryKind k : {QueryKind::T, QueryKind::F, QueryKind::FAll, QueryKind::AIrred,
                      QueryKind::ANi, QueryKind::CyclicT}) {
    CHECK(query_kind_from_name(query_kind_name(k)) == k);
  }
  CHECK_FALSE(query_kind_from_name("bogus").has_value());
}

TEST_CASE("count cache: lookup, persistence, append-only") {
  TempFile tmp("cache");
  CountQuery q;
  q.kind = QueryKind::T;
  q.sigma = Pattern::parse("123");
  q.n = 6;
  q.k = 1;

  {
    CountCache cache(tmp.path);
    CHECK_FALSE(cache.lookup(q).has_value());
    cache.record(q, 42);
    CHECK(cache.lookup(q) == 42);
    cache.record(q, 42);  // second record is a no-op
    CHECK(cache.size() == 1);
  }
  {
    CountCache reloaded(tmp.path);
    CHECK(reloaded.lookup(q) == 42);
    CountQuery other = q;
    other.n = 7;
    CHECK_FALSE(reloaded.lookup(other).has_value());
    reloaded.record(other, 99);
  }
  {
    std::ifstream in(tmp.path);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "kind,sigma,k,n,i,count");
    CHECK(lines[1] == "t,123,1,6,,42");
    CHECK(lines[2] == "t,123,1,7,,99");
  }
  {
    std::ofstream out(tmp.path, std::ios::app);
    out << "not,a,valid,line,at,all,extra\n";
  }
  CHECK_THROWS_AS(CountCache{tmp.path}, std::runtime_error);
}
