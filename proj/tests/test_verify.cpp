#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "thetalab/verify.hpp"

using namespace thetalab;

namespace {

const CheckReport& by_id(const std::vector<CheckReport>& reports, const std::string& id) {
  for (const auto& r : reports)
    if (r.id == id) return r;
  FAIL("no report with id ", id);
  static CheckReport dummy;
  return dummy;
}

// A fast configuration for exercising the machinery rather than the math.
SuiteOptions quick() {
  SuiteOptions opts;
  opts.n_max = 5;
  opts.k_max = 6;
  opts.threads = 2;
  return opts;
}

}  // namespace

TEST_CASE("check id inventory is frozen") {
  const std::vector<std::string> theorems = {
      "theta-bijection",
      "theta-sum-commutes",
      "theta-preserves-irreducible",
      "t123-vanishes",
      "t123-dual-route",
      "t132-closed-form",
      "t213-closed-form",
      "t231-closed-form",
      "t312-closed-form",
      "t321-gf",
      "t321-gf-assembly",
      "t213-gf-agreement",
      "a321-closed-form",
      "a321-gf-agreement",
      "a-n-n1",
      "a-n-i-binomial",
      "a-n-i-zero",
      "a-recurrence",
      "irred-end-structure",
      "pos-n-132-structure",
      "cyclic-132-count",
      "fixed-interval-213-structure",
      "cyclic-213-count",
      "cyclic-231-unique",
      "t213-k2",
      "t213-k3",
      "t213-k4",
      "t213-k5plus",
      "tk-fib-231",
      "tk-fib-312",
      "tk-fib-321",
      "fixed-shape-count",
      "f1-fib",
      "f1-132-213",
      "f1-123-zero",
      "f2-231-gf",
      "f2-312-gf",
      "f2-321-fib",
      "f2-213-constant",
      "f2-132-constant",
      "f2-123-zero",
      "order2-structure",
      "f2-census-table",
      "f2-lower-bound",
      "theta2-witnesses",
  };
  const std::vector<std::string> conjectures = {
      "conj-t132-k2-cubic",
      "conj-t132-k3",
      "conj-t132-k4",
      "conj-t132-k5",
      "conj-t132-k6plus",
      "conj-f3-gf",
      "conj-f4-gf",
      "conj-f5-gf",
      "conj-f213-constants",
      "conj-f132-constants",
      "conj-power2-collapse",
      "conj-3i-iff",
      "conj-periodicity-samples",
  };
  CHECK(theorem_check_ids() == theorems);
  CHECK(conjecture_check_ids() == conjectures);

  std::set<std::string> all(theorems.begin(), theorems.end());
  all.insert(conjectures.begin(), conjectures.end());
  CHECK(all.size() == theorems.size() + conjectures.size());
}

TEST_CASE("suite preconditions") {
  SuiteOptions opts;
  opts.n_max = 3;
  CHECK_THROWS_AS(run_theorem_suite(opts), std::invalid_argument);
  CHECK_THROWS_AS(run_conjecture_suite(opts), std::invalid_argument);
  opts.n_max = 4;
  opts.k_max = 0;
  CHECK_THROWS_AS(run_theorem_suite(opts), std::invalid_argument);
}

TEST_CASE("theorem suite is green on a small window") {
  const auto reports = run_theorem_suite(quick());
  REQUIRE(reports.size() == theorem_check_ids().size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CAPTURE(reports[i].id);
    CHECK(reports[i].id == theorem_check_ids()[i]);
    CHECK(!reports[i].claim.empty());
    CHECK(reports[i].status != CheckStatus::fail);
    if (reports[i].status == CheckStatus::pass) {
      // a pass must state a nonempty window it actually covered
      CHECK(reports[i].n_hi >= reports[i].n_lo);
    } else {
      // a skip must say why
      CHECK(!reports[i].note.empty());
    }
  }

  // spot-check windows: clipped by n_max but never beyond validity starts
  CHECK(by_id(reports, "theta-bijection").n_lo == 1);
  CHECK(by_id(reports, "theta-bijection").n_hi == 5);
  CHECK(by_id(reports, "t123-vanishes").n_lo == 11);
  CHECK(by_id(reports, "t123-vanishes").n_hi == 12);
  CHECK(by_id(reports, "t321-gf-assembly").n_hi == 24);
  CHECK(by_id(reports, "theta2-witnesses").n_hi == 9);

  // windows that start above n_max=5 are reported skipped, not silently ok
  const auto& bound = by_id(reports, "f2-lower-bound");
  CHECK(bound.status == CheckStatus::skipped_infeasible);
  CHECK(bound.n_hi < bound.n_lo);
}

TEST_CASE("failing conjecture carries its first mismatch") {
  SuiteOptions opts = quick();
  opts.n_max = 8;
  const auto reports = run_conjecture_suite(opts);
  REQUIRE(reports.size() == conjecture_check_ids().size());

  // the k=4 fixed-count series diverges from the 231 counts at n = 6
  const auto& f4 = by_id(reports, "conj-f4-gf");
  CHECK(f4.status == CheckStatus::fail);
  REQUIRE(f4.first_mismatch.has_value());
  CHECK(f4.first_mismatch->n == 6);
  CHECK(f4.first_mismatch->k == 4);
  CHECK(f4.first_mismatch->expected == "26");
  CHECK(f4.first_mismatch->actual.find("231") != std::string::npos);
  CHECK(f4.first_mismatch->actual.find("25") != std::string::npos);
  CHECK(f4.note.find("sigma=312 matches") != std::string::npos);
  CHECK(any_failed(reports));

  for (const auto& r : reports) {
    CAPTURE(r.id);
    if (r.id != "conj-f4-gf") CHECK(r.status != CheckStatus::fail);
    if (r.status == CheckStatus::fail) CHECK(r.first_mismatch.has_value());
  }
}

TEST_CASE("suite runs are deterministic across thread counts") {
  SuiteOptions serial = quick();
  serial.threads = 1;
  SuiteOptions threaded = quick();
  threaded.threads = 4;
  const std::string a = render_reports(run_theorem_suite(serial), ReportFormat::json,
                                       "theorems", serial);
  const std::string b = render_reports(run_theorem_suite(threaded), ReportFormat::json,
                                       "theorems", threaded);
  CHECK(a == b);
}

TEST_CASE("starved budgets clip windows instead of failing") {
  SuiteOptions opts = quick();
  opts.budget.max_steps = 200;
  const auto reports = run_theorem_suite(opts);
  for (const auto& r : reports) {
    CAPTURE(r.id);
    CHECK(r.status != CheckStatus::fail);
  }
  // a clipped check keeps the verified prefix and says where it stopped
  const auto& bij = by_id(reports, "theta-bijection");
  CHECK(bij.status == CheckStatus::pass);
  CHECK(bij.n_hi < 5);
  CHECK(bij.note.find("stopped before") != std::string::npos);
  // pure series checks cost no enumeration budget
  CHECK(by_id(reports, "t321-gf-assembly").status == CheckStatus::pass);

  // force overrides the projection and restores the full window
  opts.force = true;
  const auto forced = run_theorem_suite(opts);
  CHECK(by_id(forced, "theta-bijection").n_hi == 5);
  CHECK(by_id(forced, "theta-bijection").status == CheckStatus::pass);
}

TEST_CASE("report rendering") {
  CheckReport pass;
  pass.id = "alpha";
  pass.claim = "first, with a comma";
  pass.n_lo = 2;
  pass.n_hi = 6;
  pass.k_range = {{1, 3}};
  CheckReport fail;
  fail.id = "beta";
  fail.claim = "second \"quoted\"";
  fail.n_lo = 1;
  fail.n_hi = 4;
  fail.status = CheckStatus::fail;
  fail.first_mismatch = Mismatch{3, 2, "10", "11"};
  fail.note = "demo";
  SuiteOptions opts;
  opts.n_max = 6;
  opts.k_max = 3;

  SUBCASE("json matches the wire schema") {
    const auto doc = nlohmann::json::parse(
        render_reports({pass, fail}, ReportFormat::json, "demo-suite", opts));
    CHECK(doc["suite"] == "demo-suite");
    CHECK(doc["n_max"] == 6);
    CHECK(doc["k_max"] == 3);
    REQUIRE(doc["checks"].size() == 2);
    CHECK(doc["checks"][0]["id"] == "alpha");
    CHECK(doc["checks"][0]["paper_ref"] == "first, with a comma");
    CHECK(doc["checks"][0]["range"]["n"][0] == 2);
    CHECK(doc["checks"][0]["range"]["n"][1] == 6);
    CHECK(doc["checks"][0]["range"]["k"][1] == 3);
    CHECK(doc["checks"][0]["status"] == "pass");
    CHECK(doc["checks"][0]["first_mismatch"].is_null());
    CHECK(doc["checks"][1]["range"]["k"].is_null());
    CHECK(doc["checks"][1]["status"] == "fail");
    CHECK(doc["checks"][1]["first_mismatch"]["n"] == 3);
    CHECK(doc["checks"][1]["first_mismatch"]["k"] == 2);
    CHECK(doc["checks"][1]["first_mismatch"]["expected"] == "10");
    CHECK(doc["checks"][1]["first_mismatch"]["actual"] == "11");
  }

  SUBCASE("csv quotes embedded commas and doubles quotes") {
    const std::string csv = render_reports({pass, fail}, ReportFormat::csv, "demo-suite", opts);
    CHECK(csv.find("\"first, with a comma\"") != std::string::npos);
    CHECK(csv.find("\"second \"\"quoted\"\"\"") != std::string::npos);
    CHECK(csv.rfind("id,paper_ref,n_lo,n_hi,k_lo,k_hi,status,", 0) == 0);
    CHECK(csv.find("fail,3,2,10,11,demo") != std::string::npos);
  }

  SUBCASE("text shows tags, windows, and the summary line") {
    const std::string text =
        render_reports({pass, fail}, ReportFormat::text, "demo-suite", opts);
    CHECK(text.find("[PASS] alpha") != std::string::npos);
    CHECK(text.find("[FAIL] beta") != std::string::npos);
    CHECK(text.find("n 2..6") != std::string::npos);
    CHECK(text.find("k 1..3") != std::string::npos);
    CHECK(text.find("first mismatch: n=3 k=2 expected 10, got 11") != std::string::npos);
    CHECK(text.find("demo-suite: 2 checks, 1 pass, 1 fail, 0 skipped") != std::string::npos);
  }
}

TEST_CASE("status and format names") {
  CHECK(check_status_name(CheckStatus::pass) == "pass");
  CHECK(check_status_name(CheckStatus::fail) == "fail");
  CHECK(check_status_name(CheckStatus::skipped_infeasible) == "skipped_infeasible");
  CHECK(report_format_from_name("text") == ReportFormat::text);
  CHECK(report_format_from_name("csv") == ReportFormat::csv);
  CHECK(report_format_from_name("json") == ReportFormat::json);
  CHECK(!report_format_from_name("xml").has_value());
}

TEST_CASE("periodicity classes partition the exponents") {
  const auto pc = periodicity_classes(Pattern::parse("213"), 8, 14);
  CHECK(pc.n_max == 8);
  CHECK(pc.k_max == 14);

  // classes form a partition of {1..14}
  std::set<int> seen;
  for (const auto& c : pc.classes) {
    REQUIRE(!c.empty());
    CHECK(std::is_sorted(c.begin(), c.end()));
    for (int k : c) {
      CHECK(k >= 1);
      CHECK(k <= 14);
      CHECK(seen.insert(k).second);
    }
  }
  CHECK(seen.size() == 14);
  // classes are ordered by their smallest member
  for (std::size_t i = 1; i < pc.classes.size(); ++i)
    CHECK(pc.classes[i - 1].front() < pc.classes[i].front());

  // the conjectured groupings that fit under k_max=14 hold for 213
  auto class_of = [&](int k) {
    for (const auto& c : pc.classes)
      if (std::find(c.begin(), c.end(), k) != c.end()) return c;
    return std::vector<int>{};
  };
  CHECK(class_of(1) == std::vector<int>{1, 5, 11, 13});
  CHECK(class_of(4) == std::vector<int>{4, 8});
  REQUIRE(pc.sample_verdicts.size() == periodicity_sample_classes().size());
  CHECK(pc.sample_verdicts[0].find("matched") != std::string::npos);
  CHECK(pc.sample_verdicts[3].find("matched") != std::string::npos);

  CHECK_THROWS_AS(periodicity_classes(Pattern::parse("213"), 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(periodicity_classes(Pattern::parse("213"), 5, 0), std::invalid_argument);
}

TEST_CASE("periodicity over the unrestricted census") {
  // k_max=1 must always collapse to the single class {1}
  const auto single = periodicity_classes(std::nullopt, 6, 1);
  REQUIRE(single.classes.size() == 1);
  CHECK(single.classes[0] == std::vector<int>{1});

  const auto pc = periodicity_classes(std::nullopt, 7, 8);
  CHECK(!pc.sigma.has_value());
  // 4 and 8 collapse for the census too
  bool found48 = false;
  for (const auto& c : pc.classes)
    if (c == std::vector<int>{4, 8}) found48 = true;
  CHECK(found48);
}

TEST_CASE("emitted tables recompute the frozen rows") {
  SUBCASE("table1 csv") {
    const std::string csv = emit_table(TableId::table1, 6, ReportFormat::csv);
    CHECK(csv.find("sigma,n=1,n=2,n=3,n=4,n=5,n=6\n") == 0);
    CHECK(csv.find("123,1,2,5,11,21,26\n") != std::string::npos);
    CHECK(csv.find("132,1,2,5,10,20,38\n") != std::string::npos);
    CHECK(csv.find("213,1,2,5,12,25,46\n") != std::string::npos);
    CHECK(csv.find("231,1,2,4,8,16,32\n") != std::string::npos);
    CHECK(csv.find("312,1,2,4,8,16,32\n") != std::string::npos);
    CHECK(csv.find("321,1,2,4,9,20,46\n") != std::string::npos);
  }
  SUBCASE("table2 csv") {
    const std::string csv = emit_table(TableId::table2, 6, ReportFormat::csv);
    CHECK(csv.find("1,1,2,5,12,25,46\n") != std::string::npos);
    CHECK(csv.find("2,1,2,5,10,15,21\n") != std::string::npos);
    CHECK(csv.find("3,1,2,5,9,11,13\n") != std::string::npos);
    CHECK(csv.find("4,1,2,5,8,9,10\n") != std::string::npos);
    CHECK(csv.find(">=5,1,2,5,7,7,7\n") != std::string::npos);
  }
  SUBCASE("f2 row") {
    const std::string csv = emit_table(TableId::f2, 8, ReportFormat::csv);
    CHECK(csv.find("f_n^2,1,2,3,7,12,23,41,78\n") != std::string::npos);
  }
  SUBCASE("conj57 rows at n=8 reproduce the conjectured constants") {
    const std::string csv = emit_table(TableId::conj57, 8, ReportFormat::csv);
    CHECK(csv.find("213,2,4,7,9,2,9,8,9,8,7,2,16,2,10\n") != std::string::npos);
    CHECK(csv.find("132,2,3,6,7,2,7,8,7,7,5,2,13,2,9\n") != std::string::npos);
  }
  SUBCASE("json shape") {
    const auto doc = nlohmann::json::parse(emit_table(TableId::f2, 5, ReportFormat::json));
    REQUIRE(doc["rows"].size() == 1);
    CHECK(doc["rows"][0]["label"] == "f_n^2");
    CHECK(doc["rows"][0]["values"] == nlohmann::json({1, 2, 3, 7, 12}));
    CHECK(doc["columns"].size() == 5);
  }
  SUBCASE("text is aligned and titled") {
    const std::string text = emit_table(TableId::table1, 4, ReportFormat::text);
    CHECK(text.find("avoiding sigma") != std::string::npos);
    CHECK(text.find("sigma") != std::string::npos);
    CHECK(text.find("n=4") != std::string::npos);
  }

  CHECK(table_id_from_name("table1") == TableId::table1);
  CHECK(table_id_from_name("conj57") == TableId::conj57);
  CHECK(!table_id_from_name("table9").has_value());
  CHECK(table_id_name(TableId::f2) == "f2");
  CHECK(table_default_n_max(TableId::f2) == 11);
  CHECK(table_default_n_max(TableId::conj57) == 8);
  CHECK_THROWS_AS(emit_table(TableId::table1, 0, ReportFormat::text), std::invalid_argument);
}
