#pragma once
// The verification suites. Each check compares engine counts against an
// independent route (closed form, generating function, structural filter,
// or a frozen reference row) over an explicit window, and the report records
// exactly which (n, k) points were compared. A failing theorem check is a
// bug; a failing conjecture check would be a discovery, so the two suites
// are kept separate and conjecture failures are non-fatal by default.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thetalab/enumerate.hpp"
#include "thetalab/series.hpp"

namespace thetalab {

enum class CheckStatus { pass, fail, skipped_infeasible };
std::string check_status_name(CheckStatus s);

struct Mismatch {
  int n = 0;
  std::optional<int> k;  // carries i for the a(n,i) checks; the note says so
  std::string expected;
  std::string actual;
};

struct CheckReport {
  std::string id;
  std::string claim;  // serialized under the wire name "paper_ref"
  int n_lo = 0;
  int n_hi = -1;  // inclusive window actually verified; empty when hi < lo
  std::optional<std::pair<int, int>> k_range;
  CheckStatus status = CheckStatus::pass;
  std::optional<Mismatch> first_mismatch;
  std::string note;
};

struct SuiteOptions {
  int n_max = 10;
  int k_max = 14;
  int threads = 1;
  bool force = false;               // forwarded into enumeration budgets
  bool strict_conjectures = false;  // exit-code policy; reports are unaffected
  Budget budget{};
};

// Static id inventories, in report order.
const std::vector<std::string>& theorem_check_ids();
const std::vector<std::string>& conjecture_check_ids();

std::vector<CheckReport> run_theorem_suite(const SuiteOptions& opts = {});
std::vector<CheckReport> run_conjecture_suite(const SuiteOptions& opts = {});

bool any_failed(const std::vector<CheckReport>& reports);

// Partition of {1..k_max} by equality of the vector (f_n^k)_{n <= n_max},
// either for the sigma-avoiding counts or (sigma empty) the unrestricted
// census. sample_verdicts reports, for each conjectured sample class, whether
// the computed partition keeps its members together.
struct PeriodicityClasses {
  std::optional<Pattern> sigma;
  int n_max = 0;
  int k_max = 0;
  std::vector<std::vector<int>> classes;  // each sorted; ordered by leader
  std::vector<std::string> sample_verdicts;
};
PeriodicityClasses periodicity_classes(const std::optional<Pattern>& sigma, int n_max, int k_max,
                                       const EnumOptions& opts = {});
// The conjectured sample classes the verdicts refer to.
const std::vector<std::vector<int>>& periodicity_sample_classes();

enum class ReportFormat { text, csv, json };
std::optional<ReportFormat> report_format_from_name(std::string_view name);

std::string render_reports(const std::vector<CheckReport>& reports, ReportFormat fmt,
                           const std::string& suite_name, const SuiteOptions& opts);
std::string render_periodicity(const PeriodicityClasses& pc, ReportFormat fmt);

// Recomputed renditions of the headline tables (never hardcoded values).
enum class TableId { table1, table2, f2, conj57 };
std::optional<TableId> table_id_from_name(std::string_view name);
std::string table_id_name(TableId id);
int table_default_n_max(TableId id);
std::string emit_table(TableId which, int n_max, ReportFormat fmt, const EnumOptions& opts = {});

}  // namespace thetalab
