// Command-line front end. Every capability of the library is reachable
// from here: single-permutation tools (theta, cycle form, orbit), the
// counting queries with their append-only result cache, series dumps,
// the verification suites, the exponent-periodicity explorer, and the
// recomputed tables.
//
// Exit codes: 0 success (for `verify`: every theorem check passed),
// 1 a theorem check failed (or a conjecture check under
// --strict-conjectures), 2 usage or configuration errors, including
// queries refused by the feasibility budget.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "thetalab/enumerate.hpp"
#include "thetalab/patterns.hpp"
#include "thetalab/permutation.hpp"
#include "thetalab/series.hpp"
#include "thetalab/verify.hpp"

namespace {

using thetalab::Budget;
using thetalab::CountCache;
using thetalab::CountQuery;
using thetalab::EnumOptions;
using thetalab::Pattern;
using thetalab::Permutation;
using thetalab::ReportFormat;
using thetalab::SuiteOptions;
using json = nlohmann::ordered_json;

enum class OutFormat { text, csv, json, bfile };

OutFormat parse_out_format(const std::string& name) {
  if (name == "text") return OutFormat::text;
  if (name == "csv") return OutFormat::csv;
  if (name == "json") return OutFormat::json;
  if (name == "bfile") return OutFormat::bfile;
  throw std::invalid_argument("unknown --format '" + name +
                              "' (expected text, csv, json, or bfile)");
}

// The suite/table renderers have no b-file form; reject up front so no
// work starts before the flags are coherent.
ReportFormat report_format(OutFormat f, const char* command) {
  switch (f) {
    case OutFormat::text: return ReportFormat::text;
    case OutFormat::csv: return ReportFormat::csv;
    case OutFormat::json: return ReportFormat::json;
    case OutFormat::bfile: break;
  }
  throw std::invalid_argument(std::string("--format bfile does not apply to '") + command + "'");
}

std::vector<Permutation> orbit_of(const Permutation& start) {
  std::vector<Permutation> orbit{start};
  for (Permutation p = theta(start); !(p == start); p = theta(p)) orbit.push_back(p);
  return orbit;
}

void print_theta(const std::string& perm_text, long long power, OutFormat fmt) {
  const Permutation pi = thetalab::parse_permutation(perm_text);
  const Permutation out = thetalab::theta_power(pi, power);
  if (fmt == OutFormat::json) {
    json doc;
    doc["input"] = to_string(pi);
    doc["power"] = power;
    doc["result"] = to_string(out);
    std::cout << doc.dump(2) << "\n";
    return;
  }
  if (fmt != OutFormat::text)
    throw std::invalid_argument("theta prints a single permutation; use --format text or json");
  std::cout << to_string(out) << "\n";
}

void print_cycles(const std::string& perm_text, OutFormat fmt) {
  const Permutation pi = thetalab::parse_permutation(perm_text);
  const auto cf = standard_cycle_form(pi);
  if (fmt == OutFormat::json) {
    json doc;
    doc["input"] = to_string(pi);
    doc["cycles"] = cf.cycles;
    doc["text"] = to_string(cf);
    std::cout << doc.dump(2) << "\n";
    return;
  }
  if (fmt != OutFormat::text)
    throw std::invalid_argument("cycles prints a cycle form; use --format text or json");
  std::cout << to_string(cf) << "\n";
}

void print_orbit(const std::string& perm_text, OutFormat fmt) {
  const Permutation pi = thetalab::parse_permutation(perm_text);
  const auto orbit = orbit_of(pi);
  switch (fmt) {
    case OutFormat::text: {
      std::cout << "orbit length " << orbit.size() << "\n";
      for (std::size_t i = 0; i < orbit.size(); ++i)
        std::cout << (i ? " -> " : "") << to_string(orbit[i]);
      std::cout << "\n";
      return;
    }
    case OutFormat::csv: {
      std::cout << "step,permutation\n";
      for (std::size_t i = 0; i < orbit.size(); ++i)
        std::cout << i << "," << to_string(orbit[i]) << "\n";
      return;
    }
    case OutFormat::json: {
      json doc;
      doc["length"] = orbit.size();
      doc["orbit"] = json::array();
      for (const auto& p : orbit) doc["orbit"].push_back(to_string(p));
      std::cout << doc.dump(2) << "\n";
      return;
    }
    case OutFormat::bfile: break;
  }
  throw std::invalid_argument("--format bfile does not apply to 'orbit'");
}

struct CountArgs {
  std::string kind_name;
  std::string sigma_text;
  int k = 1;
  int n = 0;
  int n_max = 0;
  int i = 0;
  bool has_sigma = false;
  bool has_n = false;
  bool has_n_max = false;
  bool has_i = false;
  bool no_cache = false;
  std::string cache_path;
};

void run_count(const CountArgs& a, OutFormat fmt, const EnumOptions& opts) {
  const auto kind = thetalab::query_kind_from_name(a.kind_name);
  if (!kind) {
    throw std::invalid_argument("unknown count kind '" + a.kind_name +
                                "' (expected t, f, f-all, a, a-ni, or cyclic-t)");
  }
  if (!a.has_n && !a.has_n_max)
    throw std::invalid_argument("count needs --n <int> or --n-max <int>");

  CountQuery q;
  q.kind = *kind;
  if (a.has_sigma) q.sigma = Pattern::parse(a.sigma_text);
  q.k = a.k;
  if (a.has_i) q.i = a.i;

  // In range mode a-ni rows start where the ending value fits.
  const int lo = a.has_n ? a.n : (a.has_i ? std::max(1, a.i) : 1);
  const int hi = a.has_n ? a.n : a.n_max;
  q.n = lo;
  thetalab::validate_query(q);

  std::optional<CountCache> cache;
  if (!a.no_cache)
    cache.emplace(a.cache_path.empty() ? CountCache::default_path() : a.cache_path);
  auto counted = [&](int n) {
    q.n = n;
    if (cache)
      if (const auto hit = cache->lookup(q)) return *hit;
    const std::uint64_t c = run_query(q, opts);
    if (cache) cache->record(q, c);
    return c;
  };

  if (a.has_n) {
    const std::uint64_t c = counted(a.n);
    switch (fmt) {
      case OutFormat::text: std::cout << c << "\n"; return;
      case OutFormat::bfile: std::cout << a.n << " " << c << "\n"; return;
      case OutFormat::csv: std::cout << "n,count\n" << a.n << "," << c << "\n"; return;
      case OutFormat::json: break;
    }
    json doc;
    doc["kind"] = a.kind_name;
    doc["sigma"] = a.has_sigma ? json(a.sigma_text) : json(nullptr);
    doc["k"] = a.k;
    doc["i"] = a.has_i ? json(a.i) : json(nullptr);
    doc["n"] = a.n;
    doc["count"] = c;
    std::cout << doc.dump(2) << "\n";
    return;
  }

  if (fmt == OutFormat::csv) std::cout << "n,count\n";
  json rows = json::array();
  for (int n = lo; n <= hi; ++n) {
    const std::uint64_t c = counted(n);
    switch (fmt) {
      case OutFormat::text:
      case OutFormat::bfile: std::cout << n << " " << c << "\n"; break;
      case OutFormat::csv: std::cout << n << "," << c << "\n"; break;
      case OutFormat::json: rows.push_back({{"n", n}, {"count", c}}); break;
    }
  }
  if (fmt == OutFormat::json) {
    json doc;
    doc["kind"] = a.kind_name;
    doc["sigma"] = a.has_sigma ? json(a.sigma_text) : json(nullptr);
    doc["k"] = a.k;
    doc["i"] = a.has_i ? json(a.i) : json(nullptr);
    doc["rows"] = rows;
    std::cout << doc.dump(2) << "\n";
  }
}

void run_series(const std::string& gf_name_text, int order, OutFormat fmt) {
  const auto id = thetalab::gf_id_from_name(gf_name_text);
  if (!id) {
    throw std::invalid_argument(
        "unknown --gf '" + gf_name_text +
        "' (expected t132, t213, t321, t321-dual, a321, f2, f3, f4, or f5)");
  }
  if (order < 0) throw std::invalid_argument("--order must be >= 0");
  const auto coeffs = thetalab::gf_coeffs(*id, order);
  switch (fmt) {
    case OutFormat::text:
      std::cout << "# " << gf_name(*id) << ", coefficients of x^0..x^" << order << "\n";
      for (int k = 0; k <= order; ++k)
        std::cout << k << " " << coeffs[static_cast<std::size_t>(k)].str() << "\n";
      return;
    case OutFormat::bfile:
      for (int k = 0; k <= order; ++k)
        std::cout << k << " " << coeffs[static_cast<std::size_t>(k)].str() << "\n";
      return;
    case OutFormat::csv:
      std::cout << "n,coefficient\n";
      for (int k = 0; k <= order; ++k)
        std::cout << k << "," << coeffs[static_cast<std::size_t>(k)].str() << "\n";
      return;
    case OutFormat::json: break;
  }
  json doc;
  doc["gf"] = gf_name(*id);
  doc["order"] = order;
  doc["coefficients"] = json::array();
  for (const auto& c : coeffs) doc["coefficients"].push_back(c.str());
  std::cout << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "thetalab: iterate the fundamental bijection over pattern-avoiding permutations,\n"
      "count the stable and periodic ones, and verify the counts against closed forms."};
  app.require_subcommand(1);

  std::string format_name = "text";
  int threads = 1;
  std::uint64_t budget_steps = Budget{}.max_steps;
  bool force = false;

  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "output format: text, csv, json, or bfile")
        ->capture_default_str();
  };
  const auto add_compute_opts = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "worker threads for the sweeps")
        ->envname("THETALAB_THREADS")
        ->capture_default_str();
    cmd->add_option("--budget", budget_steps,
                    "refuse queries whose projected step count exceeds this")
        ->envname("THETALAB_BUDGET")
        ->capture_default_str();
    cmd->add_flag("--force", force, "run even when the projection exceeds the budget");
  };
  const auto enum_options = [&] {
    EnumOptions opts;
    opts.threads = threads;
    opts.budget.max_steps = budget_steps;
    opts.budget.force = force;
    return opts;
  };

  int rc = 0;

  std::string perm_text;
  long long power = 1;
  auto* c_theta = app.add_subcommand(
      "theta", "apply the fundamental bijection (erase the parentheses of the cycle form)");
  c_theta->add_option("perm", perm_text, "permutation, compact digits or comma-separated")
      ->required();
  c_theta->add_option("--power", power, "iterate this many times; negative inverts")
      ->capture_default_str();
  add_format(c_theta);
  c_theta->callback([&] { print_theta(perm_text, power, parse_out_format(format_name)); });

  auto* c_cycles = app.add_subcommand(
      "cycles", "standard cycle form: cycles led by their maxima, in increasing order");
  c_cycles->add_option("perm", perm_text, "permutation, compact digits or comma-separated")
      ->required();
  add_format(c_cycles);
  c_cycles->callback([&] { print_cycles(perm_text, parse_out_format(format_name)); });

  auto* c_orbit =
      app.add_subcommand("orbit", "walk the theta-orbit of a permutation back to its start");
  c_orbit->add_option("perm", perm_text, "permutation, compact digits or comma-separated")
      ->required();
  add_format(c_orbit);
  c_orbit->callback([&] { print_orbit(perm_text, parse_out_format(format_name)); });

  CountArgs count_args;
  auto* c_count = app.add_subcommand("count", "counting queries over S_n");
  c_count
      ->add_option("kind", count_args.kind_name,
                   "t: theta-iterates stay sigma-avoiding; f: sigma-avoiders returned by "
                   "theta^k; f-all: theta^k-fixed over all of S_n; a: irreducible with pi "
                   "and theta(pi) avoiding 321; a-ni: a, split by the last value of "
                   "theta(pi); cyclic-t: cyclic members of the t set")
      ->required();
  auto* opt_sigma = c_count->add_option("--sigma", count_args.sigma_text, "pattern to avoid");
  auto* opt_k = c_count->add_option("--k", count_args.k, "theta-iteration depth")
                    ->capture_default_str();
  auto* opt_n = c_count->add_option("--n", count_args.n, "count at a single length");
  auto* opt_n_max = c_count->add_option("--n-max", count_args.n_max, "count for n = 1..n_max");
  auto* opt_i = c_count->add_option("--i", count_args.i, "ending value for a-ni");
  opt_n->excludes(opt_n_max);
  c_count->add_flag("--no-cache", count_args.no_cache, "skip the result cache entirely");
  c_count
      ->add_option("--cache", count_args.cache_path,
                   "result cache file (append-only csv; default ./thetalab-cache.csv)")
      ->envname("THETALAB_CACHE");
  add_compute_opts(c_count);
  add_format(c_count);
  c_count->callback([&] {
    count_args.has_sigma = opt_sigma->count() > 0;
    count_args.has_n = opt_n->count() > 0;
    count_args.has_n_max = opt_n_max->count() > 0;
    count_args.has_i = opt_i->count() > 0;
    (void)opt_k;
    run_count(count_args, parse_out_format(format_name), enum_options());
  });

  std::string gf_name_text;
  int order = 20;
  auto* c_series = app.add_subcommand("series", "coefficients of a named generating function");
  c_series
      ->add_option("--gf", gf_name_text,
                   "one of t132, t213, t321, t321-dual, a321, f2, f3, f4, f5")
      ->required();
  c_series->add_option("--order", order, "highest exponent to print")->capture_default_str();
  add_format(c_series);
  c_series->callback([&] { run_series(gf_name_text, order, parse_out_format(format_name)); });

  SuiteOptions suite_opts;
  const auto add_suite_opts = [&](CLI::App* cmd) {
    cmd->add_option("--n-max", suite_opts.n_max, "largest length the checks sweep")
        ->capture_default_str();
    cmd->add_option("--k-max", suite_opts.k_max, "largest theta-iteration depth")
        ->capture_default_str();
    cmd->add_flag("--strict-conjectures", suite_opts.strict_conjectures,
                  "count conjecture failures in the exit code");
    add_compute_opts(cmd);
    add_format(cmd);
  };
  const auto fill_suite_opts = [&] {
    suite_opts.threads = threads;
    suite_opts.force = force;
    suite_opts.budget.max_steps = budget_steps;
    suite_opts.budget.force = force;
  };

  auto* c_verify = app.add_subcommand(
      "verify", "run every check: theorem checks gate the exit code, conjecture checks report");
  add_suite_opts(c_verify);
  c_verify->callback([&] {
    const ReportFormat fmt = report_format(parse_out_format(format_name), "verify");
    fill_suite_opts();
    auto reports = thetalab::run_theorem_suite(suite_opts);
    const bool theorems_failed = thetalab::any_failed(reports);
    const auto conjectures = thetalab::run_conjecture_suite(suite_opts);
    reports.insert(reports.end(), conjectures.begin(), conjectures.end());
    std::cout << render_reports(reports, fmt, "verify", suite_opts);
    if (theorems_failed || (suite_opts.strict_conjectures && thetalab::any_failed(conjectures)))
      rc = 1;
  });

  auto* c_conjecture =
      app.add_subcommand("conjecture", "run only the conjecture checks (consistency, not proof)");
  add_suite_opts(c_conjecture);
  c_conjecture->callback([&] {
    const ReportFormat fmt = report_format(parse_out_format(format_name), "conjecture");
    fill_suite_opts();
    const auto reports = thetalab::run_conjecture_suite(suite_opts);
    std::cout << render_reports(reports, fmt, "conjectures", suite_opts);
    if (suite_opts.strict_conjectures && thetalab::any_failed(reports)) rc = 1;
  });

  std::string period_sigma;
  int period_n_max = 8;
  int period_k_max = 14;
  auto* c_period = app.add_subcommand(
      "periodicity", "group exponents k by equality of the fixed-count vector (f_n^k)_n");
  auto* opt_period_sigma = c_period->add_option(
      "--sigma", period_sigma, "restrict to sigma-avoiders (default: all of S_n)");
  c_period->add_option("--n-max", period_n_max, "lengths compared")->capture_default_str();
  c_period->add_option("--k-max", period_k_max, "exponents grouped")->capture_default_str();
  add_compute_opts(c_period);
  add_format(c_period);
  c_period->callback([&] {
    const ReportFormat fmt = report_format(parse_out_format(format_name), "periodicity");
    std::optional<Pattern> sigma;
    if (opt_period_sigma->count() > 0) sigma = Pattern::parse(period_sigma);
    const auto pc =
        thetalab::periodicity_classes(sigma, period_n_max, period_k_max, enum_options());
    std::cout << render_periodicity(pc, fmt);
  });

  std::string table_name;
  int table_n_max = 0;
  auto* c_table = app.add_subcommand("table", "recompute one of the headline tables");
  c_table->add_option("--id", table_name, "table1, table2, f2, or conj57")->required();
  c_table->add_option("--n-max", table_n_max, "columns to compute (default per table)");
  add_compute_opts(c_table);
  add_format(c_table);
  c_table->callback([&] {
    const ReportFormat fmt = report_format(parse_out_format(format_name), "table");
    const auto id = thetalab::table_id_from_name(table_name);
    if (!id) {
      throw std::invalid_argument("unknown --id '" + table_name +
                                  "' (expected table1, table2, f2, or conj57)");
    }
    const int n_max = table_n_max > 0 ? table_n_max : thetalab::table_default_n_max(*id);
    std::cout << emit_table(*id, n_max, fmt, enum_options());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const thetalab::FeasibilityError& e) {
    std::cerr << "thetalab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "thetalab: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
