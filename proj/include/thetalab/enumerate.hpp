#pragma once
// Exhaustive and pruned sweeps over S_n: streaming generation of the
// sigma-avoiders, counts of permutations whose theta-iterates stay
// avoiding or return to the start, the full theta-orbit census, and the
// structural classifiers the verification suites exercise.
//
// Every potentially expensive entry point projects its step count first
// and refuses to start when the projection exceeds the budget, so a typo
// like n=16 fails in microseconds instead of hogging the machine.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "thetalab/patterns.hpp"

namespace thetalab {

struct Budget {
  std::uint64_t max_steps = 10'000'000'000ULL;  // projected elementary steps
  bool force = false;                           // run anyway (memory caps still apply)
};

class FeasibilityError : public std::runtime_error {
public:
  FeasibilityError(std::uint64_t projected, std::uint64_t budget);
  std::uint64_t projected() const { return projected_; }
  std::uint64_t budget() const { return budget_; }

private:
  std::uint64_t projected_;
  std::uint64_t budget_;
};

class MemoryBudgetError : public std::runtime_error {
public:
  explicit MemoryBudgetError(const std::string& what) : std::runtime_error(what) {}
};

struct EnumOptions {
  int threads = 1;
  Budget budget{};
};

// Exact node count of the avoider DFS for a length-3 pattern: a prefix on
// an m-subset avoids sigma in Catalan(m) ways. Upper-bound heuristic for
// longer patterns. Saturates at UINT64_MAX.
std::uint64_t projected_avoider_nodes(int n);
// Nodes plus the per-leaf cost of walking k theta-steps.
std::uint64_t projected_query_steps(int n, int k);

void ensure_budget(std::uint64_t projected, const Budget& budget);

// Streams the sigma-avoiders of S_n in lexicographic order.
void for_each_avoider(int n, const Pattern& sigma,
                      const std::function<void(const Permutation&)>& visit);

std::uint64_t count_avoiders(int n, const Pattern& sigma, const EnumOptions& opts = {});

// |{pi in S_n : theta^j(pi) avoids sigma for all 0 <= j <= k}|
std::uint64_t count_T(int n, const Pattern& sigma, int k, const EnumOptions& opts = {});

// |{pi in S_n : pi avoids sigma and theta^k(pi) = pi}|
std::uint64_t count_F_sigma(int n, const Pattern& sigma, int k, const EnumOptions& opts = {});

// counts[j] = sigma-avoiders whose orbit length is exactly j (1 <= j <=
// k_max); counts[0] = avoiders whose orbit is longer than k_max. From
// this histogram every count_F_sigma(n, sigma, k <= k_max) follows.
std::vector<std::uint64_t> avoider_period_counts(int n, const Pattern& sigma, int k_max,
                                                 const EnumOptions& opts = {});

// Orbit-length histogram of theta over all of S_n.
struct OrbitCensus {
  int n = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // orbit length -> #orbits
  // Number of theta^k-fixed permutations: sum of d * histogram[d] over d | k.
  std::uint64_t fixed_count(std::uint64_t k) const;
  std::uint64_t orbit_count() const;
  std::uint64_t element_count() const;
};
OrbitCensus orbit_census(int n, const EnumOptions& opts = {});

std::uint64_t count_F_all(int n, int k, const EnumOptions& opts = {});
// Same number by walking every rank independently; no bitmap, O(n! k).
std::uint64_t count_F_all_direct(int n, int k);

// Irreducible pi with pi and theta(pi) both avoiding 321.
std::uint64_t count_irreducible_T321(int n, const EnumOptions& opts = {});
// ...split by the last entry of theta(pi).
std::uint64_t count_a_ni(int n, int i, const EnumOptions& opts = {});
std::vector<std::uint64_t> count_a_ni_all(int n, const EnumOptions& opts = {});  // [0]=unused

// Cyclic pi inside T_n(sigma) (one n-cycle), and the variant that asks
// theta(pi) to be cyclic instead.
std::uint64_t count_cyclic_T(int n, const Pattern& sigma, const EnumOptions& opts = {});
std::uint64_t count_cyclic_image_T(int n, const Pattern& sigma, const EnumOptions& opts = {});

// Structural conclusions checked pointwise by the suites.
enum class StructuralLemma {
  pos_of_n_132,       // position of n in theta(pi) is 1, n-1, or n
  fixed_interval_213, // at most one non-trivial cycle; its support minus {n} is an interval
  irred_end_321,      // theta(pi) ends with n-1, or with (n, i) for ceil(n/2) <= i <= n-2
  order2_shape,       // pi_j = n forces pi_{j+1} = j; pi_n = r forces pi_{n-1} = r+1
};
bool structural_check(const Permutation& pi, StructuralLemma which);

// ---- counting queries (CLI surface + cache records) --------------------

enum class QueryKind { T, F, FAll, AIrred, ANi, CyclicT };
std::string query_kind_name(QueryKind k);
std::optional<QueryKind> query_kind_from_name(std::string_view name);

struct CountQuery {
  QueryKind kind = QueryKind::T;
  std::optional<Pattern> sigma;
  int k = 1;
  int n = 1;
  std::optional<int> i;
};
void validate_query(const CountQuery& q);  // throws std::invalid_argument
std::uint64_t run_query(const CountQuery& q, const EnumOptions& opts = {});

// Append-only CSV cache of finished counts: kind,sigma,k,n,i,count.
class CountCache {
public:
  explicit CountCache(std::string path);
  static std::string default_path();  // $THETALAB_CACHE or ./thetalab-cache.csv
  const std::string& path() const { return path_; }
  std::size_t size() const { return entries_.size(); }
  std::optional<std::uint64_t> lookup(const CountQuery& q) const;
  void record(const CountQuery& q, std::uint64_t count);

private:
  std::string path_;
  std::map<std::string, std::uint64_t> entries_;
};

namespace detail {

// Depth-first generation of sigma-avoiding words, prefix extension pruned
// by "does an occurrence end at the new value". Visit receives the word
// buffer and its length.
template <class Visit>
void avoider_dfs(int n, const Pattern& sigma, std::uint8_t* word, int depth, std::uint32_t used,
                 Visit&& visit) {
  if (depth == n) {
    visit(static_cast<const std::uint8_t*>(word), n);
    return;
  }
  for (int v = 1; v <= n; ++v) {
    const std::uint32_t bit = 1u << (v - 1);
    if (used & bit) continue;
    if (extension_hit(word, depth, static_cast<std::uint8_t>(v), sigma)) continue;
    word[depth] = static_cast<std::uint8_t>(v);
    avoider_dfs(n, sigma, word, depth + 1, used | bit, visit);
  }
}

// Counts avoiders satisfying pred. pred must be pure: it may use stack
// scratch but no shared mutable state, because tasks run on worker
// threads (tasks are split by the first two word values).
template <class Pred>
std::uint64_t scan_count(int n, const Pattern& sigma, int threads, Pred pred) {
  if (n <= 7 || threads <= 1) {
    std::uint64_t total = 0;
    std::uint8_t word[kMaxLength];
    avoider_dfs(n, sigma, word, 0, 0, [&](const std::uint8_t* w, int len) {
      if (pred(w, len)) ++total;
    });
    return total;
  }
  std::atomic<std::uint64_t> total{0};
  std::atomic<int> next_task{0};
  const int task_count = n * n;
  auto worker = [&] {
    std::uint64_t local = 0;
    std::uint8_t word[kMaxLength];
    for (;;) {
      const int t = next_task.fetch_add(1, std::memory_order_relaxed);
      if (t >= task_count) break;
      const int v1 = t / n + 1, v2 = t % n + 1;
      if (v1 == v2) continue;
      if (extension_hit(word, 0, static_cast<std::uint8_t>(v1), sigma)) continue;
      word[0] = static_cast<std::uint8_t>(v1);
      if (extension_hit(word, 1, static_cast<std::uint8_t>(v2), sigma)) continue;
      word[1] = static_cast<std::uint8_t>(v2);
      const std::uint32_t used = (1u << (v1 - 1)) | (1u << (v2 - 1));
      avoider_dfs(n, sigma, word, 2, used, [&](const std::uint8_t* w, int len) {
        if (pred(w, len)) ++local;
      });
    }
    total.fetch_add(local, std::memory_order_relaxed);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return total.load();
}

// Histogram variant: slot(w, len) returns the bucket index or -1 to skip.
template <class Slot>
std::vector<std::uint64_t> scan_hist(int n, const Pattern& sigma, int threads, int slots,
                                     Slot slot) {
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(slots), 0);
  if (n <= 7 || threads <= 1) {
    std::uint8_t word[kMaxLength];
    avoider_dfs(n, sigma, word, 0, 0, [&](const std::uint8_t* w, int len) {
      const int s = slot(w, len);
      if (s >= 0) ++hist[static_cast<std::size_t>(s)];
    });
    return hist;
  }
  std::mutex merge_mutex;
  std::atomic<int> next_task{0};
  const int task_count = n * n;
  auto worker = [&] {
    std::vector<std::uint64_t> local(static_cast<std::size_t>(slots), 0);
    std::uint8_t word[kMaxLength];
    for (;;) {
      const int t = next_task.fetch_add(1, std::memory_order_relaxed);
      if (t >= task_count) break;
      const int v1 = t / n + 1, v2 = t % n + 1;
      if (v1 == v2) continue;
      if (extension_hit(word, 0, static_cast<std::uint8_t>(v1), sigma)) continue;
      word[0] = static_cast<std::uint8_t>(v1);
      if (extension_hit(word, 1, static_cast<std::uint8_t>(v2), sigma)) continue;
      word[1] = static_cast<std::uint8_t>(v2);
      const std::uint32_t used = (1u << (v1 - 1)) | (1u << (v2 - 1));
      avoider_dfs(n, sigma, word, 2, used, [&](const std::uint8_t* w, int len) {
        const int s = slot(w, len);
        if (s >= 0) ++local[static_cast<std::size_t>(s)];
      });
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (int j = 0; j < slots; ++j) hist[static_cast<std::size_t>(j)] += local[j];
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return hist;
}

// Orbit length if it is <= cap, else 0. Walks theta from `w`.
std::uint64_t first_return_within(const std::uint8_t* w, int n, std::uint64_t cap);

}  // namespace detail

}  // namespace thetalab
