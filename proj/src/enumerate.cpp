#include "thetalab/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "thetalab/series.hpp"

namespace thetalab {

namespace {

std::string human_steps(std::uint64_t v) {
  if (v == UINT64_MAX) return "more than 1.8e19";
  std::ostringstream os;
  if (v >= 1'000'000'000ULL) {
    os.precision(2);
    os << std::fixed << static_cast<double>(v) / 1e9 << "e9";
  } else {
    os << v;
  }
  return os.str();
}

void require_n(int n, int lo = 1) {
  if (n < lo || n > kMaxLength) {
    throw std::invalid_argument("n = " + std::to_string(n) + " is outside the supported range " +
                                std::to_string(lo) + ".." + std::to_string(kMaxLength));
  }
}

bool word_is_irreducible(const std::uint8_t* w, int n) {
  int mx = 0;
  for (int i = 0; i < n - 1; ++i) {
    mx = std::max(mx, static_cast<int>(w[i]));
    if (mx == i + 1) return false;
  }
  return n >= 1;
}

bool word_is_cyclic(const std::uint8_t* w, int n) {
  int count = 0;
  int v = 1;
  do {
    v = w[v - 1];
    ++count;
  } while (v != 1);
  return count == n;
}

// Saturating helpers for step projections.
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t clamp_bigint(const BigInt& v) {
  if (v > BigInt(UINT64_MAX)) return UINT64_MAX;
  return v.convert_to<std::uint64_t>();
}

}  // namespace

FeasibilityError::FeasibilityError(std::uint64_t projected, std::uint64_t budget)
    : std::runtime_error("projected work of " + human_steps(projected) +
                         " elementary steps exceeds the budget of " + human_steps(budget) +
                         " (raise THETALAB_BUDGET or pass force)"),
      projected_(projected),
      budget_(budget) {}

std::uint64_t projected_avoider_nodes(int n) {
  BigInt total = 0;
  for (int m = 0; m <= n; ++m) total += binom(n, m) * catalan(m);
  return clamp_bigint(total);
}

std::uint64_t projected_query_steps(int n, int k) {
  const std::uint64_t leaves = clamp_bigint(catalan(n));
  const auto kk = static_cast<std::uint64_t>(std::max(k, 1));
  const std::uint64_t walk = leaves > UINT64_MAX / kk ? UINT64_MAX : leaves * kk;
  return sat_add(projected_avoider_nodes(n), walk);
}

void ensure_budget(std::uint64_t projected, const Budget& budget) {
  if (!budget.force && projected > budget.max_steps) {
    throw FeasibilityError(projected, budget.max_steps);
  }
}

void for_each_avoider(int n, const Pattern& sigma,
                      const std::function<void(const Permutation&)>& visit) {
  require_n(n);
  std::uint8_t word[kMaxLength];
  detail::avoider_dfs(n, sigma, word, 0, 0, [&](const std::uint8_t* w, int len) {
    visit(Permutation::unchecked(w, len));
  });
}

std::uint64_t count_avoiders(int n, const Pattern& sigma, const EnumOptions& opts) {
  require_n(n);
  ensure_budget(projected_avoider_nodes(n), opts.budget);
  return detail::scan_count(n, sigma, opts.threads, [](const std::uint8_t*, int) { return true; });
}

namespace detail {

std::uint64_t first_return_within(const std::uint8_t* w, int n, std::uint64_t cap) {
  std::uint8_t buf[2][kMaxLength];
  kernel::theta_into(w, buf[0], n);
  int cur = 0;
  for (std::uint64_t step = 1; step <= cap; ++step) {
    if (std::memcmp(buf[cur], w, static_cast<std::size_t>(n)) == 0) return step;
    kernel::theta_into(buf[cur], buf[1 - cur], n);
    cur = 1 - cur;
  }
  return 0;
}

}  // namespace detail

std::uint64_t count_T(int n, const Pattern& sigma, int k, const EnumOptions& opts) {
  require_n(n);
  if (k < 1) throw std::invalid_argument("count_T needs k >= 1");
  ensure_budget(projected_query_steps(n, k), opts.budget);
  return detail::scan_count(n, sigma, opts.threads, [&sigma, k](const std::uint8_t* w, int len) {
    std::uint8_t buf[2][kMaxLength];
    const std::uint8_t* cur = w;
    std::uint8_t* next = buf[0];
    for (int j = 1; j <= k; ++j) {
      kernel::theta_into(cur, next, len);
      if (detail::contains_word(next, len, sigma)) return false;
      cur = next;
      next = (cur == buf[0]) ? buf[1] : buf[0];
    }
    return true;
  });
}

std::uint64_t count_F_sigma(int n, const Pattern& sigma, int k, const EnumOptions& opts) {
  require_n(n);
  if (k < 1) throw std::invalid_argument("count_F_sigma needs k >= 1");
  ensure_budget(projected_query_steps(n, k), opts.budget);
  const auto kk = static_cast<std::uint64_t>(k);
  return detail::scan_count(n, sigma, opts.threads, [kk](const std::uint8_t* w, int len) {
    const std::uint64_t ret = detail::first_return_within(w, len, kk);
    return ret != 0 && kk % ret == 0;
  });
}

std::vector<std::uint64_t> avoider_period_counts(int n, const Pattern& sigma, int k_max,
                                                 const EnumOptions& opts) {
  require_n(n);
  if (k_max < 1) throw std::invalid_argument("avoider_period_counts needs k_max >= 1");
  ensure_budget(projected_query_steps(n, k_max), opts.budget);
  const auto cap = static_cast<std::uint64_t>(k_max);
  return detail::scan_hist(n, sigma, opts.threads, k_max + 1, [cap](const std::uint8_t* w, int len) {
    return static_cast<int>(detail::first_return_within(w, len, cap));
  });
}

std::uint64_t OrbitCensus::fixed_count(std::uint64_t k) const {
  std::uint64_t total = 0;
  for (const auto& [len, orbits] : histogram) {
    if (k % len == 0) total += len * orbits;
  }
  return total;
}

std::uint64_t OrbitCensus::orbit_count() const {
  std::uint64_t total = 0;
  for (const auto& [len, orbits] : histogram) total += orbits;
  return total;
}

std::uint64_t OrbitCensus::element_count() const {
  std::uint64_t total = 0;
  for (const auto& [len, orbits] : histogram) total += len * orbits;
  return total;
}

OrbitCensus orbit_census(int n, const EnumOptions& opts) {
  require_n(n);
  if (n > 13) {
    throw MemoryBudgetError("the orbit census bitmap for n = " + std::to_string(n) +
                            " would need more than 10 GB; n <= 13 is the hard cap");
  }
  if (n == 13 && !opts.budget.force) {
    throw MemoryBudgetError(
        "the orbit census for n = 13 needs a ~779 MB bitmap; pass force to allow it");
  }
  const std::uint64_t total = factorial(n);
  ensure_budget(total, opts.budget);

  const std::uint64_t words = (total + 63) / 64;
  std::unique_ptr<std::atomic<std::uint64_t>[]> bits(new std::atomic<std::uint64_t>[words]());
  auto test = [&](std::uint64_t r) {
    return (bits[r >> 6].load(std::memory_order_relaxed) >> (r & 63)) & 1u;
  };
  auto set = [&](std::uint64_t r) {
    bits[r >> 6].fetch_or(1ULL << (r & 63), std::memory_order_relaxed);
  };

  OrbitCensus census;
  census.n = n;
  std::mutex merge_mutex;
  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  std::atomic<std::uint64_t> next_chunk{0};

  auto worker = [&] {
    std::map<std::uint64_t, std::uint64_t> local;
    std::uint8_t start[kMaxLength];
    std::uint8_t buf[2][kMaxLength];
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) break;
      const std::uint64_t lo = c * kChunk;
      const std::uint64_t hi = std::min(total, lo + kChunk);
      for (std::uint64_t r = lo; r < hi; ++r) {
        if (test(r)) continue;
        set(r);
        kernel::unrank_into(r, n, start);
        // Walk the orbit. Ranks above r are marked as visited; meeting a
        // rank below r means some earlier rank owns this orbit, so the
        // walk stops and counts nothing (the owner's walk covers it).
        std::uint64_t length = 0;
        bool owner = true;
        const std::uint8_t* cur = start;
        std::uint8_t* next = buf[0];
        for (;;) {
          kernel::theta_into(cur, next, n);
          ++length;
          if (std::memcmp(next, start, static_cast<std::size_t>(n)) == 0) break;
          const std::uint64_t x = kernel::rank_word(next, n);
          if (x < r) {
            owner = false;
            break;
          }
          set(x);
          cur = next;
          next = (cur == buf[0]) ? buf[1] : buf[0];
        }
        if (owner) ++local[length];
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (const auto& [len, cnt] : local) census.histogram[len] += cnt;
  };

  const int threads = std::max(1, opts.threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return census;
}

std::uint64_t count_F_all(int n, int k, const EnumOptions& opts) {
  if (k < 1) throw std::invalid_argument("count_F_all needs k >= 1");
  return orbit_census(n, opts).fixed_count(static_cast<std::uint64_t>(k));
}

std::uint64_t count_F_all_direct(int n, int k) {
  require_n(n);
  if (k < 1) throw std::invalid_argument("count_F_all_direct needs k >= 1");
  const std::uint64_t total = factorial(n);
  std::uint64_t fixed = 0;
  std::uint8_t w[kMaxLength];
  for (std::uint64_t r = 0; r < total; ++r) {
    kernel::unrank_into(r, n, w);
    const std::uint64_t ret = detail::first_return_within(w, n, static_cast<std::uint64_t>(k));
    if (ret != 0 && static_cast<std::uint64_t>(k) % ret == 0) ++fixed;
  }
  return fixed;
}

namespace {

const Pattern& pattern321() {
  static const Pattern p = Pattern::parse("321");
  return p;
}

// Shared leaf test for the irreducible family: pi irreducible and
// theta(pi) still avoiding 321. Returns the last entry of theta(pi), or
// 0 when the test fails.
int irreducible_image_end(const std::uint8_t* w, int len) {
  if (!word_is_irreducible(w, len)) return 0;
  std::uint8_t img[kMaxLength];
  kernel::theta_into(w, img, len);
  if (detail::contains_word(img, len, pattern321())) return 0;
  return img[len - 1];
}

}  // namespace

std::uint64_t count_irreducible_T321(int n, const EnumOptions& opts) {
  require_n(n);
  ensure_budget(projected_query_steps(n, 1), opts.budget);
  return detail::scan_count(n, pattern321(), opts.threads, [](const std::uint8_t* w, int len) {
    return irreducible_image_end(w, len) != 0;
  });
}

std::uint64_t count_a_ni(int n, int i, const EnumOptions& opts) {
  require_n(n);
  if (i < 1 || i > n) throw std::invalid_argument("count_a_ni needs 1 <= i <= n");
  ensure_budget(projected_query_steps(n, 1), opts.budget);
  return detail::scan_count(n, pattern321(), opts.threads, [i](const std::uint8_t* w, int len) {
    return irreducible_image_end(w, len) == i;
  });
}

std::vector<std::uint64_t> count_a_ni_all(int n, const EnumOptions& opts) {
  require_n(n);
  ensure_budget(projected_query_steps(n, 1), opts.budget);
  return detail::scan_hist(n, pattern321(), opts.threads, n + 1,
                           [](const std::uint8_t* w, int len) {
                             const int end = irreducible_image_end(w, len);
                             return end == 0 ? -1 : end;
                           });
}

std::uint64_t count_cyclic_T(int n, const Pattern& sigma, const EnumOptions& opts) {
  require_n(n);
  ensure_budget(projected_query_steps(n, 1), opts.budget);
  return detail::scan_count(n, sigma, opts.threads, [&sigma](const std::uint8_t* w, int len) {
    if (!word_is_cyclic(w, len)) return false;
    std::uint8_t img[kMaxLength];
    kernel::theta_into(w, img, len);
    return !detail::contains_word(img, len, sigma);
  });
}

std::uint64_t count_cyclic_image_T(int n, const Pattern& sigma, const EnumOptions& opts) {
  require_n(n);
  ensure_budget(projected_query_steps(n, 1), opts.budget);
  return detail::scan_count(n, sigma, opts.threads, [&sigma](const std::uint8_t* w, int len) {
    std::uint8_t img[kMaxLength];
    kernel::theta_into(w, img, len);
    if (detail::contains_word(img, len, sigma)) return false;
    return word_is_cyclic(img, len);
  });
}

bool structural_check(const Permutation& pi, StructuralLemma which) {
  const int n = pi.size();
  if (n == 0) throw std::invalid_argument("structural checks need n >= 1");
  switch (which) {
    case StructuralLemma::pos_of_n_132: {
      const Permutation t = theta(pi);
      int pos = 0;
      for (int j = 1; j <= n; ++j) {
        if (t.apply(j) == n) {
          pos = j;
          break;
        }
      }
      return pos == 1 || pos == n - 1 || pos == n;
    }
    case StructuralLemma::fixed_interval_213: {
      // Collect the unique non-trivial cycle, if any.
      std::uint32_t support = 0;
      int cycles = 0;
      std::uint32_t seen = 0;
      for (int v = 1; v <= n; ++v) {
        if (seen & (1u << (v - 1))) continue;
        std::uint32_t cyc = 0;
        int len = 0;
        int u = v;
        do {
          cyc |= 1u << (u - 1);
          ++len;
          u = pi.apply(u);
        } while (u != v);
        seen |= cyc;
        if (len > 1) {
          ++cycles;
          support = cyc;
        }
      }
      if (cycles == 0) return true;
      if (cycles > 1) return false;
      support &= ~(1u << (n - 1));  // drop n if present
      if (support == 0) return true;
      // Contiguous bits = interval.
      const std::uint32_t shifted = support >> std::countr_zero(support);
      return (shifted & (shifted + 1)) == 0;
    }
    case StructuralLemma::irred_end_321: {
      if (n == 1) return true;
      const Permutation t = theta(pi);
      if (t.apply(n) == n - 1) return true;
      if (t.apply(n - 1) != n) return false;
      const int i = t.apply(n);
      return i >= (n + 1) / 2 && i <= n - 2;
    }
    case StructuralLemma::order2_shape: {
      if (pi.apply(n) == n) {
        throw std::invalid_argument("order2_shape expects pi_n != n");
      }
      int j = 0;
      for (int p = 1; p <= n; ++p) {
        if (pi.apply(p) == n) {
          j = p;
          break;
        }
      }
      if (j >= n) return false;  // cannot happen when pi_n != n
      if (pi.apply(j + 1) != j) return false;
      return n >= 2 && pi.apply(n - 1) == pi.apply(n) + 1;
    }
  }
  throw std::invalid_argument("unknown structural lemma");
}

// ---- queries and cache --------------------------------------------------

std::string query_kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::T: return "t";
    case QueryKind::F: return "f";
    case QueryKind::FAll: return "f-all";
    case QueryKind::AIrred: return "a";
    case QueryKind::ANi: return "a-ni";
    case QueryKind::CyclicT: return "cyclic-t";
  }
  return "?";
}

std::optional<QueryKind> query_kind_from_name(std::string_view name) {
  if (name == "t") return QueryKind::T;
  if (name == "f") return QueryKind::F;
  if (name == "f-all") return QueryKind::FAll;
  if (name == "a") return QueryKind::AIrred;
  if (name == "a-ni") return QueryKind::ANi;
  if (name == "cyclic-t") return QueryKind::CyclicT;
  return std::nullopt;
}

void validate_query(const CountQuery& q) {
  require_n(q.n);
  if (q.k < 1) throw std::invalid_argument("queries need k >= 1");
  const bool needs_sigma =
      q.kind == QueryKind::T || q.kind == QueryKind::F || q.kind == QueryKind::CyclicT;
  if (needs_sigma && !q.sigma) {
    throw std::invalid_argument("query kind '" + query_kind_name(q.kind) + "' needs a pattern");
  }
  if (q.kind == QueryKind::FAll && q.sigma) {
    throw std::invalid_argument("query kind 'f-all' ranges over all of S_n; drop the pattern");
  }
  if ((q.kind == QueryKind::AIrred || q.kind == QueryKind::ANi) && q.sigma &&
      to_string(q.sigma->word()) != "321") {
    throw std::invalid_argument("the irreducible family is defined against the pattern 321");
  }
  const bool uses_k = q.kind == QueryKind::T || q.kind == QueryKind::F || q.kind == QueryKind::FAll;
  if (!uses_k && q.k != 1) {
    throw std::invalid_argument("query kind '" + query_kind_name(q.kind) + "' does not take k");
  }
  if (q.kind == QueryKind::ANi) {
    if (!q.i) throw std::invalid_argument("query kind 'a-ni' needs the ending value i");
    if (*q.i < 1 || *q.i > q.n) throw std::invalid_argument("a-ni needs 1 <= i <= n");
  } else if (q.i) {
    throw std::invalid_argument("only query kind 'a-ni' takes i");
  }
}

std::uint64_t run_query(const CountQuery& q, const EnumOptions& opts) {
  validate_query(q);
  switch (q.kind) {
    case QueryKind::T: return count_T(q.n, *q.sigma, q.k, opts);
    case QueryKind::F: return count_F_sigma(q.n, *q.sigma, q.k, opts);
    case QueryKind::FAll: return count_F_all(q.n, q.k, opts);
    case QueryKind::AIrred: return count_irreducible_T321(q.n, opts);
    case QueryKind::ANi: return count_a_ni(q.n, *q.i, opts);
    case QueryKind::CyclicT: return count_cyclic_T(q.n, *q.sigma, opts);
  }
  throw std::invalid_argument("unknown query kind");
}

namespace {

constexpr const char* kCacheHeader = "kind,sigma,k,n,i,count";

std::string cache_key(const CountQuery& q) {
  std::string key = query_kind_name(q.kind);
  key += ',';
  if (q.sigma) key += to_string(q.sigma->word());
  key += ',';
  key += std::to_string(q.k);
  key += ',';
  key += std::to_string(q.n);
  key += ',';
  if (q.i) key += std::to_string(*q.i);
  return key;
}

}  // namespace

CountCache::CountCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // nothing cached yet
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == kCacheHeader) continue;
    const auto last_comma = line.rfind(',');
    if (last_comma == std::string::npos) {
      throw std::runtime_error(path_ + ":" + std::to_string(line_no) + ": malformed cache line");
    }
    const std::string key = line.substr(0, last_comma);
    const std::string value = line.substr(last_comma + 1);
    try {
      entries_[key] = std::stoull(value);
    } catch (const std::exception&) {
      throw std::runtime_error(path_ + ":" + std::to_string(line_no) +
                               ": malformed cache count '" + value + "'");
    }
  }
}

std::string CountCache::default_path() {
  if (const char* env = std::getenv("THETALAB_CACHE"); env && *env) return env;
  return "thetalab-cache.csv";
}

std::optional<std::uint64_t> CountCache::lookup(const CountQuery& q) const {
  const auto it = entries_.find(cache_key(q));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CountCache::record(const CountQuery& q, std::uint64_t count) {
  const std::string key = cache_key(q);
  if (const auto it = entries_.find(key); it != entries_.end()) return;  // append-only
  const bool fresh = entries_.empty() && !std::ifstream(path_).good();
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot open cache file " + path_ + " for appending");
  if (fresh) out << kCacheHeader << '\n';
  out << key << ',' << count << '\n';
  if (!out) throw std::runtime_error("failed writing cache file " + path_);
  entries_[key] = count;
}

}  // namespace thetalab
