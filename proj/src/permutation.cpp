#include "thetalab/permutation.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <stdexcept>

namespace thetalab {

namespace {

constexpr std::array<std::uint64_t, 21> kFactorial = [] {
  std::array<std::uint64_t, 21> f{};
  f[0] = 1;
  for (int i = 1; i <= 20; ++i) f[i] = f[i - 1] * static_cast<std::uint64_t>(i);
  return f;
}();

[[noreturn]] void bad_input(const std::string& msg) {
  throw std::invalid_argument(msg);
}

}  // namespace

Permutation Permutation::from_values(std::span<const int> values) {
  const std::size_t n = values.size();
  if (n > static_cast<std::size_t>(kMaxLength)) {
    bad_input("permutation length " + std::to_string(n) + " exceeds the supported maximum " +
              std::to_string(kMaxLength));
  }
  std::uint32_t seen = 0;
  Permutation p;
  p.n_ = static_cast<std::uint8_t>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int v = values[i];
    if (v < 1) bad_input("value " + std::to_string(v) + " is not a positive integer");
    if (v > static_cast<int>(n)) {
      bad_input("value " + std::to_string(v) + " exceeds length " + std::to_string(n));
    }
    const std::uint32_t bit = 1u << (v - 1);
    if (seen & bit) bad_input("duplicate value " + std::to_string(v));
    seen |= bit;
    p.word_[i] = static_cast<std::uint8_t>(v);
  }
  return p;
}

Permutation Permutation::from_values(std::initializer_list<int> values) {
  return from_values(std::span<const int>(values.begin(), values.size()));
}

Permutation Permutation::identity(int n) {
  if (n < 0 || n > kMaxLength) bad_input("identity length out of range");
  Permutation p;
  p.n_ = static_cast<std::uint8_t>(n);
  for (int i = 0; i < n; ++i) p.word_[i] = static_cast<std::uint8_t>(i + 1);
  return p;
}

Permutation Permutation::unchecked(const std::uint8_t* word, int n) {
  Permutation p;
  p.n_ = static_cast<std::uint8_t>(n);
  std::memcpy(p.word_.data(), word, static_cast<std::size_t>(n));
  return p;
}

namespace kernel {

void theta_into(const std::uint8_t* src, std::uint8_t* dst, int n) {
  // Cycles led by their maxima appear in increasing-maxima order, so the
  // cycle whose maximum is the largest unvisited value goes at the back.
  std::uint32_t unvisited = (n == 0) ? 0u : ((1u << n) - 1u);
  int write = n;
  std::uint8_t cyc[kMaxLength];
  for (int m = n; m >= 1; --m) {
    if (!(unvisited & (1u << (m - 1)))) continue;
    int len = 0;
    int v = m;
    do {
      cyc[len++] = static_cast<std::uint8_t>(v);
      unvisited &= ~(1u << (v - 1));
      v = src[v - 1];
    } while (v != m);
    write -= len;
    std::memcpy(dst + write, cyc, static_cast<std::size_t>(len));
  }
}

void theta_inverse_into(const std::uint8_t* src, std::uint8_t* dst, int n) {
  // Cut before each left-to-right maximum; each segment is a cycle led by
  // that maximum, so within a segment each entry maps to the next one and
  // the last entry maps back to the leader.
  int max_so_far = 0;
  int leader = 0;
  int prev = 0;
  for (int i = 0; i < n; ++i) {
    const int v = src[i];
    if (v > max_so_far) {
      if (prev != 0) dst[prev - 1] = static_cast<std::uint8_t>(leader);
      leader = v;
      max_so_far = v;
    } else {
      dst[prev - 1] = static_cast<std::uint8_t>(v);
    }
    prev = v;
  }
  if (prev != 0) dst[prev - 1] = static_cast<std::uint8_t>(leader);
}

std::uint64_t rank_word(const std::uint8_t* word, int n) {
  std::uint64_t r = 0;
  std::uint32_t seen = 0;
  for (int i = 0; i < n; ++i) {
    const int v = word[i];
    const std::uint32_t below = seen & ((1u << (v - 1)) - 1u);
    const std::uint64_t smaller_unused =
        static_cast<std::uint64_t>(v - 1 - std::popcount(below));
    r += smaller_unused * kFactorial[n - 1 - i];
    seen |= 1u << (v - 1);
  }
  return r;
}

void unrank_into(std::uint64_t r, int n, std::uint8_t* out) {
  std::uint32_t avail = (n == 0) ? 0u : ((1u << n) - 1u);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t f = kFactorial[n - 1 - i];
    int c = static_cast<int>(r / f);
    r %= f;
    std::uint32_t m = avail;
    while (c-- > 0) m &= m - 1;  // drop the c smallest available values
    const int v = std::countr_zero(m) + 1;
    avail &= ~(1u << (v - 1));
    out[i] = static_cast<std::uint8_t>(v);
  }
}

}  // namespace kernel

StandardCycleForm standard_cycle_form(const Permutation& pi) {
  const int n = pi.size();
  StandardCycleForm cf;
  cf.n = n;
  std::uint32_t unvisited = (n == 0) ? 0u : ((1u << n) - 1u);
  for (int m = 1; m <= n; ++m) {
    if (!(unvisited & (1u << (m - 1)))) continue;
    // m is the smallest value of an unvisited cycle; find the cycle and
    // rotate it so its maximum leads.
    std::vector<int> cyc;
    int v = m;
    do {
      cyc.push_back(v);
      unvisited &= ~(1u << (v - 1));
      v = pi.apply(v);
    } while (v != m);
    auto mx = std::max_element(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), mx, cyc.end());
    cf.cycles.push_back(std::move(cyc));
  }
  std::sort(cf.cycles.begin(), cf.cycles.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return cf;
}

Permutation theta(const Permutation& pi) {
  std::uint8_t out[kMaxLength];
  kernel::theta_into(pi.data(), out, pi.size());
  return Permutation::unchecked(out, pi.size());
}

Permutation theta_inverse(const Permutation& pi) {
  std::uint8_t out[kMaxLength];
  kernel::theta_inverse_into(pi.data(), out, pi.size());
  return Permutation::unchecked(out, pi.size());
}

Permutation theta_power(const Permutation& pi, long long k) {
  if (pi.size() <= 1) return pi;
  unsigned long long steps;
  bool forward = k >= 0;
  if (k >= -64 && k <= 64) {
    steps = static_cast<unsigned long long>(forward ? k : -k);
  } else {
    // Large exponents: reduce modulo the orbit length first.
    const std::uint64_t len = orbit_length(pi);
    long long m = k % static_cast<long long>(len);
    if (m < 0) m += static_cast<long long>(len);
    steps = static_cast<unsigned long long>(m);
    forward = true;
  }
  std::uint8_t buf[2][kMaxLength];
  const int n = pi.size();
  std::memcpy(buf[0], pi.data(), static_cast<std::size_t>(n));
  int cur = 0;
  for (unsigned long long s = 0; s < steps; ++s) {
    if (forward) {
      kernel::theta_into(buf[cur], buf[1 - cur], n);
    } else {
      kernel::theta_inverse_into(buf[cur], buf[1 - cur], n);
    }
    cur = 1 - cur;
  }
  return Permutation::unchecked(buf[cur], n);
}

Permutation direct_sum(const Permutation& a, const Permutation& b) {
  const int n = a.size(), m = b.size();
  if (n + m > kMaxLength) {
    throw std::invalid_argument("direct sum length " + std::to_string(n + m) +
                                " exceeds the supported maximum " + std::to_string(kMaxLength));
  }
  std::uint8_t out[kMaxLength];
  std::memcpy(out, a.data(), static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) out[n + i] = static_cast<std::uint8_t>(b.data()[i] + n);
  return Permutation::unchecked(out, n + m);
}

std::vector<Permutation> decompose_irreducible(const Permutation& pi) {
  std::vector<Permutation> out;
  const int n = pi.size();
  int start = 0;
  int mx = 0;
  std::uint8_t buf[kMaxLength];
  for (int i = 0; i < n; ++i) {
    mx = std::max(mx, static_cast<int>(pi.data()[i]));
    if (mx == i + 1) {  // pi maps {1..i+1} onto itself: component boundary
      const int len = i + 1 - start;
      for (int j = 0; j < len; ++j) {
        buf[j] = static_cast<std::uint8_t>(pi.data()[start + j] - start);
      }
      out.push_back(Permutation::unchecked(buf, len));
      start = i + 1;
    }
  }
  return out;
}

bool is_irreducible(const Permutation& pi) {
  const int n = pi.size();
  if (n == 0) return false;
  int mx = 0;
  for (int i = 0; i < n - 1; ++i) {
    mx = std::max(mx, static_cast<int>(pi.data()[i]));
    if (mx == i + 1) return false;
  }
  return true;
}

Permutation apply_symmetry(const Permutation& pi, Symmetry s) {
  const int n = pi.size();
  std::uint8_t out[kMaxLength];
  for (int i = 0; i < n; ++i) {
    const int pos = (s == Symmetry::complement) ? i : n - 1 - i;
    const int v = pi.data()[pos];
    out[i] = static_cast<std::uint8_t>(s == Symmetry::reverse ? v : n + 1 - v);
  }
  return Permutation::unchecked(out, n);
}

bool is_cyclic(const Permutation& pi) {
  const int n = pi.size();
  if (n == 0) return false;
  int count = 0;
  int v = 1;
  do {
    v = pi.apply(v);
    ++count;
  } while (v != 1);
  return count == n;
}

bool is_theta_fixed_shape(const Permutation& pi) {
  const int n = pi.size();
  for (int v = 1; v <= n; ++v) {
    const int u = pi.apply(v);
    if (u == v) continue;
    if (u == v + 1 && v + 1 <= n && pi.apply(v + 1) == v) continue;
    if (u == v - 1 && v - 1 >= 1 && pi.apply(v - 1) == v) continue;
    return false;
  }
  return true;
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial argument out of range");
  return kFactorial[n];
}

std::uint64_t rank(const Permutation& pi) { return kernel::rank_word(pi.data(), pi.size()); }

Permutation unrank(int n, std::uint64_t r) {
  if (n < 0 || n > kMaxLength) throw std::out_of_range("unrank length out of range");
  if (r >= kFactorial[n]) {
    throw std::out_of_range("rank " + std::to_string(r) + " out of range for length " +
                            std::to_string(n));
  }
  std::uint8_t out[kMaxLength];
  kernel::unrank_into(r, n, out);
  return Permutation::unchecked(out, n);
}

std::uint64_t orbit_length(const Permutation& pi, std::uint64_t step_cap) {
  if (pi.size() <= 1) return 1;
  const int n = pi.size();
  std::uint8_t buf[2][kMaxLength];
  std::memcpy(buf[0], pi.data(), static_cast<std::size_t>(n));
  int cur = 0;
  std::uint64_t steps = 0;
  do {
    kernel::theta_into(buf[cur], buf[1 - cur], n);
    cur = 1 - cur;
    ++steps;
    if (steps > step_cap) throw std::runtime_error("orbit walk exceeded the step cap");
  } while (std::memcmp(buf[cur], pi.data(), static_cast<std::size_t>(n)) != 0);
  return steps;
}

OrbitRecord orbit_record(const Permutation& pi, std::uint64_t step_cap) {
  OrbitRecord rec{1, pi};
  if (pi.size() <= 1) return rec;
  const int n = pi.size();
  std::uint8_t buf[2][kMaxLength];
  std::memcpy(buf[0], pi.data(), static_cast<std::size_t>(n));
  std::uint64_t best = kernel::rank_word(buf[0], n);
  int cur = 0;
  std::uint64_t steps = 0;
  for (;;) {
    kernel::theta_into(buf[cur], buf[1 - cur], n);
    cur = 1 - cur;
    ++steps;
    if (steps > step_cap) throw std::runtime_error("orbit walk exceeded the step cap");
    if (std::memcmp(buf[cur], pi.data(), static_cast<std::size_t>(n)) == 0) break;
    const std::uint64_t r = kernel::rank_word(buf[cur], n);
    if (r < best) {
      best = r;
      rec.representative = Permutation::unchecked(buf[cur], n);
    }
  }
  rec.length = steps;
  return rec;
}

Permutation parse_permutation(std::string_view text) {
  std::vector<int> values;
  if (text.find(',') != std::string_view::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t next = text.find(',', pos);
      if (next == std::string_view::npos) next = text.size();
      std::string_view tok = text.substr(pos, next - pos);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      int v = 0;
      auto [p, ec] = std::from_chars(tok.begin(), tok.end(), v);
      if (ec != std::errc() || p != tok.end() || tok.empty()) {
        throw std::invalid_argument("cannot parse permutation entry '" + std::string(tok) + "'");
      }
      values.push_back(v);
      pos = next + 1;
      if (next == text.size()) break;
    }
  } else {
    if (text.empty()) throw std::invalid_argument("empty permutation text");
    for (char c : text) {
      if (c < '1' || c > '9') {
        throw std::invalid_argument(std::string("invalid character '") + c +
                                    "' in compact permutation text");
      }
      values.push_back(c - '0');
    }
  }
  return Permutation::from_values(values);
}

std::string to_string(const Permutation& pi) {
  std::string out;
  const int n = pi.size();
  if (n <= 9) {
    for (int i = 0; i < n; ++i) out += static_cast<char>('0' + pi.data()[i]);
  } else {
    for (int i = 0; i < n; ++i) {
      if (i) out += ',';
      out += std::to_string(pi.data()[i]);
    }
  }
  return out;
}

std::string to_string(const StandardCycleForm& cf) {
  std::string out;
  for (const auto& cyc : cf.cycles) {
    out += '(';
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(cyc[i]);
    }
    out += ')';
  }
  return out;
}

}  // namespace thetalab
