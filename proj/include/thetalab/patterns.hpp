#pragma once
// Classical pattern containment: sigma occurs in pi if some subsequence
// of pi is order-isomorphic to sigma. A backtracking engine handles
// arbitrary pattern lengths; the six length-3 patterns get single-pass
// scans because the enumeration sweeps test them billions of times.
//
// All scans work for any ordered integer type and assume the entries of
// a word are pairwise distinct (permutation words always are).

#include <climits>
#include <cstdint>
#include <span>
#include <string_view>

#include "thetalab/permutation.hpp"

namespace thetalab {

class Pattern {
public:
  explicit Pattern(Permutation word);  // rejects the empty permutation
  static Pattern parse(std::string_view text);

  const Permutation& word() const { return word_; }
  int length() const { return word_.size(); }

  // 0..5 for 123,132,213,231,312,321; -1 for other lengths.
  int code3() const { return code3_; }

  friend bool operator==(const Pattern&, const Pattern&) = default;

private:
  Permutation word_;
  int code3_ = -1;
};

bool contains(const Permutation& pi, const Pattern& sigma);
bool avoids(const Permutation& pi, const Pattern& sigma);

// True iff prefix followed by `next` contains sigma. The enumeration DFS
// extends prefixes that already avoid sigma, so a hit means an occurrence
// ends at `next`; the function itself implements full containment.
bool contains_on_extension(std::span<const int> prefix, int next, const Pattern& sigma);
bool contains_on_extension(std::span<const std::uint8_t> prefix, std::uint8_t next,
                           const Pattern& sigma);

namespace detail {

// ---- streaming scans for the length-3 patterns -------------------------
//
// Scanner123 finds a < b < c (Flip: the mirror image c > b > a) fed in
// word order. min1 is the smallest value so far, mid the smallest value
// that has a smaller value before it; a hit is any value above mid.
template <bool Flip>
struct Scanner123 {
  long long min1 = Flip ? LLONG_MIN : LLONG_MAX;
  long long mid = Flip ? LLONG_MIN : LLONG_MAX;
  static bool lt(long long a, long long b) { return Flip ? b < a : a < b; }
  bool feed(long long x) {
    if (lt(mid, x)) return true;
    if (lt(min1, x) && lt(x, mid)) mid = x;
    if (lt(x, min1)) min1 = x;
    return false;
  }
};

// Scanner132 finds the pattern 132 (Flip: 312) fed in *reverse* word
// order: the stack holds candidates for the '3'; popping y on a larger
// arrival records y as the best '2' seen; any later smaller value is a
// valid '1'. `third` never decreases, so correctness is order-independent.
template <bool Flip>
struct Scanner132 {
  long long third = Flip ? LLONG_MAX : LLONG_MIN;
  long long stack[kMaxLength * 2 + 2];
  int top = 0;
  static bool lt(long long a, long long b) { return Flip ? b < a : a < b; }
  bool feed(long long x) {
    if (lt(x, third)) return true;
    while (top > 0 && lt(stack[top - 1], x)) third = stack[--top];
    stack[top++] = x;
    return false;
  }
};

// Containment of a length-3 pattern in the virtual word w[0..p-1], last.
// Reversal and complement reduce all six patterns to the two scanners:
//   231 = 132 reversed, 312 = 132 complemented, 213 = 132 reversed and
//   complemented; complement only flips comparisons.
template <class T>
bool virtual_contains3(int code3, const T* w, int p, T last) {
  switch (code3) {
    case 0: {  // 123
      Scanner123<false> s;
      for (int i = 0; i < p; ++i)
        if (s.feed(w[i])) return true;
      return s.feed(last);
    }
    case 5: {  // 321
      Scanner123<true> s;
      for (int i = 0; i < p; ++i)
        if (s.feed(w[i])) return true;
      return s.feed(last);
    }
    case 1: {  // 132: scan right to left
      Scanner132<false> s;
      if (s.feed(last)) return true;
      for (int i = p - 1; i >= 0; --i)
        if (s.feed(w[i])) return true;
      return false;
    }
    case 4: {  // 312: right to left, flipped
      Scanner132<true> s;
      if (s.feed(last)) return true;
      for (int i = p - 1; i >= 0; --i)
        if (s.feed(w[i])) return true;
      return false;
    }
    case 3: {  // 231: left to right (reverse of 132's scan)
      Scanner132<false> s;
      for (int i = 0; i < p; ++i)
        if (s.feed(w[i])) return true;
      return s.feed(last);
    }
    case 2: {  // 213: left to right, flipped
      Scanner132<true> s;
      for (int i = 0; i < p; ++i)
        if (s.feed(w[i])) return true;
      return s.feed(last);
    }
    default:
      return false;
  }
}

// Backtracking occurrence search. Slot j of the pattern is assigned a
// word position right of slot j-1; a candidate value must sit strictly
// between the already-matched values that the pattern orders around slot
// j. pin_last forces the final slot onto the final word position.
template <class T>
bool generic_search(const T* w, int n, const std::uint8_t* pat, int m, bool pin_last) {
  if (m > n) return false;
  long long val[kMaxLength];
  int search_from[kMaxLength + 1];
  int slot = 0;
  search_from[0] = 0;
  while (true) {
    // Window for slot `slot` given slots 0..slot-1.
    long long lo = LLONG_MIN, hi = LLONG_MAX;
    for (int t = 0; t < slot; ++t) {
      if (pat[t] < pat[slot]) {
        if (val[t] > lo) lo = val[t];
      } else if (val[t] < hi) {
        hi = val[t];
      }
    }
    int pos = search_from[slot];
    const bool last = slot == m - 1;
    const int limit = last && pin_last ? n : n - (m - 1 - slot);
    if (last && pin_last && pos < n - 1) pos = n - 1;
    bool advanced = false;
    for (; pos < limit; ++pos) {
      const long long x = w[pos];
      if (x <= lo || x >= hi) continue;
      if (last) return true;
      val[slot] = x;
      search_from[slot] = pos + 1;  // resume point on backtrack
      search_from[slot + 1] = pos + 1;
      ++slot;
      advanced = true;
      break;
    }
    if (advanced) continue;
    if (slot == 0) return false;
    --slot;
  }
}

// Pruning primitive for the avoider DFS: does an occurrence of sigma end
// at `next`? Assumes the prefix itself avoids sigma.
template <class T>
bool extension_hit(const T* prefix, int p, T next, const Pattern& sigma) {
  const int m = sigma.length();
  if (p + 1 < m) return false;
  if (sigma.code3() >= 0) return virtual_contains3(sigma.code3(), prefix, p, next);
  if (m == 1) return true;
  if (m == 2) {
    const bool ascending = sigma.word().apply(1) == 1;
    for (int i = 0; i < p; ++i) {
      if (ascending ? prefix[i] < next : prefix[i] > next) return true;
    }
    return false;
  }
  long long buf[kMaxLength * 2 + 2];
  for (int i = 0; i < p; ++i) buf[i] = prefix[i];
  buf[p] = next;
  std::uint8_t pat[kMaxLength] = {};
  for (int i = 0; i < m; ++i) pat[i] = static_cast<std::uint8_t>(sigma.word().apply(i + 1));
  return generic_search(buf, p + 1, pat, m, /*pin_last=*/true);
}

// Full containment over a raw word of distinct values.
template <class T>
bool contains_word(const T* w, int len, const Pattern& sigma) {
  const int m = sigma.length();
  if (m > len) return false;
  if (sigma.code3() >= 0) return virtual_contains3(sigma.code3(), w, len - 1, w[len - 1]);
  if (m == 1) return true;
  if (m == 2) {
    const bool ascending = sigma.word().apply(1) == 1;
    long long best = w[0];
    for (int i = 1; i < len; ++i) {
      const long long x = w[i];
      if (ascending ? best < x : best > x) return true;
      if (ascending ? x < best : x > best) best = x;
    }
    return false;
  }
  long long buf[kMaxLength * 2 + 2];
  for (int i = 0; i < len; ++i) buf[i] = w[i];
  std::uint8_t pat[kMaxLength] = {};
  for (int i = 0; i < m; ++i) pat[i] = static_cast<std::uint8_t>(sigma.word().apply(i + 1));
  return generic_search(buf, len, pat, m, /*pin_last=*/false);
}

}  // namespace detail

}  // namespace thetalab
