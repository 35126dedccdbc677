#pragma once
// One-line permutations over {1..n}, standard cycle form, and the
// fundamental bijection theta (erase the parentheses of the standard
// cycle form; invert by cutting before each left-to-right maximum).
//
// Values are 1-based and words are capped at kMaxLength so a Permutation
// is a fixed-size value type: the orbit census applies theta tens of
// millions of times and must not allocate.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thetalab {

inline constexpr int kMaxLength = 16;

class Permutation {
public:
  Permutation() = default;  // the empty permutation

  // Validates that `values` is a rearrangement of {1,...,n}; throws
  // std::invalid_argument naming the offending value otherwise.
  static Permutation from_values(std::span<const int> values);
  static Permutation from_values(std::initializer_list<int> values);
  static Permutation identity(int n);

  // No validation; `word` must already be a permutation of {1..n}.
  static Permutation unchecked(const std::uint8_t* word, int n);

  int size() const { return n_; }
  bool empty() const { return n_ == 0; }

  // pi(i) for 1 <= i <= size().
  int apply(int i) const { return word_[i - 1]; }

  std::span<const std::uint8_t> word() const {
    return {word_.data(), static_cast<std::size_t>(n_)};
  }
  const std::uint8_t* data() const { return word_.data(); }

  // Unused tail slots are kept zeroed, so member-wise equality is exact.
  friend bool operator==(const Permutation&, const Permutation&) = default;

private:
  std::array<std::uint8_t, kMaxLength> word_{};  // word_[i] = pi(i+1)
  std::uint8_t n_ = 0;
};

// Disjoint cycles, each written with its largest element first, ordered
// by increasing maxima. Concatenating the cycles is theta of the owner.
struct StandardCycleForm {
  std::vector<std::vector<int>> cycles;
  int n = 0;
};

StandardCycleForm standard_cycle_form(const Permutation& pi);

Permutation theta(const Permutation& pi);
Permutation theta_inverse(const Permutation& pi);
Permutation theta_power(const Permutation& pi, long long k);

Permutation direct_sum(const Permutation& a, const Permutation& b);

// Maximal decomposition into irreducible summands; empty for the empty
// permutation. Folding the result back with direct_sum restores pi.
std::vector<Permutation> decompose_irreducible(const Permutation& pi);
bool is_irreducible(const Permutation& pi);

enum class Symmetry { complement, reverse, reverse_complement };
Permutation apply_symmetry(const Permutation& pi, Symmetry s);

bool is_cyclic(const Permutation& pi);

// True iff every cycle is a fixed point or a 2-cycle (i+1, i); such
// permutations are exactly the ones with theta(pi) == pi.
bool is_theta_fixed_shape(const Permutation& pi);

std::uint64_t factorial(int n);  // n <= 20

// Lexicographic rank over S_n and its inverse (Lehmer code).
std::uint64_t rank(const Permutation& pi);
Permutation unrank(int n, std::uint64_t r);  // throws std::out_of_range

// Least k >= 1 with theta^k(pi) == pi. Return to the start is guaranteed;
// the cap only guards against implementation bugs and throws if hit.
inline constexpr std::uint64_t kDefaultOrbitStepCap = 10'000'000;
std::uint64_t orbit_length(const Permutation& pi,
                           std::uint64_t step_cap = kDefaultOrbitStepCap);

struct OrbitRecord {
  std::uint64_t length = 0;
  Permutation representative;
};
OrbitRecord orbit_record(const Permutation& pi,
                         std::uint64_t step_cap = kDefaultOrbitStepCap);

// Text formats shared by the CLI and fixtures: a compact digit string for
// n <= 9 ("41253"), comma-separated values otherwise ("10,3,1,2,...").
Permutation parse_permutation(std::string_view text);
std::string to_string(const Permutation& pi);
std::string to_string(const StandardCycleForm& cf);  // "(3)(5,2,1,4)(8)(9,7)"

// Allocation-free kernels for the enumeration sweeps. Buffers hold n
// bytes; src and dst must not alias.
namespace kernel {
void theta_into(const std::uint8_t* src, std::uint8_t* dst, int n);
void theta_inverse_into(const std::uint8_t* src, std::uint8_t* dst, int n);
std::uint64_t rank_word(const std::uint8_t* word, int n);
void unrank_into(std::uint64_t r, int n, std::uint8_t* out);
}  // namespace kernel

}  // namespace thetalab
