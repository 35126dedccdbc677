#include "thetalab/patterns.hpp"

#include <array>
#include <stdexcept>

namespace thetalab {

namespace {

int classify3(const Permutation& w) {
  const int code = w.apply(1) * 100 + w.apply(2) * 10 + w.apply(3);
  switch (code) {
    case 123: return 0;
    case 132: return 1;
    case 213: return 2;
    case 231: return 3;
    case 312: return 4;
    case 321: return 5;
    default: return -1;  // unreachable for a valid length-3 word
  }
}

}  // namespace

Pattern::Pattern(Permutation word) : word_(word) {
  if (word_.empty()) throw std::invalid_argument("a pattern must have length at least 1");
  if (word_.size() == 3) code3_ = classify3(word_);
}

Pattern Pattern::parse(std::string_view text) { return Pattern(parse_permutation(text)); }

bool contains(const Permutation& pi, const Pattern& sigma) {
  return detail::contains_word(pi.data(), pi.size(), sigma);
}

bool avoids(const Permutation& pi, const Pattern& sigma) { return !contains(pi, sigma); }

bool contains_on_extension(std::span<const int> prefix, int next, const Pattern& sigma) {
  const int p = static_cast<int>(prefix.size());
  if (p + 1 > kMaxLength * 2 + 2) {
    throw std::invalid_argument("extension check supports sequences up to length " +
                                std::to_string(kMaxLength * 2 + 2));
  }
  std::array<int, kMaxLength * 2 + 2> buf;
  for (int i = 0; i < p; ++i) buf[i] = prefix[i];
  buf[p] = next;
  return detail::contains_word(buf.data(), p + 1, sigma);
}

bool contains_on_extension(std::span<const std::uint8_t> prefix, std::uint8_t next,
                           const Pattern& sigma) {
  const int p = static_cast<int>(prefix.size());
  if (p + 1 > kMaxLength + 1) {
    throw std::invalid_argument("extension check supports prefixes up to length " +
                                std::to_string(kMaxLength));
  }
  std::array<std::uint8_t, kMaxLength + 1> buf;
  for (int i = 0; i < p; ++i) buf[i] = prefix[i];
  buf[p] = next;
  return detail::contains_word(buf.data(), p + 1, sigma);
}

}  // namespace thetalab
