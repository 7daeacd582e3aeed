#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "malleable/errors.hpp"
#include "malleable/prob_core.hpp"

namespace malleable {

// Blocks of W^n are indexed big-endian: the first letter is the most
// significant digit in base |W|.

/// |W|^n, or ResourceError when it exceeds `cap`.
inline std::size_t block_count(std::size_t alphabet, std::size_t n, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / alphabet) throw ResourceError("|W|^n exceeds cap of " + std::to_string(cap));
    total *= alphabet;
  }
  return total;
}

inline std::vector<std::size_t> block_letters(std::size_t block, std::size_t alphabet, std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = n; i-- > 0;) {
    out[i] = block % alphabet;
    block /= alphabet;
  }
  return out;
}

/// Symbol names joined directly when all are one character, else with ','.
inline std::string block_name(const std::vector<std::string>& alphabet, std::size_t block, std::size_t n) {
  bool single = true;
  for (const auto& s : alphabet) single = single && s.size() == 1;
  std::string out;
  auto letters = block_letters(block, alphabet.size(), n);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i > 0 && !single) out += ',';
    out += alphabet[letters[i]];
  }
  return out;
}

/// p^n(x_1^n, y_1^n) for the memoryless extension.
inline Scalar block_joint(const JointSource& src, std::size_t x, std::size_t y, std::size_t n) {
  Scalar p(1);
  const std::size_t q = src.size();
  for (std::size_t i = 0; i < n; ++i) {
    p *= src(x % q, y % q);
    if (p.is_zero()) return p;
    x /= q;
    y /= q;
  }
  return p;
}

}  // namespace malleable
