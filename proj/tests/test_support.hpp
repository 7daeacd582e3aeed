#pragma once

#include <random>
#include <string>
#include <vector>

#include "malleable/prob_core.hpp"
#include "malleable/source_io.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(MALLEABLE_DATA_DIR) + "/" + name; }

inline malleable::JointSource load(const std::string& name) { return malleable::load_source(data_path(name)); }

// Random rational joint over q symbols; about a quarter of the cells are zero.
inline malleable::JointSource random_rational_source(std::mt19937_64& rng, std::size_t q, int storage) {
  std::vector<long long> w(q * q);
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<long long> pick(1, 9);
  long long total = 0;
  for (auto& v : w) {
    v = coin(rng) == 0 ? 0 : pick(rng);
    total += v;
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  std::vector<std::vector<malleable::Scalar>> joint(q);
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y) joint[x].emplace_back(w[x * q + y], total);
  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < q; ++i) alphabet.push_back(std::string(1, static_cast<char>('a' + i)));
  return malleable::JointSource(alphabet, joint, storage);
}

}  // namespace testing_support
