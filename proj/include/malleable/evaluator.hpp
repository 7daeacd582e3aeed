#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "malleable/code.hpp"
#include "malleable/edit_metrics.hpp"
#include "malleable/prob_core.hpp"
#include "malleable/scalar.hpp"

namespace malleable {

struct Halfwidths {
  double K = 0, L = 0, M = 0, delta = 0;
};

/// (K, L, M, Delta) per source letter. Exact runs carry rationals whenever
/// the source is rational; sampled runs carry the seed and 95% half-widths.
struct RateMalleabilityTriple {
  Scalar K{0}, L{0}, M{0}, delta{0};
  bool exact = true;
  std::optional<std::uint64_t> seed;
  std::optional<Halfwidths> halfwidths;
  std::string rng;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kExactPairCap = 100000000;

/// Expectations over every pair of blocks with positive mass. The Y code
/// is handed the co-located X block as context when it is conditional.
/// Delta = max(Delta_X, Delta_Y) from decoding each stored word.
RateMalleabilityTriple evaluate_exact(const JointSource& src, const PalimpsestCode& code_x,
                                      const PalimpsestCode& code_y, const EditMetric& metric,
                                      std::uint64_t pair_cap = kExactPairCap);

/// Seeded Monte Carlo estimate (mt19937_64).
RateMalleabilityTriple evaluate_mc(const JointSource& src, const PalimpsestCode& code_x,
                                   const PalimpsestCode& code_y, const EditMetric& metric, std::uint64_t samples,
                                   std::uint64_t seed);

/// (1/n) Pr[X^n != Y^n] = (1 - (sum_x p(x,x))^n) / n.
Scalar malleability_lower_bound(const JointSource& src, std::size_t block_n);

/// Pr[X^n != Y^n] for the memoryless extension.
Scalar mismatch_probability(const JointSource& src, std::size_t block_n);

/// (1/n) sum over x, y in `blocks` of p^n(x,y) d(f(x), f(y)): malleability
/// seen by a code that only represents `blocks`.
Scalar restricted_malleability(const JointSource& src, const PalimpsestCode& code, const EditMetric& metric,
                               const std::vector<std::size_t>& blocks);

nlohmann::ordered_json to_json(const RateMalleabilityTriple& t);

}  // namespace malleable
