#include "malleable/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "malleable/blocks.hpp"
#include "malleable/errors.hpp"

namespace malleable {

namespace {

void check_codes(const JointSource& src, const PalimpsestCode& cx, const PalimpsestCode& cy) {
  if (cx.source_size() != src.size() || cy.source_size() != src.size())
    throw InputError("evaluator: code alphabet does not match the source");
  if (cx.block_n() != cy.block_n()) throw InputError("evaluator: codes use different block lengths");
  if (cx.conditional()) throw InputError("evaluator: the X code cannot be conditional");
}

}  // namespace

RateMalleabilityTriple evaluate_exact(const JointSource& src, const PalimpsestCode& code_x,
                                      const PalimpsestCode& code_y, const EditMetric& metric,
                                      std::uint64_t pair_cap) {
  check_codes(src, code_x, code_y);
  const std::size_t n = code_x.block_n();
  const std::size_t blocks = code_x.block_count();
  if (blocks > 0 && static_cast<double>(blocks) * static_cast<double>(blocks) > static_cast<double>(pair_cap))
    throw ResourceError("evaluate_exact: " + std::to_string(blocks) + "^2 block pairs exceed the cap; use sampling");

  Scalar len_a(0), len_b(0), dist(0), err_x(0), err_y(0);
  for (std::size_t x = 0; x < blocks; ++x) {
    const StorageString& a = code_x.encode(x);
    const bool bad_x = code_x.decode(a) != x;
    for (std::size_t y = 0; y < blocks; ++y) {
      const Scalar p = block_joint(src, x, y, n);
      if (!p.is_positive()) continue;
      const StorageString& b = code_y.encode(y, x);
      len_a += p * Scalar(static_cast<long long>(a.size()));
      len_b += p * Scalar(static_cast<long long>(b.size()));
      dist += p * Scalar(static_cast<long long>(distance(metric, a, b)));
      if (bad_x) err_x += p;
      if (code_y.decode(b) != y) err_y += p;
    }
  }
  const Scalar per(1, static_cast<long long>(n));
  RateMalleabilityTriple t;
  t.K = len_a * per;
  t.L = len_b * per;
  t.M = dist * per;
  t.delta = err_y > err_x ? err_y : err_x;
  t.exact = t.K.exact() && t.L.exact() && t.M.exact() && t.delta.exact();
  return t;
}

RateMalleabilityTriple evaluate_mc(const JointSource& src, const PalimpsestCode& code_x,
                                   const PalimpsestCode& code_y, const EditMetric& metric, std::uint64_t samples,
                                   std::uint64_t seed) {
  check_codes(src, code_x, code_y);
  if (samples == 0) throw InputError("evaluate_mc: need at least one sample");
  const std::size_t q = src.size();
  const std::size_t n = code_x.block_n();

  // Inverse-CDF table over single-letter pairs.
  std::vector<double> cdf;
  double acc = 0.0;
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y) {
      acc += src(x, y).to_double();
      cdf.push_back(acc);
    }

  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  double s[4] = {0, 0, 0, 0}, ss[4] = {0, 0, 0, 0};
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::size_t x = 0, y = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double u = uniform() * acc;
      std::size_t cell = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (cell >= cdf.size()) {
        cell = cdf.size() - 1;
        while (cell > 0 && src(cell / q, cell % q).is_zero()) --cell;
      }
      x = x * q + cell / q;
      y = y * q + cell % q;
    }
    const StorageString& a = code_x.encode(x);
    const StorageString& b = code_y.encode(y, x);
    const double v[4] = {static_cast<double>(a.size()), static_cast<double>(b.size()),
                         static_cast<double>(distance(metric, a, b)),
                         (code_x.decode(a) != x || code_y.decode(b) != y) ? 1.0 : 0.0};
    for (int j = 0; j < 4; ++j) {
      s[j] += v[j];
      ss[j] += v[j] * v[j];
    }
  }
  const double N = static_cast<double>(samples);
  const double nn = static_cast<double>(n);
  double mean[4], hw[4];
  for (int j = 0; j < 4; ++j) {
    mean[j] = s[j] / N;
    const double var = samples > 1 ? std::max(0.0, (ss[j] - N * mean[j] * mean[j]) / (N - 1)) : 0.0;
    hw[j] = 1.96 * std::sqrt(var / N);
  }
  RateMalleabilityTriple t;
  t.K = Scalar::from_double(mean[0] / nn);
  t.L = Scalar::from_double(mean[1] / nn);
  t.M = Scalar::from_double(mean[2] / nn);
  t.delta = Scalar::from_double(mean[3]);
  t.exact = false;
  t.seed = seed;
  t.halfwidths = Halfwidths{hw[0] / nn, hw[1] / nn, hw[2] / nn, hw[3]};
  t.rng = "mt19937_64";
  t.samples = samples;
  return t;
}

Scalar mismatch_probability(const JointSource& src, std::size_t block_n) {
  Scalar diag(0);
  for (std::size_t x = 0; x < src.size(); ++x) diag += src(x, x);
  return Scalar(1) - pow(diag, static_cast<unsigned>(block_n));
}

Scalar malleability_lower_bound(const JointSource& src, std::size_t block_n) {
  if (block_n == 0) throw InputError("bound: block length must be at least 1");
  return mismatch_probability(src, block_n) * Scalar(1, static_cast<long long>(block_n));
}

Scalar restricted_malleability(const JointSource& src, const PalimpsestCode& code, const EditMetric& metric,
                               const std::vector<std::size_t>& blocks) {
  const std::size_t n = code.block_n();
  Scalar total(0);
  for (std::size_t x : blocks)
    for (std::size_t y : blocks) {
      const Scalar p = block_joint(src, x, y, n);
      if (!p.is_positive()) continue;
      total += p * Scalar(static_cast<long long>(distance(metric, code.encode(x), code.encode(y))));
    }
  return total * Scalar(1, static_cast<long long>(n));
}

nlohmann::ordered_json to_json(const RateMalleabilityTriple& t) {
  nlohmann::ordered_json j;
  auto put = [&](const char* key, const Scalar& v) {
    if (v.exact()) j[key] = v.str();
    else j[key] = round12(v.to_double());
  };
  put("K", t.K);
  put("L", t.L);
  put("M", t.M);
  put("delta", t.delta);
  j["exact"] = t.exact;
  if (t.seed) {
    j["seed"] = *t.seed;
    j["rng"] = t.rng;
    j["samples"] = t.samples;
  }
  if (t.halfwidths)
    j["halfwidth"] = {{"K", round12(t.halfwidths->K)},
                      {"L", round12(t.halfwidths->L)},
                      {"M", round12(t.halfwidths->M)},
                      {"delta", round12(t.halfwidths->delta)}};
  return j;
}

}  // namespace malleable
