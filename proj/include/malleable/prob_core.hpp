#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "malleable/scalar.hpp"

namespace malleable {

/// Float-mode tolerance for "sums to one" and "equal marginals".
inline constexpr double kFloatTolerance = 1e-12;

/// A probability vector over the source alphabet W.
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(std::vector<Scalar> probs);

  static Distribution uniform(std::size_t size);
  static Distribution from_doubles(const std::vector<double>& probs);

  std::size_t size() const { return probs_.size(); }
  const Scalar& operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<Scalar>& probs() const { return probs_; }
  std::vector<double> as_doubles() const;
  bool exact() const;

  friend bool operator==(const Distribution& a, const Distribution& b);

 private:
  std::vector<Scalar> probs_;
};

/// Finite joint distribution p(x,y) over W x W plus the storage alphabet size |V|.
class JointSource {
 public:
  JointSource(std::vector<std::string> alphabet, std::vector<std::vector<Scalar>> joint,
              int storage_alphabet_size);

  std::size_t size() const { return alphabet_.size(); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const Scalar& operator()(std::size_t x, std::size_t y) const { return joint_[x * size() + y]; }
  int storage_alphabet_size() const { return storage_size_; }
  bool exact() const { return exact_; }

  /// Same joint, different storage alphabet.
  JointSource with_storage_alphabet(int storage_alphabet_size) const;

  /// Independent pair with the given marginals.
  static JointSource independent(const Distribution& px, const Distribution& py,
                                 std::vector<std::string> alphabet, int storage_alphabet_size);

  /// Joint p(x) p(y|x) from a row-stochastic channel matrix indexed [x][y].
  static JointSource from_channel(const Distribution& px,
                                  const std::vector<std::vector<Scalar>>& channel,
                                  std::vector<std::string> alphabet, int storage_alphabet_size);

 private:
  std::vector<std::string> alphabet_;
  std::vector<Scalar> joint_;
  int storage_size_;
  bool exact_;
};

/// Marginals (p_X, p_Y).
std::pair<Distribution, Distribution> marginals(const JointSource& src);

/// Pr[X != Y] for a single letter.
Scalar mismatch_probability(const JointSource& src);

double entropy(const Distribution& d, int base);
double joint_entropy(const JointSource& src, int base);

/// H(Y|X) = H(X,Y) - H(X).
double conditional_entropy(const JointSource& src, int base);

/// D(p||q). Returns nullopt when p is not absolutely continuous with
/// respect to q (the divergence is infinite).
std::optional<double> relative_entropy(const Distribution& p, const Distribution& q, int base);

/// Normalizer mu(t) = sum p^{1-t} q^t of the geometric mixture.
double tilt_normalizer(const Distribution& p, const Distribution& q, double t);

/// Geometric mixture p^{1-t} q^t / mu(t). Exact copies at t = 0 and t = 1.
Distribution tilted_distribution(const Distribution& p, const Distribution& q, double t);

/// The t at which the two rate losses balance:
/// D(q||p) / (D(q||p) + D(p||q)). Throws InputError when p == q.
double balanced_t(const Distribution& p, const Distribution& q);

/// R(p,q) with 1/R = 1/D(p||q) + 1/D(q||p). Throws InputError when p == q.
double harmonic_rate_loss(const Distribution& p, const Distribution& q, int base);

struct RateLossPoint {
  double t = 0.0;
  double k_loss = 0.0;  // D(p_X || Z_t)
  double l_loss = 0.0;  // D(p_Y || Z_t)
};

/// Rate-loss curve along the geometric path from p_X (t=0) to p_Y (t=1),
/// in base-|V| units. A stationary source yields a single zero-loss point.
std::vector<RateLossPoint> rate_frontier(const JointSource& src, int grid);

/// True iff p_X == p_Y (exactly for rationals, within kFloatTolerance otherwise).
bool stationary(const JointSource& src);

/// n-fold product distribution over W^n, blocks indexed big-endian.
Distribution block_distribution(const Distribution& d, std::size_t n);

}  // namespace malleable
