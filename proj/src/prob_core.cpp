#include "malleable/prob_core.hpp"

#include <cmath>
#include <limits>

#include "malleable/errors.hpp"

namespace malleable {

namespace {

void check_sums_to_one(const std::vector<Scalar>& v, const char* what) {
  Scalar total(0);
  for (const auto& p : v) {
    if (p < Scalar(0)) throw InputError(std::string(what) + ": negative probability " + p.str());
    total += p;
  }
  if (total.exact()) {
    if (total != Scalar(1)) throw InputError(std::string(what) + ": entries sum to " + total.str());
  } else if (std::abs(total.to_double() - 1.0) > kFloatTolerance) {
    throw InputError(std::string(what) + ": entries sum to " + total.str());
  }
}

double log_base(double v, int base) { return std::log(v) / std::log(static_cast<double>(base)); }

bool close(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return a == b;
  return std::abs(a.to_double() - b.to_double()) <= kFloatTolerance;
}

}  // namespace

Distribution::Distribution(std::vector<Scalar> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InputError("distribution: empty");
  check_sums_to_one(probs_, "distribution");
}

Distribution Distribution::uniform(std::size_t size) {
  std::vector<Scalar> p(size, Scalar(1, static_cast<long long>(size)));
  return Distribution(std::move(p));
}

Distribution Distribution::from_doubles(const std::vector<double>& probs) {
  std::vector<Scalar> p;
  p.reserve(probs.size());
  for (double v : probs) p.push_back(Scalar::from_double(v));
  return Distribution(std::move(p));
}

std::vector<double> Distribution::as_doubles() const {
  std::vector<double> out;
  out.reserve(probs_.size());
  for (const auto& p : probs_) out.push_back(p.to_double());
  return out;
}

bool Distribution::exact() const {
  for (const auto& p : probs_)
    if (!p.exact()) return false;
  return true;
}

bool operator==(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close(a[i], b[i])) return false;
  return true;
}

JointSource::JointSource(std::vector<std::string> alphabet, std::vector<std::vector<Scalar>> joint,
                         int storage_alphabet_size)
    : alphabet_(std::move(alphabet)), storage_size_(storage_alphabet_size), exact_(true) {
  if (alphabet_.empty()) throw InputError("source: alphabet must be nonempty");
  if (storage_size_ < 2) throw InputError("source: storage_alphabet_size must be >= 2");
  if (joint.size() != alphabet_.size())
    throw InputError("source: joint has " + std::to_string(joint.size()) + " rows, alphabet has " +
                     std::to_string(alphabet_.size()) + " symbols");
  for (std::size_t r = 0; r < joint.size(); ++r) {
    if (joint[r].size() != alphabet_.size())
      throw InputError("source: joint row " + std::to_string(r) + " has " +
                       std::to_string(joint[r].size()) + " entries");
    for (std::size_t c = 0; c < joint[r].size(); ++c) {
      auto& v = joint[r][c];
      if (v < Scalar(0))
        throw InputError("source: joint[" + std::to_string(r) + "][" + std::to_string(c) + "] is negative (" +
                         v.str() + ")");
      exact_ = exact_ && v.exact();
      joint_.push_back(std::move(v));
    }
  }
  check_sums_to_one(joint_, "source joint");
}

JointSource JointSource::with_storage_alphabet(int storage_alphabet_size) const {
  JointSource copy = *this;
  if (storage_alphabet_size < 2) throw InputError("source: storage_alphabet_size must be >= 2");
  copy.storage_size_ = storage_alphabet_size;
  return copy;
}

JointSource JointSource::independent(const Distribution& px, const Distribution& py,
                                     std::vector<std::string> alphabet, int storage_alphabet_size) {
  std::vector<std::vector<Scalar>> j(px.size(), std::vector<Scalar>(py.size()));
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t y = 0; y < py.size(); ++y) j[x][y] = px[x] * py[y];
  return JointSource(std::move(alphabet), std::move(j), storage_alphabet_size);
}

JointSource JointSource::from_channel(const Distribution& px,
                                      const std::vector<std::vector<Scalar>>& channel,
                                      std::vector<std::string> alphabet, int storage_alphabet_size) {
  if (channel.size() != px.size()) throw InputError("channel: row count mismatch");
  std::vector<std::vector<Scalar>> j(px.size());
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (channel[x].size() != px.size()) throw InputError("channel: row length mismatch");
    for (const auto& c : channel[x]) j[x].push_back(px[x] * c);
  }
  return JointSource(std::move(alphabet), std::move(j), storage_alphabet_size);
}

std::pair<Distribution, Distribution> marginals(const JointSource& src) {
  const std::size_t n = src.size();
  std::vector<Scalar> px(n, Scalar(0)), py(n, Scalar(0));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      px[x] += src(x, y);
      py[y] += src(x, y);
    }
  return {Distribution(std::move(px)), Distribution(std::move(py))};
}

Scalar mismatch_probability(const JointSource& src) {
  Scalar diag(0);
  for (std::size_t x = 0; x < src.size(); ++x) diag += src(x, x);
  return Scalar(1) - diag;
}

double entropy(const Distribution& d, int base) {
  double h = 0.0;
  for (const auto& p : d.probs()) {
    double v = p.to_double();
    if (v > 0.0) h -= v * log_base(v, base);
  }
  return h;
}

double joint_entropy(const JointSource& src, int base) {
  double h = 0.0;
  for (std::size_t x = 0; x < src.size(); ++x)
    for (std::size_t y = 0; y < src.size(); ++y) {
      double v = src(x, y).to_double();
      if (v > 0.0) h -= v * log_base(v, base);
    }
  return h;
}

double conditional_entropy(const JointSource& src, int base) {
  auto [px, py] = marginals(src);
  double h = joint_entropy(src, base) - entropy(px, base);
  return h < 0.0 ? 0.0 : h;
}

std::optional<double> relative_entropy(const Distribution& p, const Distribution& q, int base) {
  if (p.size() != q.size()) throw InputError("relative_entropy: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double a = p[i].to_double();
    double b = q[i].to_double();
    if (a == 0.0) continue;
    if (b == 0.0) return std::nullopt;
    d += a * log_base(a / b, base);
  }
  return d < 0.0 ? 0.0 : d;
}

double tilt_normalizer(const Distribution& p, const Distribution& q, double t) {
  double mu = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double a = p[i].to_double();
    double b = q[i].to_double();
    if (t == 0.0) {
      mu += a;
    } else if (t == 1.0) {
      mu += b;
    } else if (a > 0.0 && b > 0.0) {
      mu += std::pow(a, 1.0 - t) * std::pow(b, t);
    }
  }
  return mu;
}

Distribution tilted_distribution(const Distribution& p, const Distribution& q, double t) {
  if (p.size() != q.size()) throw InputError("tilted_distribution: size mismatch");
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("tilted_distribution: t outside [0,1]");
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  double mu = tilt_normalizer(p, q, t);
  if (mu <= 0.0) throw InputError("tilted_distribution: p and q have disjoint supports");
  std::vector<double> z(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    double a = p[i].to_double();
    double b = q[i].to_double();
    if (a > 0.0 && b > 0.0) z[i] = std::pow(a, 1.0 - t) * std::pow(b, t) / mu;
  }
  // Renormalize away the last ulp so the Distribution invariant holds.
  double total = 0.0;
  for (double v : z) total += v;
  for (double& v : z) v /= total;
  return Distribution::from_doubles(z);
}

double balanced_t(const Distribution& p, const Distribution& q) {
  if (p == q) throw InputError("balanced_t: p == q, t is undefined");
  auto dpq = relative_entropy(p, q, 2);
  auto dqp = relative_entropy(q, p, 2);
  if (!dpq || !dqp) throw InputError("balanced_t: infinite divergence between p and q");
  return *dqp / (*dqp + *dpq);
}

double harmonic_rate_loss(const Distribution& p, const Distribution& q, int base) {
  if (p == q) throw InputError("harmonic_rate_loss: p == q");
  auto dpq = relative_entropy(p, q, base);
  auto dqp = relative_entropy(q, p, base);
  if (!dpq || !dqp) throw InputError("harmonic_rate_loss: infinite divergence between p and q");
  return 1.0 / (1.0 / *dpq + 1.0 / *dqp);
}

std::vector<RateLossPoint> rate_frontier(const JointSource& src, int grid) {
  if (grid < 2) throw InputError("rate_frontier: grid must be >= 2");
  auto [px, py] = marginals(src);
  if (px == py) return {RateLossPoint{0.0, 0.0, 0.0}};
  const int base = src.storage_alphabet_size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<RateLossPoint> out;
  out.reserve(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    double t = static_cast<double>(i) / (grid - 1);
    RateLossPoint pt{t, inf, inf};
    try {
      Distribution z = tilted_distribution(px, py, t);
      pt.k_loss = relative_entropy(px, z, base).value_or(inf);
      pt.l_loss = relative_entropy(py, z, base).value_or(inf);
    } catch (const InputError&) {
      // disjoint supports: both losses stay infinite
    }
    out.push_back(pt);
  }
  return out;
}

bool stationary(const JointSource& src) {
  auto [px, py] = marginals(src);
  return px == py;
}

Distribution block_distribution(const Distribution& d, std::size_t n) {
  std::vector<Scalar> cur{Scalar(1)};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Scalar> next;
    next.reserve(cur.size() * d.size());
    for (const auto& c : cur)
      for (const auto& p : d.probs()) next.push_back(c * p);
    cur = std::move(next);
  }
  return Distribution(std::move(cur));
}

}  // namespace malleable
