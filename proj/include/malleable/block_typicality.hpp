#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "malleable/code.hpp"
#include "malleable/edit_metrics.hpp"
#include "malleable/graph_core.hpp"
#include "malleable/prob_core.hpp"
#include "malleable/scalar.hpp"

namespace malleable {

struct TypicalityConfig {
  std::size_t block_n = 1;
  std::optional<double> delta;  // nullopt: c * n^(-1/2 + omega)
  double omega = 0.1;
  double c = 1.0;
  std::size_t cap = std::size_t{1} << 20;  // on |W|^n
  unsigned threads = 1;
};

double resolve_delta(const TypicalityConfig& cfg);

/// N(a; block) for each letter a.
std::vector<std::size_t> letter_counts(std::size_t block, std::size_t alphabet, std::size_t n);

/// sum_a |N(a)/n - p(a)| <= delta, and N(a) = 0 wherever p(a) = 0.
bool strongly_typical(const std::vector<std::size_t>& counts, const Distribution& d, std::size_t n, double delta);

/// T^n_[d]delta as sorted block indices.
std::vector<std::size_t> typical_set(const Distribution& d, const TypicalityConfig& cfg);

bool jointly_typical(const JointSource& src, std::size_t x, std::size_t y, std::size_t n, double delta);

/// T^n_[Y|X]delta(x): the y blocks jointly typical with x.
std::vector<std::size_t> conditional_typical_set(const JointSource& src, std::size_t x, const TypicalityConfig& cfg);

/// S^n_[X]delta: typical x whose conditional set is nonempty. With `y_side`,
/// the mirror set of typical y with some jointly typical x.
std::vector<std::size_t> connected_typical_set(const JointSource& src, const TypicalityConfig& cfg,
                                               bool y_side = false);

/// Size and probability of a typical set, summed over types.
struct TypeSummary {
  BigInt count = 0;
  Scalar mass{0};
  std::size_t types = 0;
};
TypeSummary typical_mass(const Distribution& d, const TypicalityConfig& cfg);
TypeSummary joint_typical_mass(const JointSource& src, const TypicalityConfig& cfg);

struct DegreeStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

/// Counts and realized slack exponents (bits) for one (source, n, delta).
struct TypicalityReport {
  std::size_t block_n = 0;
  double delta = 0.0;
  std::size_t sequences = 0;  // |W|^n
  std::size_t t_x = 0, t_y = 0, t_xy = 0, s_x = 0, s_y = 0;
  Scalar t_x_mass{0}, t_y_mass{0}, t_xy_mass{0};
  bool consistent = true;  // every jointly typical pair is marginally typical
  bool same_vertex_sets = false;
  std::size_t vertices = 0, edges = 0, self_loops = 0;
  DegreeStats degree;  // |T_[Y|X](v)| over v in S_X, v itself included
  std::size_t max_simple_degree = 0;
  std::size_t components = 0, largest_component = 0;
  std::uint32_t diameter = 0;  // of the largest component
  double h_x = 0, h_y = 0, h_xy = 0, h_y_given_x = 0;
  double eta_x = 0, eta_y = 0, lambda = 0, nu = 0, psi = 0;
};

/// Joint typicality graph on S_X u S_Y. Vertex i stands for blocks[i];
/// {u, v} is an edge when (u,v) or (v,u) is jointly typical, weighted by
/// p^n(u,v) + p^n(v,u). Jointly typical self-pairs are flagged separately.
struct TypicalityGraph {
  LabeledGraph graph;
  std::vector<std::size_t> blocks;
  std::vector<bool> self_loop;
  TypicalityReport report;
};

TypicalityGraph typicality_graph(const JointSource& src, const TypicalityConfig& cfg);

nlohmann::ordered_json to_json(const TypicalityReport& report);

/// Smallest slack s >= 0 with (1-delta) 2^{n(h-s)} <= size <= 2^{n(h+s)};
/// the lower side is dropped when `lower_scale` is 0.
double realized_slack(double size, double h_bits, std::size_t n, double lower_scale);

/// Necessary conditions for a code of nK storage symbols per block whose
/// image graph is a Hamming graph over V: enough vertices for the typical
/// sequences and enough degree for the typical neighbourhoods.
struct CostCheck {
  std::size_t nK = 0;
  double required = 0.0;  // max(n H_V(X), 2^{n H(Y|X)} / (|V|-1))
  bool analytic_ok = false;
  std::optional<bool> vertex_ok;
  std::optional<bool> degree_ok;
  bool verdict = false;
};

CostCheck exponential_cost_check(const JointSource& src, const TypicalityConfig& cfg, std::size_t nK,
                                 const TypicalityReport* materialized = nullptr);

struct EmbeddingDiagnostics {
  double dilation = 1.0;
  double contraction = 1.0;
  double distortion = 1.0;
  double expansion = 1.0;
};

/// Lipschitz constants of the code restricted to `blocks`, where vertex i of
/// `guest_metric` is blocks[i]. Pairs the guest metric cannot connect are skipped.
EmbeddingDiagnostics embedding_diagnostics(const PalimpsestCode& code, const std::vector<std::size_t>& blocks,
                                           const PathMetric& guest_metric, const EditMetric& host);

/// Least k with (host_max_deg - 1)^k >= guest_max_deg - 1; 1 when degenerate.
unsigned dilation_lower_bound(std::size_t guest_max_deg, std::size_t host_max_deg);

/// (lip / n) (1 + delta * diameter).
double lipschitz_malleability_bound(double lip, std::size_t n, double delta, double diameter);

/// lip / n + K lip contraction / n^{1/2 - omega}.
double lipschitz_asymptotic_bound(double lip, double contraction, double K, std::size_t n, double omega);

}  // namespace malleable
