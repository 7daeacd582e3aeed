#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "malleable/graph_core.hpp"
#include "malleable/prob_core.hpp"
#include "malleable/scalar.hpp"

namespace malleable {

/// Symmetric matrix of combined pair masses m(u,v) = p(u,v) + p(v,u) over
/// guest vertices; the diagonal is zero (self-pairs cost nothing).
class PairMass {
 public:
  PairMass() = default;
  explicit PairMass(std::size_t n) : n_(n), mass_(n * n, Scalar(0)) {}

  /// Masses of the n-block memoryless extension of `src`.
  static PairMass from_source(const JointSource& src, std::size_t block_n,
                              std::size_t cap = kGraphVertexCap);
  /// Uses each guest edge weight as the mass of its endpoint pair.
  static PairMass from_edge_weights(const LabeledGraph& guest);

  std::size_t size() const { return n_; }
  const Scalar& operator()(Vertex u, Vertex v) const { return mass_[std::size_t{u} * n_ + v]; }
  void set(Vertex u, Vertex v, Scalar m);
  /// Sum over unordered pairs, i.e. Pr[X != Y] for a source-derived matrix.
  Scalar total() const;
  bool exact() const;

 private:
  std::size_t n_ = 0;
  std::vector<Scalar> mass_;
};

struct SearchOptions {
  std::uint64_t node_budget = 0;  // 0 = unlimited
  unsigned threads = 1;
};

struct EmbeddingResult {
  std::vector<Vertex> vertex_map;                      // guest vertex -> host vertex
  std::vector<std::pair<Vertex, Vertex>> deleted_edges;  // guest edges (u < v), sorted
  Scalar cost{0};
  bool proven_optimal = true;
  std::uint64_t nodes = 0;
};

/// Deterministic guest vertex order used by both searches: repeatedly take
/// the vertex with most already-ordered neighbours, then highest degree,
/// then lowest index. "Lexicographically least map" is read in this order.
std::vector<Vertex> canonical_order(const LabeledGraph& guest);

/// Exact (attributed) subgraph embedding. Returns the lexicographically
/// least injective map under canonical_order, or nullopt when the guest does
/// not embed. Throws ResourceError if the node budget runs out first.
std::optional<EmbeddingResult> exact_embed(const LabeledGraph& guest, const LabeledGraph& host,
                                           bool respect_attributes, const SearchOptions& options = {});

/// Error-tolerant embedding by edge deletion.
///
/// Minimizes the malleability penalty
///     cost(phi) = sum_{u<v} m(u,v) * (d_host(phi(u), phi(v)) - 1)
/// over injective (attribute-respecting) maps. Guest edges whose images are
/// not host edges form the deleted set. Ties go to the lexicographically
/// least (deleted set, vertex map). Exhaustive branch and bound; when the
/// node budget is hit the best map found so far is returned with
/// proven_optimal = false. Returns nullopt when no map has finite cost.
std::optional<EmbeddingResult> tolerant_embed(const LabeledGraph& guest, const LabeledGraph& host,
                                              const PairMass& mass, bool respect_attributes = false,
                                              const SearchOptions& options = {});

/// The cost of tolerant_embed; throws InfeasibleError when there is none.
Scalar subgraph_distance(const LabeledGraph& guest, const LabeledGraph& host, const PairMass& mass,
                         bool respect_attributes = false, const SearchOptions& options = {});

/// Guest edges whose images under `map` are not host edges.
std::vector<std::pair<Vertex, Vertex>> broken_edges(const LabeledGraph& guest, const LabeledGraph& host,
                                                     const std::vector<Vertex>& map);

/// sum_{u<v} m(u,v) * (d_host(map u, map v) - 1); nullopt if a massive pair
/// lands in different host components.
std::optional<Scalar> realized_cost(const PathMetric& host_metric, const PairMass& mass,
                                    const std::vector<Vertex>& map);

/// Expected closeness-vitality cost of deleting `deleted` from the guest:
/// sum_{u<v} m(u,v) * (d_{A-E}(u,v) - d_A(u,v)). nullopt (+infinity) when a
/// pair with positive mass is disconnected by the deletion.
std::optional<Scalar> deletion_cost(const LabeledGraph& guest,
                                    const std::vector<std::pair<Vertex, Vertex>>& deleted,
                                    const PairMass& mass);

/// Independent witness check: injective, attributes match (if requested),
/// deleted edges are guest edges, and every surviving guest edge maps to a
/// host edge.
bool verify_embedding(const LabeledGraph& guest, const LabeledGraph& host, const EmbeddingResult& result,
                      bool respect_attributes);

}  // namespace malleable
