#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "malleable/edit_metrics.hpp"
#include "malleable/prob_core.hpp"
#include "malleable/scalar.hpp"

namespace malleable {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;  // u < v
  Vertex v = 0;
  Scalar weight{1};
};

/// Undirected simple graph with optional storage-string attributes and
/// optional display names per vertex.
class LabeledGraph {
 public:
  LabeledGraph() = default;
  explicit LabeledGraph(std::size_t vertices);

  Vertex add_vertex(std::optional<StorageString> label = std::nullopt, std::string name = {});
  /// Throws InputError on self-loops, duplicates, out-of-range endpoints or negative weight.
  std::size_t add_edge(Vertex a, Vertex b, Scalar weight = Scalar(1));

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  std::size_t max_degree() const;

  bool has_edge(Vertex a, Vertex b) const;
  std::optional<std::size_t> edge_index(Vertex a, Vertex b) const;

  const std::optional<StorageString>& label(Vertex v) const { return labels_[v]; }
  void set_label(Vertex v, std::optional<StorageString> label);
  std::optional<Vertex> find_label(const StorageString& label) const;
  bool has_labels() const;

  const std::string& name(Vertex v) const { return names_[v]; }
  void set_name(Vertex v, std::string name) { names_[v] = std::move(name); }

  /// Copy with the given edges (by index) removed.
  LabeledGraph without_edges(std::span<const std::size_t> edge_indices) const;

 private:
  static std::uint64_t key(Vertex a, Vertex b);

  std::vector<std::vector<Vertex>> adjacency_;  // sorted
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_lookup_;
  std::vector<std::optional<StorageString>> labels_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Vertex> label_lookup_;
};

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Dense all-pairs hop-count matrix. Edge weights are masses, not lengths.
class PathMetric {
 public:
  PathMetric() = default;
  PathMetric(std::size_t n, std::vector<std::uint32_t> dist) : n_(n), dist_(std::move(dist)) {}

  std::size_t size() const { return n_; }
  std::uint32_t operator()(Vertex a, Vertex b) const { return dist_[std::size_t{a} * n_ + b]; }
  bool connected() const;
  /// Largest finite distance.
  std::uint32_t diameter() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> dist_;
};

/// Default cap on the vertex count of a dense path metric.
inline constexpr std::size_t kPathMetricCap = 1u << 14;

/// BFS from every vertex; `threads` > 1 splits sources across workers and
/// gives the identical matrix.
PathMetric path_metric(const LabeledGraph& g, unsigned threads = 1, std::size_t cap = kPathMetricCap);

/// Single-source BFS hop counts.
std::vector<std::uint32_t> bfs_distances(const LabeledGraph& g, Vertex source);

/// Sum of d(v,w) over ordered pairs; +infinity when disconnected.
double wiener_index(const LabeledGraph& g);

/// Wiener(G) - Wiener(G - e) over the pairs reachable in G; -infinity when
/// removing e separates a pair that G connects. InputError if e is absent.
double closeness_vitality(const LabeledGraph& g, Vertex a, Vertex b);

/// Vertex (i, j) gets index i * |V(h)| + j. Labels concatenate when both
/// factors carry them; product edges keep the factor edge weight.
LabeledGraph cartesian_product(const LabeledGraph& g, const LabeledGraph& h);

inline constexpr unsigned kHypercubeCap = 24;
inline constexpr std::size_t kGraphVertexCap = 100000;

/// Q_m: vertex v labeled with the m bits of v, most significant first.
LabeledGraph hypercube(unsigned m, unsigned cap = kHypercubeCap);

/// Strings over a q-ary alphabet of length 1..max_len (0..max_len with
/// include_empty), joined when their Levenshtein distance is exactly 1.
LabeledGraph levenshtein_graph(int alphabet_size, std::size_t max_len, bool include_empty = false,
                               std::size_t cap = kGraphVertexCap);

/// Weighted adjacency graph of the n-block source. Blocks that differ in
/// exactly one letter, where that letter pair has positive combined mass,
/// are joined; the weight is p^n(u,v) + p^n(v,u). For n = 1 this is "an
/// edge wherever the channel moves between two symbols".
LabeledGraph adjacency_graph(const JointSource& src, std::size_t block_n,
                             std::size_t cap = kGraphVertexCap);

/// p(y|x) + p(x|y): the per-edge label used when drawing adjacency graphs.
Scalar conditional_edge_weight(const JointSource& src, std::size_t x, std::size_t y);

/// Edge-list text: a vertex table ("v index name label") then "u v weight" lines.
void write_edge_list(std::ostream& os, const LabeledGraph& g);

}  // namespace malleable
