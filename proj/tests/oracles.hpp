#pragma once

// Brute-force references for the embedding searches. Deliberately naive:
// all-pairs distances by Floyd-Warshall, every injection enumerated.

#include <algorithm>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "malleable/embedding.hpp"
#include "malleable/graph_core.hpp"

namespace oracle {

using malleable::LabeledGraph;
using malleable::Rational;
using malleable::Vertex;

inline std::vector<std::vector<int>> distances(const LabeledGraph& g) {
  const std::size_t n = g.vertex_count();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Calls visit(map) for every injection of [0, guest) into [0, host).
template <class F>
void for_each_injection(std::size_t guest, std::size_t host, F&& visit) {
  std::vector<Vertex> map(guest);
  std::vector<bool> used(host, false);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == guest) {
      visit(map);
      return;
    }
    for (Vertex h = 0; h < host; ++h) {
      if (used[h]) continue;
      used[h] = true;
      map[i] = h;
      self(self, i + 1);
      used[h] = false;
    }
  };
  rec(rec, 0);
}

struct Best {
  bool found = false;
  Rational cost;
  std::vector<std::pair<Vertex, Vertex>> deleted;
  std::vector<Vertex> map;
};

// Minimum of sum m(u,v)(d_host - 1) over all injections, ties broken by
// (deleted edges, map read in `order`).
inline Best tolerant(const LabeledGraph& guest, const LabeledGraph& host, const malleable::PairMass& mass,
                     const std::vector<Vertex>& order) {
  const auto dh = distances(host);
  const int inf = 1 << 28;
  Best best;
  std::vector<Vertex> best_ordered;
  for_each_injection(guest.vertex_count(), host.vertex_count(), [&](const std::vector<Vertex>& map) {
    Rational c = 0;
    for (Vertex u = 0; u < guest.vertex_count(); ++u)
      for (Vertex v = u + 1; v < guest.vertex_count(); ++v) {
        const Rational& m = mass(u, v).rational();
        if (m == 0) continue;
        const int d = dh[map[u]][map[v]];
        if (d >= inf) return;
        c += m * (d - 1);
      }
    std::vector<std::pair<Vertex, Vertex>> del;
    for (const auto& e : guest.edges())
      if (dh[map[e.u]][map[e.v]] != 1) del.emplace_back(e.u, e.v);
    std::sort(del.begin(), del.end());
    std::vector<Vertex> ordered;
    for (Vertex v : order) ordered.push_back(map[v]);
    const bool better = !best.found || c < best.cost ||
                        (c == best.cost && (del < best.deleted || (del == best.deleted && ordered < best_ordered)));
    if (better) {
      best = Best{true, c, del, map};
      best_ordered = ordered;
    }
  });
  return best;
}

// Least exact embedding under `order`, or nullopt.
inline std::optional<std::vector<Vertex>> exact(const LabeledGraph& guest, const LabeledGraph& host,
                                                const std::vector<Vertex>& order) {
  std::optional<std::vector<Vertex>> best;
  std::vector<Vertex> best_ordered;
  for_each_injection(guest.vertex_count(), host.vertex_count(), [&](const std::vector<Vertex>& map) {
    for (const auto& e : guest.edges())
      if (!host.has_edge(map[e.u], map[e.v])) return;
    std::vector<Vertex> ordered;
    for (Vertex v : order) ordered.push_back(map[v]);
    if (!best || ordered < best_ordered) {
      best = map;
      best_ordered = ordered;
    }
  });
  return best;
}

inline LabeledGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  LabeledGraph g(n);
  std::bernoulli_distribution coin(p);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

// Random pair masses on a few random pairs plus every guest edge.
inline malleable::PairMass random_mass(std::mt19937_64& rng, const LabeledGraph& guest) {
  const std::size_t n = guest.vertex_count();
  malleable::PairMass mass(n);
  std::uniform_int_distribution<int> w(1, 12);
  std::bernoulli_distribution extra(0.2);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (guest.has_edge(u, v) || extra(rng)) mass.set(u, v, malleable::Scalar(w(rng), 100));
  return mass;
}

}  // namespace oracle
