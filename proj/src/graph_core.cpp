#include "malleable/graph_core.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <thread>

#include "malleable/blocks.hpp"
#include "malleable/errors.hpp"

namespace malleable {

LabeledGraph::LabeledGraph(std::size_t vertices)
    : adjacency_(vertices), labels_(vertices), names_(vertices) {}

Vertex LabeledGraph::add_vertex(std::optional<StorageString> label, std::string name) {
  auto v = static_cast<Vertex>(adjacency_.size());
  adjacency_.emplace_back();
  labels_.emplace_back();
  names_.push_back(std::move(name));
  if (label) set_label(v, std::move(label));
  return v;
}

std::uint64_t LabeledGraph::key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

std::size_t LabeledGraph::add_edge(Vertex a, Vertex b, Scalar weight) {
  if (a >= vertex_count() || b >= vertex_count()) throw InputError("edge endpoint out of range");
  if (a == b) throw InputError("self-loops are not edges");
  if (weight < Scalar(0)) throw InputError("negative edge weight");
  if (a > b) std::swap(a, b);
  auto [it, inserted] = edge_lookup_.emplace(key(a, b), edges_.size());
  if (!inserted)
    throw InputError("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
  edges_.push_back(Edge{a, b, std::move(weight)});
  auto insert_sorted = [](std::vector<Vertex>& adj, Vertex w) {
    adj.insert(std::lower_bound(adj.begin(), adj.end(), w), w);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
  return it->second;
}

std::size_t LabeledGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adjacency_) d = std::max(d, a.size());
  return d;
}

bool LabeledGraph::has_edge(Vertex a, Vertex b) const {
  return a != b && edge_lookup_.contains(key(a, b));
}

std::optional<std::size_t> LabeledGraph::edge_index(Vertex a, Vertex b) const {
  if (a == b) return std::nullopt;
  auto it = edge_lookup_.find(key(a, b));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

void LabeledGraph::set_label(Vertex v, std::optional<StorageString> label) {
  if (labels_[v]) {
    auto it = label_lookup_.find(to_string(*labels_[v]));
    if (it != label_lookup_.end() && it->second == v) label_lookup_.erase(it);
  }
  labels_[v] = std::move(label);
  if (labels_[v]) label_lookup_[to_string(*labels_[v])] = v;
}

std::optional<Vertex> LabeledGraph::find_label(const StorageString& label) const {
  auto it = label_lookup_.find(to_string(label));
  if (it == label_lookup_.end()) return std::nullopt;
  return it->second;
}

bool LabeledGraph::has_labels() const {
  return std::any_of(labels_.begin(), labels_.end(), [](const auto& l) { return l.has_value(); });
}

LabeledGraph LabeledGraph::without_edges(std::span<const std::size_t> edge_indices) const {
  std::vector<bool> drop(edges_.size(), false);
  for (std::size_t i : edge_indices) {
    if (i >= edges_.size()) throw InputError("edge index out of range");
    drop[i] = true;
  }
  LabeledGraph out;
  for (Vertex v = 0; v < vertex_count(); ++v) out.add_vertex(labels_[v], names_[v]);
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (!drop[i]) out.add_edge(edges_[i].u, edges_[i].v, edges_[i].weight);
  return out;
}

bool PathMetric::connected() const {
  return std::none_of(dist_.begin(), dist_.end(), [](std::uint32_t d) { return d == kUnreachable; });
}

std::uint32_t PathMetric::diameter() const {
  std::uint32_t best = 0;
  for (auto d : dist_)
    if (d != kUnreachable) best = std::max(best, d);
  return best;
}

std::vector<std::uint32_t> bfs_distances(const LabeledGraph& g, Vertex source) {
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
  std::vector<Vertex> queue;
  queue.reserve(g.vertex_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

PathMetric path_metric(const LabeledGraph& g, unsigned threads, std::size_t cap) {
  const std::size_t n = g.vertex_count();
  if (n > cap) throw ResourceError("path metric: " + std::to_string(n) + " vertices exceeds cap");
  std::vector<std::uint32_t> dist(n * n, kUnreachable);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t s = begin; s < n; s += stride) {
      auto row = bfs_distances(g, static_cast<Vertex>(s));
      std::copy(row.begin(), row.end(), dist.begin() + static_cast<std::ptrdiff_t>(s * n));
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || n < 64) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  return PathMetric(n, std::move(dist));
}

double wiener_index(const LabeledGraph& g) {
  double total = 0.0;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    for (auto d : bfs_distances(g, s)) {
      if (d == kUnreachable) return std::numeric_limits<double>::infinity();
      total += d;
    }
  }
  return total;
}

double closeness_vitality(const LabeledGraph& g, Vertex a, Vertex b) {
  auto idx = g.edge_index(a, b);
  if (!idx) throw InputError("closeness_vitality: edge not in graph");
  std::size_t drop[] = {*idx};
  LabeledGraph reduced = g.without_edges(drop);
  double diff = 0.0;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    auto before = bfs_distances(g, s);
    auto after = bfs_distances(reduced, s);
    for (std::size_t t = 0; t < before.size(); ++t) {
      if (before[t] == kUnreachable) continue;
      if (after[t] == kUnreachable) return -std::numeric_limits<double>::infinity();
      diff += static_cast<double>(before[t]) - static_cast<double>(after[t]);
    }
  }
  return diff;
}

LabeledGraph cartesian_product(const LabeledGraph& g, const LabeledGraph& h) {
  const std::size_t ng = g.vertex_count();
  const std::size_t nh = h.vertex_count();
  LabeledGraph out;
  for (Vertex i = 0; i < ng; ++i) {
    for (Vertex j = 0; j < nh; ++j) {
      std::optional<StorageString> label;
      if (g.label(i) && h.label(j)) {
        label = *g.label(i);
        label->insert(label->end(), h.label(j)->begin(), h.label(j)->end());
      }
      std::string name;
      if (!g.name(i).empty() || !h.name(j).empty()) name = g.name(i) + h.name(j);
      out.add_vertex(std::move(label), std::move(name));
    }
  }
  auto id = [nh](Vertex i, Vertex j) { return static_cast<Vertex>(std::size_t{i} * nh + j); };
  for (Vertex i = 0; i < ng; ++i)
    for (const auto& e : h.edges()) out.add_edge(id(i, e.u), id(i, e.v), e.weight);
  for (const auto& e : g.edges())
    for (Vertex j = 0; j < nh; ++j) out.add_edge(id(e.u, j), id(e.v, j), e.weight);
  return out;
}

LabeledGraph hypercube(unsigned m, unsigned cap) {
  if (m < 1) throw InputError("hypercube: dimension must be >= 1");
  if (m > cap) throw ResourceError("hypercube: dimension " + std::to_string(m) + " exceeds cap " +
                                   std::to_string(cap));
  const std::size_t n = std::size_t{1} << m;
  LabeledGraph g;
  for (std::size_t v = 0; v < n; ++v) {
    StorageString label(m);
    for (unsigned b = 0; b < m; ++b) label[b] = static_cast<Symbol>((v >> (m - 1 - b)) & 1u);
    g.add_vertex(std::move(label));
  }
  for (std::size_t v = 0; v < n; ++v)
    for (unsigned b = 0; b < m; ++b) {
      std::size_t w = v ^ (std::size_t{1} << b);
      if (v < w) g.add_edge(static_cast<Vertex>(v), static_cast<Vertex>(w));
    }
  return g;
}

LabeledGraph levenshtein_graph(int alphabet_size, std::size_t max_len, bool include_empty,
                               std::size_t cap) {
  if (alphabet_size < 2) throw InputError("levenshtein_graph: alphabet size must be >= 2");
  if (max_len < 1) throw InputError("levenshtein_graph: max_len must be >= 1");
  const auto q = static_cast<std::size_t>(alphabet_size);
  std::size_t total = include_empty ? 1 : 0;
  std::size_t layer = 1;
  for (std::size_t len = 1; len <= max_len; ++len) {
    if (layer > cap / q) throw ResourceError("levenshtein_graph: vertex cap exceeded");
    layer *= q;
    total += layer;
    if (total > cap) throw ResourceError("levenshtein_graph: vertex cap exceeded");
  }

  LabeledGraph g;
  for (std::size_t len = include_empty ? 0 : 1; len <= max_len; ++len) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < len; ++i) count *= q;
    for (std::size_t idx = 0; idx < count; ++idx) {
      StorageString s(len);
      std::size_t rem = idx;
      for (std::size_t i = len; i-- > 0;) {
        s[i] = static_cast<Symbol>(rem % q);
        rem /= q;
      }
      g.add_vertex(std::move(s));
    }
  }
  // Distance exactly one: a single substitution (same length) or a single
  // insertion (length + 1).
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const StorageString& s = *g.label(v);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t c = 0; c < q; ++c) {
        if (c == s[i]) continue;
        StorageString t = s;
        t[i] = static_cast<Symbol>(c);
        auto w = g.find_label(t);
        if (w && v < *w) g.add_edge(v, *w);
      }
    }
    if (s.size() < max_len) {
      for (std::size_t i = 0; i <= s.size(); ++i) {
        for (std::size_t c = 0; c < q; ++c) {
          StorageString t = s;
          t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), static_cast<Symbol>(c));
          auto w = g.find_label(t);
          if (w && !g.has_edge(v, *w)) g.add_edge(v, *w);
        }
      }
    }
  }
  return g;
}

LabeledGraph adjacency_graph(const JointSource& src, std::size_t block_n, std::size_t cap) {
  if (block_n < 1) throw InputError("adjacency_graph: block length must be >= 1");
  const std::size_t q = src.size();
  const std::size_t n = block_count(q, block_n, cap);
  LabeledGraph g;
  for (std::size_t b = 0; b < n; ++b) g.add_vertex(std::nullopt, block_name(src.alphabet(), b, block_n));

  std::vector<bool> letter_edge(q * q, false);
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y)
      letter_edge[x * q + y] = x != y && (src(x, y) + src(y, x)).is_positive();

  for (std::size_t u = 0; u < n; ++u) {
    std::size_t place = 1;
    for (std::size_t pos = 0; pos < block_n; ++pos, place *= q) {
      std::size_t letter = (u / place) % q;
      for (std::size_t other = letter + 1; other < q; ++other) {
        if (!letter_edge[letter * q + other]) continue;
        std::size_t v = u + (other - letter) * place;
        Scalar w = block_joint(src, u, v, block_n) + block_joint(src, v, u, block_n);
        g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), std::move(w));
      }
    }
  }
  return g;
}

Scalar conditional_edge_weight(const JointSource& src, std::size_t x, std::size_t y) {
  auto [px, py] = marginals(src);
  Scalar w(0);
  if (px[x].is_positive()) w += src(x, y) / px[x];
  if (px[y].is_positive()) w += src(y, x) / px[y];
  return w;
}

void write_edge_list(std::ostream& os, const LabeledGraph& g) {
  os << "# vertices " << g.vertex_count() << "\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    os << "v " << v << ' ' << (g.name(v).empty() ? "-" : g.name(v)) << ' '
       << (g.label(v) ? (g.label(v)->empty() ? std::string("e") : to_string(*g.label(v))) : std::string("-"))
       << "\n";
  }
  os << "# edges " << g.edge_count() << "\n";
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << ' ' << e.weight.str() << "\n";
}

}  // namespace malleable
