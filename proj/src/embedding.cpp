#include "malleable/embedding.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <thread>
#include <type_traits>

#include "malleable/blocks.hpp"
#include "malleable/errors.hpp"

namespace malleable {

PairMass PairMass::from_source(const JointSource& src, std::size_t block_n, std::size_t cap) {
  const std::size_t n = block_count(src.size(), block_n, cap);
  PairMass pm(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      Scalar m = block_joint(src, u, v, block_n) + block_joint(src, v, u, block_n);
      if (m.is_positive()) pm.set(static_cast<Vertex>(u), static_cast<Vertex>(v), std::move(m));
    }
  return pm;
}

PairMass PairMass::from_edge_weights(const LabeledGraph& guest) {
  PairMass pm(guest.vertex_count());
  for (const auto& e : guest.edges()) pm.set(e.u, e.v, e.weight);
  return pm;
}

void PairMass::set(Vertex u, Vertex v, Scalar m) {
  if (u == v) throw InputError("pair mass: self-pairs carry no mass");
  if (m < Scalar(0)) throw InputError("pair mass: negative mass");
  mass_[std::size_t{u} * n_ + v] = m;
  mass_[std::size_t{v} * n_ + u] = std::move(m);
}

Scalar PairMass::total() const {
  Scalar t(0);
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = u + 1; v < n_; ++v) t += mass_[u * n_ + v];
  return t;
}

bool PairMass::exact() const {
  return std::all_of(mass_.begin(), mass_.end(), [](const Scalar& s) { return s.exact(); });
}

std::vector<Vertex> canonical_order(const LabeledGraph& guest) {
  const std::size_t n = guest.vertex_count();
  std::vector<Vertex> order;
  order.reserve(n);
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> links(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    Vertex pick = 0;
    bool have = false;
    for (Vertex v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (!have || links[v] > links[pick] ||
          (links[v] == links[pick] && guest.degree(v) > guest.degree(pick))) {
        pick = v;
        have = true;
      }
    }
    placed[pick] = true;
    order.push_back(pick);
    for (Vertex w : guest.neighbors(pick)) ++links[w];
  }
  return order;
}

std::vector<std::pair<Vertex, Vertex>> broken_edges(const LabeledGraph& guest, const LabeledGraph& host,
                                                     const std::vector<Vertex>& map) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (const auto& e : guest.edges())
    if (!host.has_edge(map[e.u], map[e.v])) out.emplace_back(e.u, e.v);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Scalar> realized_cost(const PathMetric& host_metric, const PairMass& mass,
                                    const std::vector<Vertex>& map) {
  Scalar cost(0);
  for (Vertex u = 0; u < mass.size(); ++u)
    for (Vertex v = u + 1; v < mass.size(); ++v) {
      const Scalar& m = mass(u, v);
      if (!m.is_positive()) continue;
      auto d = host_metric(map[u], map[v]);
      if (d == kUnreachable) return std::nullopt;
      cost += m * Scalar(static_cast<long long>(d) - 1);
    }
  return cost;
}

std::optional<Scalar> deletion_cost(const LabeledGraph& guest,
                                    const std::vector<std::pair<Vertex, Vertex>>& deleted,
                                    const PairMass& mass) {
  std::vector<std::size_t> idx;
  for (auto [u, v] : deleted) {
    auto i = guest.edge_index(u, v);
    if (!i) throw InputError("deletion_cost: not a guest edge");
    idx.push_back(*i);
  }
  PathMetric before = path_metric(guest);
  PathMetric after = path_metric(guest.without_edges(idx));
  Scalar cost(0);
  for (Vertex u = 0; u < mass.size(); ++u)
    for (Vertex v = u + 1; v < mass.size(); ++v) {
      const Scalar& m = mass(u, v);
      if (!m.is_positive() || before(u, v) == kUnreachable) continue;
      if (after(u, v) == kUnreachable) return std::nullopt;
      cost += m * Scalar(static_cast<long long>(after(u, v)) - static_cast<long long>(before(u, v)));
    }
  return cost;
}

bool verify_embedding(const LabeledGraph& guest, const LabeledGraph& host, const EmbeddingResult& result,
                      bool respect_attributes) {
  const auto& map = result.vertex_map;
  if (map.size() != guest.vertex_count()) return false;
  std::vector<bool> seen(host.vertex_count(), false);
  for (Vertex v = 0; v < map.size(); ++v) {
    if (map[v] >= host.vertex_count() || seen[map[v]]) return false;
    seen[map[v]] = true;
    if (respect_attributes && guest.label(v) && host.label(map[v]) != guest.label(v)) return false;
  }
  for (auto [u, v] : result.deleted_edges)
    if (!guest.has_edge(u, v)) return false;
  for (const auto& e : guest.edges()) {
    bool dropped = std::find(result.deleted_edges.begin(), result.deleted_edges.end(),
                             std::pair<Vertex, Vertex>{e.u, e.v}) != result.deleted_edges.end();
    if (!dropped && !host.has_edge(map[e.u], map[e.v])) return false;
  }
  return true;
}

namespace {

constexpr Vertex kFree = std::numeric_limits<Vertex>::max();

// Host vertices a guest vertex may occupy, ascending.
std::vector<std::vector<Vertex>> allowed_hosts(const LabeledGraph& guest, const LabeledGraph& host,
                                               bool respect_attributes, bool check_degree) {
  std::vector<std::vector<Vertex>> out(guest.vertex_count());
  for (Vertex v = 0; v < guest.vertex_count(); ++v) {
    if (respect_attributes && guest.label(v)) {
      auto h = host.find_label(*guest.label(v));
      if (h && (!check_degree || host.degree(*h) >= guest.degree(v))) out[v].push_back(*h);
      continue;
    }
    for (Vertex h = 0; h < host.vertex_count(); ++h)
      if (!check_degree || host.degree(h) >= guest.degree(v)) out[v].push_back(h);
  }
  return out;
}

class ExactSearch {
 public:
  ExactSearch(const LabeledGraph& guest, const LabeledGraph& host, bool respect, std::uint64_t budget)
      : guest_(guest),
        host_(host),
        respect_(respect),
        budget_(budget),
        order_(canonical_order(guest)),
        allowed_(allowed_hosts(guest, host, respect, true)),
        map_(guest.vertex_count(), kFree),
        used_(host.vertex_count(), false) {}

  bool run() { return dfs(0); }
  const std::vector<Vertex>& map() const { return map_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool compatible(Vertex v, Vertex h) const {
    if (used_[h] || host_.degree(h) < guest_.degree(v)) return false;
    if (respect_ && guest_.label(v) && host_.label(h) != guest_.label(v)) return false;
    for (Vertex u : guest_.neighbors(v))
      if (map_[u] != kFree && !host_.has_edge(h, map_[u])) return false;
    return true;
  }

  // Every unmapped neighbour of v still has somewhere to go.
  bool forward_ok(Vertex v) const {
    for (Vertex w : guest_.neighbors(v)) {
      if (map_[w] != kFree) continue;
      bool any = false;
      for (Vertex h : host_.neighbors(map_[v])) {
        if (compatible(w, h)) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    return true;
  }

  bool dfs(std::size_t depth) {
    if (depth == order_.size()) return true;
    if (budget_ != 0 && nodes_ >= budget_) throw ResourceError("exact_embed: node budget exhausted");
    ++nodes_;
    const Vertex v = order_[depth];
    Vertex anchor = kFree;
    for (Vertex u : guest_.neighbors(v))
      if (map_[u] != kFree) {
        anchor = u;
        break;
      }
    auto try_host = [&](Vertex h) {
      if (!compatible(v, h)) return false;
      map_[v] = h;
      used_[h] = true;
      if (forward_ok(v) && dfs(depth + 1)) return true;
      map_[v] = kFree;
      used_[h] = false;
      return false;
    };
    if (anchor != kFree) {
      for (Vertex h : host_.neighbors(map_[anchor])) {
        if (respect_ && guest_.label(v) && host_.label(h) != guest_.label(v)) continue;
        if (try_host(h)) return true;
      }
    } else {
      for (Vertex h : allowed_[v])
        if (try_host(h)) return true;
    }
    return false;
  }

  const LabeledGraph& guest_;
  const LabeledGraph& host_;
  bool respect_;
  std::uint64_t budget_;
  std::vector<Vertex> order_;
  std::vector<std::vector<Vertex>> allowed_;
  std::vector<Vertex> map_;
  std::vector<bool> used_;
  std::uint64_t nodes_ = 0;
};

template <class W>
struct SharedBound {
  std::mutex mu;
  bool have = false;
  W value{};

  void offer(W c) {
    std::lock_guard lock(mu);
    if (!have || c < value) {
      value = c;
      have = true;
    }
  }
  bool exceeds(W lb) {
    std::lock_guard lock(mu);
    return have && lb > value;
  }
};

template <class W>
struct Candidate {
  bool found = false;
  W cost{};
  std::vector<std::pair<Vertex, Vertex>> deleted;
  std::vector<Vertex> ordered_map;  // map read in canonical order
  std::vector<Vertex> map;
  bool aborted = false;
  std::uint64_t nodes = 0;

  bool better_than(const Candidate& o) const {
    if (!o.found) return found;
    if (!found) return false;
    if (cost != o.cost) return cost < o.cost;
    if (deleted != o.deleted) return deleted < o.deleted;
    return ordered_map < o.ordered_map;
  }
};

template <class W>
class TolerantSearch {
 public:
  TolerantSearch(const LabeledGraph& guest, const LabeledGraph& host, const PathMetric& metric,
                 const std::vector<std::vector<std::pair<Vertex, W>>>& mass_adj,
                 const std::vector<Vertex>& order, const std::vector<std::vector<Vertex>>& allowed,
                 const std::vector<W>& suffix_pairs, std::uint64_t budget, SharedBound<W>* shared)
      : guest_(guest),
        host_(host),
        metric_(metric),
        mass_adj_(mass_adj),
        order_(order),
        allowed_(allowed),
        suffix_pairs_(suffix_pairs),
        budget_(budget),
        shared_(shared),
        map_(guest.vertex_count(), kFree),
        used_(host.vertex_count(), false) {}

  // Explores the subtree where order[0] sits on each host in `roots`.
  Candidate<W> run(const std::vector<Vertex>& roots) {
    const Vertex v0 = order_[0];
    for (Vertex h : roots) {
      if (best_.aborted) break;
      map_[v0] = h;
      used_[h] = true;
      W lb = rest_bound(1);
      if (lb != kInfinite && !prune(lb)) dfs(1, W{});
      map_[v0] = kFree;
      used_[h] = false;
    }
    best_.nodes = nodes_;
    return best_;
  }

 private:
  static constexpr W kInfinite = std::numeric_limits<W>::max();

  // Added cost of placing v on h given already-mapped vertices.
  W placement_cost(Vertex v, Vertex h) const {
    W c{};
    for (const auto& [u, w] : mass_adj_[v]) {
      if (map_[u] == kFree) continue;
      auto d = metric_(h, map_[u]);
      if (d == kUnreachable) return kInfinite;
      c += w * static_cast<W>(d);
    }
    return c;
  }

  // Admissible bound for everything from order[depth] on.
  W rest_bound(std::size_t depth) const {
    W total = suffix_pairs_[depth];
    for (std::size_t k = depth; k < order_.size(); ++k) {
      const Vertex v = order_[k];
      W best = kInfinite;
      for (Vertex h : allowed_[v]) {
        if (used_[h]) continue;
        W c = placement_cost(v, h);
        if (c < best) best = c;
      }
      if (best == kInfinite) return kInfinite;
      total += best;
    }
    return total;
  }

  bool prune(W lb) const {
    if (best_.found) {
      if (lb > best_.cost) return true;
      // Nothing later in DFS order can beat an equal-cost empty deletion set.
      if (lb == best_.cost && best_.deleted.empty()) return true;
    }
    return shared_ != nullptr && shared_->exceeds(lb);
  }

  void dfs(std::size_t depth, W cost) {
    if (best_.aborted) return;
    if (budget_ != 0 && nodes_ >= budget_) {
      best_.aborted = true;
      return;
    }
    ++nodes_;
    if (depth == order_.size()) {
      leaf(cost);
      return;
    }
    const Vertex v = order_[depth];
    for (Vertex h : allowed_[v]) {
      if (used_[h]) continue;
      W add = placement_cost(v, h);
      if (add == kInfinite) continue;
      W next = cost + add;
      map_[v] = h;
      used_[h] = true;
      W rest = rest_bound(depth + 1);
      if (rest != kInfinite && !prune(next + rest)) dfs(depth + 1, next);
      map_[v] = kFree;
      used_[h] = false;
      if (best_.aborted) return;
    }
  }

  void leaf(W cost) {
    Candidate<W> c;
    c.found = true;
    c.cost = cost;
    c.map = map_;
    c.deleted = broken_edges(guest_, host_, map_);
    c.ordered_map.reserve(order_.size());
    for (Vertex v : order_) c.ordered_map.push_back(map_[v]);
    if (c.better_than(best_)) {
      bool aborted = best_.aborted;
      best_ = std::move(c);
      best_.aborted = aborted;
      if (shared_ != nullptr) shared_->offer(best_.cost);
    }
  }

  const LabeledGraph& guest_;
  const LabeledGraph& host_;
  const PathMetric& metric_;
  const std::vector<std::vector<std::pair<Vertex, W>>>& mass_adj_;
  const std::vector<Vertex>& order_;
  const std::vector<std::vector<Vertex>>& allowed_;
  const std::vector<W>& suffix_pairs_;
  std::uint64_t budget_;
  SharedBound<W>* shared_;
  std::vector<Vertex> map_;
  std::vector<bool> used_;
  Candidate<W> best_;
  std::uint64_t nodes_ = 0;
};

template <class W>
std::optional<EmbeddingResult> solve_tolerant(const LabeledGraph& guest, const LabeledGraph& host,
                                              const PairMass& mass, const std::vector<W>& weights,
                                              bool respect, const SearchOptions& options) {
  const std::size_t n = guest.vertex_count();
  const PathMetric metric = path_metric(host);
  const std::vector<Vertex> order = canonical_order(guest);
  const auto allowed = allowed_hosts(guest, host, respect, false);

  std::vector<std::vector<std::pair<Vertex, W>>> mass_adj(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && weights[std::size_t{u} * n + v] > W{}) mass_adj[u].emplace_back(v, weights[std::size_t{u} * n + v]);

  // suffix_pairs[k]: weight of pairs with both endpoints at positions >= k,
  // each of which costs at least distance 1 once placed.
  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;
  std::vector<W> suffix(n + 1, W{});
  for (Vertex u = 0; u < n; ++u)
    for (const auto& [v, w] : mass_adj[u])
      if (u < v) suffix[std::min(position[u], position[v])] += w;
  for (std::size_t k = n; k-- > 0;) suffix[k] += suffix[k + 1];

  const auto& roots = allowed[order[0]];
  unsigned threads = std::max(1u, options.threads);
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, roots.size())));

  Candidate<W> best;
  std::uint64_t nodes = 0;
  bool aborted = false;
  if (threads == 1) {
    TolerantSearch<W> search(guest, host, metric, mass_adj, order, allowed, suffix, options.node_budget, nullptr);
    best = search.run(roots);
    nodes = best.nodes;
    aborted = best.aborted;
  } else {
    SharedBound<W> shared;
    std::vector<Candidate<W>> results(threads);
    std::vector<std::thread> pool;
    const std::uint64_t per_thread = options.node_budget == 0 ? 0 : std::max<std::uint64_t>(1, options.node_budget / threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        std::vector<Vertex> mine;
        for (std::size_t i = t; i < roots.size(); i += threads) mine.push_back(roots[i]);
        TolerantSearch<W> search(guest, host, metric, mass_adj, order, allowed, suffix, per_thread, &shared);
        results[t] = search.run(mine);
      });
    }
    for (auto& th : pool) th.join();
    for (auto& r : results) {
      nodes += r.nodes;
      aborted = aborted || r.aborted;
      if (r.better_than(best)) best = std::move(r);
    }
  }
  if (!best.found) {
    if (aborted) throw ResourceError("tolerant_embed: node budget exhausted before any embedding was found");
    return std::nullopt;
  }

  EmbeddingResult out;
  out.vertex_map = best.map;
  out.deleted_edges = best.deleted;
  out.cost = *realized_cost(metric, mass, best.map);
  out.proven_optimal = !aborted;
  out.nodes = nodes;
  return out;
}

}  // namespace

std::optional<EmbeddingResult> exact_embed(const LabeledGraph& guest, const LabeledGraph& host,
                                           bool respect_attributes, const SearchOptions& options) {
  if (guest.vertex_count() > host.vertex_count()) return std::nullopt;
  if (guest.vertex_count() == 0) return EmbeddingResult{};
  if (guest.max_degree() > host.max_degree()) return std::nullopt;
  ExactSearch search(guest, host, respect_attributes, options.node_budget);
  if (!search.run()) return std::nullopt;
  EmbeddingResult out;
  out.vertex_map = search.map();
  out.nodes = search.nodes();
  return out;
}

std::optional<EmbeddingResult> tolerant_embed(const LabeledGraph& guest, const LabeledGraph& host,
                                              const PairMass& mass, bool respect_attributes,
                                              const SearchOptions& options) {
  const std::size_t n = guest.vertex_count();
  if (mass.size() != n) throw InputError("tolerant_embed: pair mass size does not match guest");
  if (n > host.vertex_count()) return std::nullopt;
  if (n == 0) return EmbeddingResult{};

  // Exact masses are scaled to integers so ties compare exactly.
  if (mass.exact()) {
    BigInt lcm = 1;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(mass(u, v).rational()));
    std::vector<std::int64_t> w(n * n, 0);
    BigInt total = 0;
    bool fits = true;
    for (Vertex u = 0; u < n && fits; ++u)
      for (Vertex v = 0; v < n; ++v) {
        if (u == v) continue;
        const Rational& r = mass(u, v).rational();
        BigInt scaled = boost::multiprecision::numerator(r) * (lcm / boost::multiprecision::denominator(r));
        total += scaled;
        if (scaled > BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
          fits = false;
          break;
        }
        w[std::size_t{u} * n + v] = static_cast<std::int64_t>(scaled);
      }
    if (fits && total * BigInt(host.vertex_count() + 1) < BigInt(std::numeric_limits<std::int64_t>::max() / 4))
      return solve_tolerant<std::int64_t>(guest, host, mass, w, respect_attributes, options);
  }
  std::vector<double> w(n * n, 0.0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v) w[std::size_t{u} * n + v] = mass(u, v).to_double();
  return solve_tolerant<double>(guest, host, mass, w, respect_attributes, options);
}

Scalar subgraph_distance(const LabeledGraph& guest, const LabeledGraph& host, const PairMass& mass,
                         bool respect_attributes, const SearchOptions& options) {
  auto r = tolerant_embed(guest, host, mass, respect_attributes, options);
  if (!r) throw InfeasibleError("no error-tolerant embedding of the guest into the host");
  return r->cost;
}

}  // namespace malleable
