#include "malleable/block_typicality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <thread>

#include "malleable/blocks.hpp"
#include "malleable/errors.hpp"

namespace malleable {

namespace {

// Absorbs rounding in sum |N/n - p| when the sum sits exactly on delta.
constexpr double kTypicalitySlop = 1e-12;

std::size_t checked_blocks(std::size_t alphabet, const TypicalityConfig& cfg) {
  if (cfg.block_n == 0) throw InputError("typicality: block length must be at least 1");
  return block_count(alphabet, cfg.block_n, cfg.cap);
}

bool typical_counts(const std::vector<std::size_t>& counts, const std::vector<double>& p,
                    const std::vector<bool>& zero, std::size_t n, double delta) {
  double dev = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (zero[a] && counts[a] > 0) return false;
    dev += std::abs(static_cast<double>(counts[a]) / static_cast<double>(n) - p[a]);
  }
  return dev <= delta + kTypicalitySlop;
}

struct Flat {
  std::vector<double> p;
  std::vector<bool> zero;
};

Flat flatten(const std::vector<Scalar>& probs) {
  Flat f;
  for (const auto& s : probs) {
    f.p.push_back(s.to_double());
    f.zero.push_back(s.is_zero());
  }
  return f;
}

std::vector<Scalar> joint_cells(const JointSource& src) {
  std::vector<Scalar> cells;
  for (std::size_t x = 0; x < src.size(); ++x)
    for (std::size_t y = 0; y < src.size(); ++y) cells.push_back(src(x, y));
  return cells;
}

BigInt factorial(std::size_t k) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

// Calls visit(counts) for every composition of n into `cells` parts.
void for_each_type(std::size_t cells, std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> counts(cells, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t cell, std::size_t left) {
    if (cell + 1 == cells) {
      counts[cell] = left;
      visit(counts);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[cell] = c;
      rec(cell + 1, left - c);
    }
  };
  rec(0, n);
}

TypeSummary summarize_types(const std::vector<Scalar>& probs, std::size_t n, double delta,
                            const std::function<bool(const std::vector<std::size_t>&)>& extra = {}) {
  const Flat flat = flatten(probs);
  const BigInt nfact = factorial(n);
  TypeSummary out;
  for_each_type(probs.size(), n, [&](const std::vector<std::size_t>& counts) {
    if (!typical_counts(counts, flat.p, flat.zero, n, delta)) return;
    if (extra && !extra(counts)) return;
    BigInt ways = nfact;
    Scalar mass(1);
    for (std::size_t a = 0; a < counts.size(); ++a) {
      ways /= factorial(counts[a]);
      mass *= pow(probs[a], static_cast<unsigned>(counts[a]));
    }
    out.count += ways;
    out.mass += Scalar(Rational(ways)) * mass;
    ++out.types;
  });
  return out;
}

}  // namespace

double resolve_delta(const TypicalityConfig& cfg) {
  if (cfg.delta) {
    if (!(*cfg.delta >= 0.0)) throw InputError("typicality: delta must be nonnegative");
    return *cfg.delta;
  }
  if (!(cfg.omega > 0.0) || !(cfg.c > 0.0)) throw InputError("typicality: omega and c must be positive");
  if (cfg.block_n == 0) throw InputError("typicality: block length must be at least 1");
  return cfg.c * std::pow(static_cast<double>(cfg.block_n), -0.5 + cfg.omega);
}

std::vector<std::size_t> letter_counts(std::size_t block, std::size_t alphabet, std::size_t n) {
  std::vector<std::size_t> counts(alphabet, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++counts[block % alphabet];
    block /= alphabet;
  }
  return counts;
}

bool strongly_typical(const std::vector<std::size_t>& counts, const Distribution& d, std::size_t n, double delta) {
  if (counts.size() != d.size()) throw InputError("typicality: count vector size mismatch");
  const Flat flat = flatten(d.probs());
  return typical_counts(counts, flat.p, flat.zero, n, delta);
}

std::vector<std::size_t> typical_set(const Distribution& d, const TypicalityConfig& cfg) {
  const std::size_t blocks = checked_blocks(d.size(), cfg);
  const double delta = resolve_delta(cfg);
  const Flat flat = flatten(d.probs());
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < blocks; ++b)
    if (typical_counts(letter_counts(b, d.size(), cfg.block_n), flat.p, flat.zero, cfg.block_n, delta))
      out.push_back(b);
  return out;
}

bool jointly_typical(const JointSource& src, std::size_t x, std::size_t y, std::size_t n, double delta) {
  const std::size_t q = src.size();
  std::vector<std::size_t> counts(q * q, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++counts[(x % q) * q + y % q];
    x /= q;
    y /= q;
  }
  const Flat flat = flatten(joint_cells(src));
  return typical_counts(counts, flat.p, flat.zero, n, delta);
}

std::vector<std::size_t> conditional_typical_set(const JointSource& src, std::size_t x, const TypicalityConfig& cfg) {
  const std::size_t blocks = checked_blocks(src.size(), cfg);
  if (x >= blocks) throw InputError("typicality: block out of range");
  const double delta = resolve_delta(cfg);
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < blocks; ++y)
    if (jointly_typical(src, x, y, cfg.block_n, delta)) out.push_back(y);
  return out;
}

std::vector<std::size_t> connected_typical_set(const JointSource& src, const TypicalityConfig& cfg, bool y_side) {
  const std::size_t blocks = checked_blocks(src.size(), cfg);
  const double delta = resolve_delta(cfg);
  auto [px, py] = marginals(src);
  std::vector<std::size_t> out;
  for (std::size_t a : typical_set(y_side ? py : px, cfg)) {
    for (std::size_t b = 0; b < blocks; ++b) {
      bool jt = y_side ? jointly_typical(src, b, a, cfg.block_n, delta) : jointly_typical(src, a, b, cfg.block_n, delta);
      if (jt) {
        out.push_back(a);
        break;
      }
    }
  }
  return out;
}

TypeSummary typical_mass(const Distribution& d, const TypicalityConfig& cfg) {
  return summarize_types(d.probs(), cfg.block_n, resolve_delta(cfg));
}

TypeSummary joint_typical_mass(const JointSource& src, const TypicalityConfig& cfg) {
  return summarize_types(joint_cells(src), cfg.block_n, resolve_delta(cfg));
}

double realized_slack(double size, double h_bits, std::size_t n, double lower_scale) {
  if (size <= 0.0) return std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  double s = std::max(0.0, std::log2(size) / nn - h_bits);
  if (lower_scale > 0.0) s = std::max(s, h_bits - (std::log2(size) - std::log2(lower_scale)) / nn);
  return s;
}

TypicalityGraph typicality_graph(const JointSource& src, const TypicalityConfig& cfg) {
  const std::size_t q = src.size();
  const std::size_t n = cfg.block_n;
  const std::size_t blocks = checked_blocks(q, cfg);
  const double delta = resolve_delta(cfg);
  auto [px, py] = marginals(src);

  TypicalityGraph out;
  TypicalityReport& r = out.report;
  r.block_n = n;
  r.delta = delta;
  r.sequences = blocks;
  r.h_x = entropy(px, 2);
  r.h_y = entropy(py, 2);
  r.h_xy = joint_entropy(src, 2);
  r.h_y_given_x = r.h_xy - r.h_x;

  const std::vector<std::size_t> tx = typical_set(px, cfg);
  const std::vector<std::size_t> ty = typical_set(py, cfg);
  r.t_x = tx.size();
  r.t_y = ty.size();
  r.t_x_mass = typical_mass(px, cfg).mass;
  r.t_y_mass = typical_mass(py, cfg).mass;

  // Consistency holds per joint type, so checking every type covers every pair.
  const std::vector<Scalar> cells = joint_cells(src);
  const Flat fx = flatten(px.probs()), fy = flatten(py.probs());
  const TypeSummary joint = summarize_types(cells, n, delta, [&](const std::vector<std::size_t>& c) {
    std::vector<std::size_t> cx(q, 0), cy(q, 0);
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) {
        cx[a] += c[a * q + b];
        cy[b] += c[a * q + b];
      }
    if (!typical_counts(cx, fx.p, fx.zero, n, delta) || !typical_counts(cy, fy.p, fy.zero, n, delta))
      r.consistent = false;
    return true;
  });
  r.t_xy_mass = joint.mass;

  // Letters of every block; only their counts matter, so order is irrelevant.
  std::vector<std::uint8_t> letters(blocks * n);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t v = b;
    for (std::size_t i = 0; i < n; ++i) {
      letters[b * n + i] = static_cast<std::uint8_t>(v % q);
      v /= q;
    }
  }
  const Flat fj = flatten(cells);

  // Rows of the typicality matrix over T_X x T_Y, split across workers by stride.
  std::vector<std::vector<std::size_t>> rows(tx.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    std::vector<std::size_t> counts(q * q);
    for (std::size_t i = begin; i < tx.size(); i += stride) {
      const std::uint8_t* lx = &letters[tx[i] * n];
      for (std::size_t y : ty) {
        std::fill(counts.begin(), counts.end(), 0);
        const std::uint8_t* ly = &letters[y * n];
        for (std::size_t k = 0; k < n; ++k) ++counts[lx[k] * q + ly[k]];
        if (typical_counts(counts, fj.p, fj.zero, n, delta)) rows[i].push_back(y);
      }
    }
  };
  const unsigned threads = std::max(1u, cfg.threads);
  if (threads == 1 || tx.size() < 64) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  std::vector<std::size_t> sx;
  std::set<std::size_t> sy_set;
  std::vector<std::size_t> degrees;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    r.t_xy += rows[i].size();
    if (rows[i].empty()) continue;
    sx.push_back(tx[i]);
    degrees.push_back(rows[i].size());
    sy_set.insert(rows[i].begin(), rows[i].end());
  }
  const std::vector<std::size_t> sy(sy_set.begin(), sy_set.end());
  r.s_x = sx.size();
  r.s_y = sy.size();
  r.same_vertex_sets = sx == sy;

  std::set<std::size_t> all(sx.begin(), sx.end());
  all.insert(sy.begin(), sy.end());
  out.blocks.assign(all.begin(), all.end());
  std::vector<std::size_t> position(blocks, 0);
  for (std::size_t i = 0; i < out.blocks.size(); ++i) {
    position[out.blocks[i]] = i;
    out.graph.add_vertex(std::nullopt, block_name(src.alphabet(), out.blocks[i], n));
  }
  out.self_loop.assign(out.blocks.size(), false);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    for (std::size_t y : rows[i]) {
      std::size_t u = position[tx[i]], v = position[y];
      if (u == v) {
        out.self_loop[u] = true;
        continue;
      }
      pairs.emplace(std::min(u, v), std::max(u, v));
    }
  }
  for (auto [u, v] : pairs) {
    Scalar w = block_joint(src, out.blocks[u], out.blocks[v], n) + block_joint(src, out.blocks[v], out.blocks[u], n);
    out.graph.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), w);
  }
  r.vertices = out.blocks.size();
  r.edges = out.graph.edge_count();
  r.self_loops = static_cast<std::size_t>(std::count(out.self_loop.begin(), out.self_loop.end(), true));
  r.max_simple_degree = out.graph.max_degree();
  if (!degrees.empty()) {
    r.degree.min = *std::min_element(degrees.begin(), degrees.end());
    r.degree.max = *std::max_element(degrees.begin(), degrees.end());
    double sum = 0;
    for (auto d : degrees) sum += static_cast<double>(d);
    r.degree.mean = sum / static_cast<double>(degrees.size());
  }

  // Components, then eccentricities inside the largest one.
  const LabeledGraph& g = out.graph;
  std::vector<std::size_t> comp(g.vertex_count(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> comp_size;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] != std::numeric_limits<std::size_t>::max()) continue;
    const std::size_t id = comp_size.size();
    comp_size.push_back(0);
    auto dist = bfs_distances(g, s);
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (dist[v] != kUnreachable) {
        comp[v] = id;
        ++comp_size[id];
      }
  }
  r.components = comp_size.size();
  if (!comp_size.empty()) {
    const std::size_t big = static_cast<std::size_t>(std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());
    r.largest_component = comp_size[big];
    std::vector<Vertex> members;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (comp[v] == big) members.push_back(v);
    std::vector<std::uint32_t> ecc(members.size(), 0);
    auto ecc_work = [&](std::size_t begin, std::size_t stride) {
      for (std::size_t i = begin; i < members.size(); i += stride) {
        auto dist = bfs_distances(g, members[i]);
        for (Vertex v : members) ecc[i] = std::max(ecc[i], dist[v]);
      }
    };
    if (threads == 1 || members.size() < 64) {
      ecc_work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(ecc_work, t, threads);
      for (auto& th : pool) th.join();
    }
    r.diameter = *std::max_element(ecc.begin(), ecc.end());
  }

  const double keep = 1.0 - delta;
  r.eta_x = realized_slack(static_cast<double>(r.t_x), r.h_x, n, keep);
  r.eta_y = realized_slack(static_cast<double>(r.t_y), r.h_y, n, keep);
  r.lambda = realized_slack(static_cast<double>(r.t_xy), r.h_xy, n, keep);
  r.psi = realized_slack(static_cast<double>(r.vertices), r.h_x, n, keep);
  r.nu = 0.0;
  for (auto d : degrees) r.nu = std::max(r.nu, realized_slack(static_cast<double>(d), r.h_y_given_x, n, 1.0));
  return out;
}

namespace {
nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return round12(v);
  return nullptr;
}
}  // namespace

nlohmann::ordered_json to_json(const TypicalityReport& r) {
  nlohmann::ordered_json j;
  j["block_n"] = r.block_n;
  j["delta"] = round12(r.delta);
  j["sequences"] = r.sequences;
  j["T_X"] = r.t_x;
  j["T_Y"] = r.t_y;
  j["T_XY"] = r.t_xy;
  j["S_X"] = r.s_x;
  j["S_Y"] = r.s_y;
  j["Pr_T_X"] = r.t_x_mass.str();
  j["Pr_T_Y"] = r.t_y_mass.str();
  j["Pr_T_XY"] = r.t_xy_mass.str();
  j["consistent"] = r.consistent;
  j["same_vertex_sets"] = r.same_vertex_sets;
  j["vertices"] = r.vertices;
  j["edges"] = r.edges;
  j["self_loops"] = r.self_loops;
  j["degree"] = {{"min", r.degree.min}, {"max", r.degree.max}, {"mean", round12(r.degree.mean)}};
  j["max_simple_degree"] = r.max_simple_degree;
  j["components"] = r.components;
  j["largest_component"] = r.largest_component;
  j["diameter"] = r.diameter;
  j["entropy_bits"] = {{"H_X", round12(r.h_x)},
                       {"H_Y", round12(r.h_y)},
                       {"H_XY", round12(r.h_xy)},
                       {"H_Y_given_X", round12(r.h_y_given_x)}};
  j["slack"] = {{"eta_X", finite_or_null(r.eta_x)},
                {"eta_Y", finite_or_null(r.eta_y)},
                {"lambda", finite_or_null(r.lambda)},
                {"nu", finite_or_null(r.nu)},
                {"psi", finite_or_null(r.psi)}};
  return j;
}

CostCheck exponential_cost_check(const JointSource& src, const TypicalityConfig& cfg, std::size_t nK,
                                 const TypicalityReport* materialized) {
  const int base = src.storage_alphabet_size();
  auto [px, py] = marginals(src);
  const double n = static_cast<double>(cfg.block_n);
  const double hx = entropy(px, base);
  const double hyx = conditional_entropy(src, 2);
  CostCheck c;
  c.nK = nK;
  c.required = std::max(n * hx, std::exp2(n * hyx) / (base - 1));
  c.analytic_ok = static_cast<double>(nK) + 1e-9 >= c.required;
  if (materialized) {
    // |V|^{nK} >= vertices, compared in logs to avoid overflow.
    c.vertex_ok = materialized->vertices == 0 ||
                  std::log(static_cast<double>(materialized->vertices)) <=
                      static_cast<double>(nK) * std::log(static_cast<double>(base)) + 1e-12;
    c.degree_ok = materialized->max_simple_degree <= nK * static_cast<std::size_t>(base - 1);
  }
  c.verdict = c.analytic_ok && c.vertex_ok.value_or(true) && c.degree_ok.value_or(true);
  return c;
}

EmbeddingDiagnostics embedding_diagnostics(const PalimpsestCode& code, const std::vector<std::size_t>& blocks,
                                           const PathMetric& guest_metric, const EditMetric& host) {
  if (guest_metric.size() != blocks.size()) throw InputError("diagnostics: metric and block list disagree");
  EmbeddingDiagnostics d;
  bool any = false;
  double dil = 0.0, con = 0.0;
  std::size_t longest = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    longest = std::max(longest, code.encode(blocks[i]).size());
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      const auto dg = guest_metric(static_cast<Vertex>(i), static_cast<Vertex>(j));
      if (dg == kUnreachable || dg == 0) continue;
      const double dh = static_cast<double>(distance(host, code.encode(blocks[i]), code.encode(blocks[j])));
      any = true;
      dil = std::max(dil, dh / dg);
      con = dh == 0.0 ? std::numeric_limits<double>::infinity() : std::max(con, dg / dh);
    }
  }
  if (any) {
    d.dilation = dil;
    d.contraction = con;
  }
  d.distortion = d.dilation * d.contraction;
  if (!blocks.empty())
    d.expansion = std::pow(static_cast<double>(code.storage_alphabet_size()), static_cast<double>(longest)) /
                  static_cast<double>(blocks.size());
  return d;
}

unsigned dilation_lower_bound(std::size_t guest_max_deg, std::size_t host_max_deg) {
  if (guest_max_deg < 2 || host_max_deg < 3 || guest_max_deg <= host_max_deg) return 1;
  const std::size_t target = guest_max_deg - 1;
  const std::size_t step = host_max_deg - 1;
  unsigned k = 0;
  for (std::size_t reach = 1; reach < target; reach *= step) ++k;
  return std::max(1u, k);
}

double lipschitz_malleability_bound(double lip, std::size_t n, double delta, double diameter) {
  if (n == 0) throw InputError("bound: n must be at least 1");
  return lip / static_cast<double>(n) * (1.0 + delta * diameter);
}

double lipschitz_asymptotic_bound(double lip, double contraction, double K, std::size_t n, double omega) {
  if (n == 0) throw InputError("bound: n must be at least 1");
  const double nn = static_cast<double>(n);
  return lip / nn + K * lip * contraction / std::pow(nn, 0.5 - omega);
}

}  // namespace malleable
