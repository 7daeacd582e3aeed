#include <doctest.h>

#include <cmath>
#include <random>

#include "malleable/block_typicality.hpp"
#include "malleable/blocks.hpp"
#include "malleable/code_schemes.hpp"
#include "malleable/errors.hpp"
#include "test_support.hpp"

using namespace malleable;
using testing_support::load;

namespace {

TypicalityConfig config(std::size_t n, std::optional<double> delta) {
  TypicalityConfig cfg;
  cfg.block_n = n;
  cfg.delta = delta;
  return cfg;
}

double binom(std::size_t n, std::size_t k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

// L1 deviation of the empirical joint type of (x, y) from the source, computed letter by letter.
double joint_deviation(const JointSource& src, std::size_t x, std::size_t y, std::size_t n) {
  const std::size_t q = src.size();
  const auto lx = block_letters(x, q, n), ly = block_letters(y, q, n);
  std::vector<double> c(q * q, 0.0);
  for (std::size_t i = 0; i < n; ++i) c[lx[i] * q + ly[i]] += 1.0;
  double dev = 0;
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) {
      const double p = src(a, b).to_double();
      if (p == 0.0 && c[a * q + b] > 0) return 1e9;
      dev += std::abs(c[a * q + b] / static_cast<double>(n) - p);
    }
  return dev;
}

}  // namespace

TEST_CASE("delta schedule") {
  CHECK(resolve_delta(config(12, std::nullopt)) == doctest::Approx(std::pow(12.0, -0.4)));
  CHECK(resolve_delta(config(12, 0.2)) == 0.2);
  TypicalityConfig c = config(16, std::nullopt);
  c.c = 2;
  c.omega = 0.25;
  CHECK(resolve_delta(c) == doctest::Approx(1.0));
  c.omega = 0;
  CHECK_THROWS_AS(resolve_delta(c), InputError);
}

TEST_CASE("fair coin typical sets") {
  const auto half = Distribution::uniform(2);
  CHECK(typical_set(half, config(4, 0.0)).size() == 6);
  CHECK(typical_set(half, config(4, 2.0)).size() == 16);
  CHECK(typical_set(half, config(5, 0.0)).empty());
  // |k/5 - 1/2| * 2 <= 0.2 keeps k = 2, 3.
  CHECK(typical_set(half, config(5, 0.2)).size() == 20);
  for (std::size_t b : typical_set(half, config(6, 0.0))) {
    const auto c = letter_counts(b, 2, 6);
    CHECK(c[0] == 3);
    CHECK(c[1] == 3);
  }
  const auto s = typical_mass(half, config(4, 0.0));
  CHECK(s.count == 6);
  CHECK(s.mass == Scalar(3, 8));
  CHECK(s.types == 1);
}

TEST_CASE("zero-probability letters are never typical") {
  const Distribution d({Scalar(1), Scalar(0)});
  const auto t = typical_set(d, config(5, 2.0));
  REQUIRE(t.size() == 1);
  CHECK(letter_counts(t[0], 2, 5)[1] == 0);
}

TEST_CASE("typical mass matches the binomial sum") {
  for (double p : {0.5, 0.3, 0.11}) {
    const auto d = Distribution::from_doubles({p, 1 - p});
    for (std::size_t n = 1; n <= 20; ++n) {
      const auto cfg = config(n, std::nullopt);
      const double delta = resolve_delta(cfg);
      double count = 0, mass = 0;
      for (std::size_t k = 0; k <= n; ++k) {
        if (2 * std::abs(static_cast<double>(k) / n - p) > delta + 1e-12) continue;
        count += binom(n, k);
        mass += binom(n, k) * std::pow(p, k) * std::pow(1 - p, n - k);
      }
      const auto s = typical_mass(d, cfg);
      CHECK(static_cast<double>(s.count) == doctest::Approx(count));
      CHECK(s.mass.to_double() == doctest::Approx(mass));
      if (n <= 16) CHECK(static_cast<double>(typical_set(d, cfg).size()) == doctest::Approx(count));
      if (p == 0.5) CHECK(s.mass.to_double() > 1 - delta);
    }
  }
}

TEST_CASE("joint typicality against direct enumeration") {
  const auto bsc = load("bsc.json");
  const std::size_t n = 6;
  const auto cfg = config(n, 0.5);
  const double delta = 0.5;
  std::size_t count = 0;
  double mass = 0;
  for (std::size_t x = 0; x < 64; ++x)
    for (std::size_t y = 0; y < 64; ++y) {
      const bool typ = joint_deviation(bsc, x, y, n) <= delta + 1e-12;
      CHECK(jointly_typical(bsc, x, y, n, delta) == typ);
      if (typ) {
        ++count;
        mass += block_joint(bsc, x, y, n).to_double();
      }
    }
  const auto jm = joint_typical_mass(bsc, cfg);
  CHECK(static_cast<double>(jm.count) == doctest::Approx(static_cast<double>(count)));
  CHECK(jm.mass.to_double() == doctest::Approx(mass));

  const auto tg = typicality_graph(bsc, cfg);
  CHECK(tg.report.t_xy == count);
  CHECK(tg.report.t_xy_mass.to_double() == doctest::Approx(mass));
  CHECK(tg.report.consistent);

  // S_X, the conditional sets, and the vertex set.
  const auto sx = connected_typical_set(bsc, cfg);
  CHECK(sx.size() == tg.report.s_x);
  for (std::size_t x : sx) {
    const auto row = conditional_typical_set(bsc, x, cfg);
    CHECK_FALSE(row.empty());
    for (std::size_t y : row) CHECK(jointly_typical(bsc, x, y, n, delta));
  }
  CHECK(connected_typical_set(bsc, cfg, true).size() == tg.report.s_y);
}

TEST_CASE("identical letters give isolated vertices") {
  const auto same = load("identical.json");
  const auto tg = typicality_graph(same, config(10, 0.1));
  const auto& r = tg.report;
  CHECK(r.t_x == 252);
  CHECK(r.t_xy == 252);
  CHECK(r.vertices == 252);
  CHECK(r.edges == 0);
  CHECK(r.self_loops == 252);
  CHECK(r.degree.min == 1);
  CHECK(r.degree.max == 1);
  CHECK(r.components == 252);
  CHECK(r.diameter == 0);
  CHECK(r.same_vertex_sets);
  CHECK(r.h_y_given_x == doctest::Approx(0.0));
}

TEST_CASE("consistency and symmetry on random sources") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto src = testing_support::random_rational_source(rng, 3, 2);
    for (std::size_t n : {2u, 4u}) {
      const auto tg = typicality_graph(src, config(n, std::nullopt));
      CHECK(tg.report.consistent);
      CHECK(tg.report.s_x <= tg.report.t_x);
      CHECK(tg.report.vertices <= tg.report.s_x + tg.report.s_y);
      for (const auto& e : tg.graph.edges()) CHECK(e.weight.is_positive());
    }
  }
  const auto tw = load("typewriter.json");
  const auto r = typicality_graph(tw, config(3, std::nullopt)).report;
  CHECK(r.same_vertex_sets);
  CHECK(r.s_x == r.s_y);
}

TEST_CASE("threads do not change the graph") {
  const auto bsc = load("bsc.json");
  auto cfg = config(9, std::nullopt);
  const auto a = typicality_graph(bsc, cfg);
  cfg.threads = 4;
  const auto b = typicality_graph(bsc, cfg);
  CHECK(to_json(a.report).dump() == to_json(b.report).dump());
  CHECK(a.graph.edge_count() == b.graph.edge_count());
}

TEST_CASE("block cap") {
  auto cfg = config(30, std::nullopt);
  CHECK_THROWS_AS(typicality_graph(load("bsc.json"), cfg), ResourceError);
  CHECK_THROWS_AS(typical_set(Distribution::uniform(2), cfg), ResourceError);
}

TEST_CASE("realized slack") {
  CHECK(realized_slack(16, 1.0, 4, 0.0) == 0.0);
  CHECK(realized_slack(32, 1.0, 4, 0.0) == doctest::Approx(0.25));
  CHECK(realized_slack(4, 1.0, 4, 0.0) == 0.0);
  CHECK(realized_slack(4, 1.0, 4, 1.0) == doctest::Approx(0.5));
  CHECK(realized_slack(8, 1.0, 4, 0.5) == doctest::Approx(0.0));
  CHECK(std::isinf(realized_slack(0, 1.0, 4, 1.0)));
}

TEST_CASE("slack window brackets the counts") {
  const auto bsc = load("bsc.json");
  const auto r = typicality_graph(bsc, config(8, std::nullopt)).report;
  const double n = 8, keep = 1 - r.delta;
  const auto inside = [&](double size, double h, double s) {
    return keep * std::exp2(n * (h - s)) <= size * (1 + 1e-9) && size <= std::exp2(n * (h + s)) * (1 + 1e-9);
  };
  CHECK(inside(static_cast<double>(r.t_x), r.h_x, r.eta_x));
  CHECK(inside(static_cast<double>(r.t_y), r.h_y, r.eta_y));
  CHECK(inside(static_cast<double>(r.t_xy), r.h_xy, r.lambda));
  CHECK(static_cast<double>(r.degree.max) <= std::exp2(n * (r.h_y_given_x + r.nu)) * (1 + 1e-9));
}

TEST_CASE("cost check") {
  const auto same = load("identical.json");
  CHECK(exponential_cost_check(same, config(5, std::nullopt), 5).verdict);
  CHECK_FALSE(exponential_cost_check(same, config(5, std::nullopt), 4).verdict);

  const auto tw = load("typewriter.json");
  auto c = exponential_cost_check(tw, config(1, std::nullopt), 3);
  CHECK(c.required == doctest::Approx(3.0));
  CHECK(c.verdict);
  CHECK_FALSE(exponential_cost_check(tw, config(1, std::nullopt), 2).verdict);

  const auto bsc = load("bsc.json");
  const auto cfg = config(10, std::nullopt);
  const auto rep = typicality_graph(bsc, cfg).report;
  c = exponential_cost_check(bsc, cfg, 10, &rep);
  const double hyx = -(0.89 * std::log2(0.89) + 0.11 * std::log2(0.11));
  CHECK(c.required == doctest::Approx(std::exp2(10 * hyx)));
  CHECK_FALSE(c.analytic_ok);
  REQUIRE(c.vertex_ok);
  CHECK(*c.vertex_ok);
  REQUIRE(c.degree_ok);
  CHECK(*c.degree_ok == (rep.max_simple_degree <= 10));
  CHECK_FALSE(c.verdict);
  CHECK(exponential_cost_check(bsc, cfg, 40, &rep).analytic_ok);
}

TEST_CASE("dilation lower bound and the malleability bound") {
  CHECK(dilation_lower_bound(10, 4) == 2);
  CHECK(dilation_lower_bound(5, 5) == 1);
  CHECK(dilation_lower_bound(82, 4) == 4);
  CHECK(dilation_lower_bound(83, 4) == 5);
  CHECK(dilation_lower_bound(1, 2) == 1);
  CHECK(lipschitz_malleability_bound(1, 1, 0, 5) == 1.0);
  CHECK(lipschitz_malleability_bound(1, 2, 0.5, 4) == 1.5);
  CHECK_THROWS_AS(lipschitz_malleability_bound(1, 0, 0, 0), InputError);
  CHECK(lipschitz_asymptotic_bound(2, 1, 1, 4, 0.0) == doctest::Approx(0.5 + 1.0));
}

TEST_CASE("embedding diagnostics") {
  // Identity code on binary triples over the Hamming graph of the blocks.
  std::vector<std::vector<Scalar>> j{{Scalar(1, 2), Scalar(0)}, {Scalar(0), Scalar(1, 2)}};
  const JointSource same({"0", "1"}, j, 2);
  const auto id = identity_code(same, 3);
  LabeledGraph ham;
  for (std::size_t b = 0; b < 8; ++b) ham.add_vertex();
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = a + 1; b < 8; ++b)
      if (std::popcount(a ^ b) == 1) ham.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
  std::vector<std::size_t> all{0, 1, 2, 3, 4, 5, 6, 7};
  auto d = embedding_diagnostics(id, all, path_metric(ham), EditMetric{MetricKind::hamming, 2});
  CHECK(d.dilation == 1.0);
  CHECK(d.contraction == 1.0);
  CHECK(d.distortion == 1.0);
  CHECK(d.expansion == 1.0);

  const auto tw = load("typewriter.json");
  const auto cycle = path_metric(adjacency_graph(tw, 1));
  d = embedding_diagnostics(ppm_code(tw, 1), all, cycle, EditMetric{MetricKind::hamming, 2});
  CHECK(d.dilation == 2.0);
  CHECK(d.contraction == 2.0);
  CHECK(d.expansion == 32.0);

  const auto g = gray_code(3);
  PalimpsestCode gray(CodeKind::custom, 1, 8, 2);
  for (std::size_t b = 0; b < 8; ++b) gray.set(b, g[b]);
  d = embedding_diagnostics(gray, all, cycle, EditMetric{MetricKind::hamming, 2});
  CHECK(d.dilation == 1.0);
  // Letters three steps apart on the cycle differ in a single bit.
  CHECK(d.contraction == 3.0);
}
