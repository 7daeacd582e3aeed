#include <doctest.h>

#include <random>

#include "malleable/embedding.hpp"
#include "malleable/errors.hpp"
#include "malleable/graph_core.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace malleable;
using testing_support::load;

namespace {

LabeledGraph labeled_path(const std::vector<const char*>& words) {
  LabeledGraph g;
  for (auto w : words) g.add_vertex(parse_storage_string(w, 2), w);
  for (Vertex v = 0; v + 1 < g.vertex_count(); ++v) g.add_edge(v, v + 1);
  return g;
}

}  // namespace

TEST_CASE("exact embeddings of the worked examples") {
  const auto tw = adjacency_graph(load("typewriter.json"), 1);
  const auto ep = adjacency_graph(load("editprocess2.json"), 1);
  auto a = exact_embed(tw, hypercube(3), false);
  REQUIRE(a);
  CHECK(verify_embedding(tw, hypercube(3), *a, false));
  CHECK(a->deleted_edges.empty());
  CHECK(a->cost == Scalar(0));
  CHECK_FALSE(exact_embed(ep, hypercube(3), false));
  auto b = exact_embed(ep, hypercube(4), false);
  REQUIRE(b);
  CHECK(verify_embedding(ep, hypercube(4), *b, false));

  const auto path = labeled_path({"0", "10", "110", "111"});
  const auto lev = levenshtein_graph(2, 3);
  auto c = exact_embed(path, lev, true);
  REQUIRE(c);
  CHECK(verify_embedding(path, lev, *c, true));
  for (Vertex v = 0; v < 4; ++v) CHECK(lev.label(c->vertex_map[v]) == path.label(v));
}

TEST_CASE("attribute mismatch blocks an otherwise possible embedding") {
  const auto path = labeled_path({"0", "111"});
  CHECK_FALSE(exact_embed(path, levenshtein_graph(2, 3), true));
  CHECK(exact_embed(path, levenshtein_graph(2, 3), false));
}

TEST_CASE("tolerant embedding of the second editing process") {
  const auto src = load("editprocess2.json");
  const auto guest = adjacency_graph(src, 1);
  const auto mass = PairMass::from_source(src, 1);
  CHECK(mass.total() == Scalar(9, 20));

  auto r = tolerant_embed(guest, hypercube(3), mass);
  REQUIRE(r);
  CHECK(r->proven_optimal);
  CHECK(r->cost == Scalar(1, 40));
  const std::vector<std::pair<Vertex, Vertex>> want{{0, 2}, {5, 7}};
  CHECK(r->deleted_edges == want);
  CHECK(verify_embedding(guest, hypercube(3), *r, false));
  CHECK(subgraph_distance(guest, hypercube(3), mass) == Scalar(1, 40));

  // Deleting those two edges strands G and J, so the closeness-vitality
  // form of the cost is unbounded here.
  CHECK_FALSE(deletion_cost(guest, r->deleted_edges, mass).has_value());

  auto r4 = tolerant_embed(guest, hypercube(4), mass);
  REQUIRE(r4);
  CHECK(r4->cost == Scalar(0));
  CHECK(r4->deleted_edges.empty());
}

TEST_CASE("infeasible and degenerate hosts") {
  const auto guest = hypercube(3);
  const auto mass = PairMass::from_edge_weights(guest);
  CHECK_FALSE(tolerant_embed(guest, hypercube(2), mass));
  CHECK_THROWS_AS(subgraph_distance(guest, hypercube(2), mass), InfeasibleError);
  // A disconnected host cannot carry a positive-mass pair across components.
  LabeledGraph host(8);
  LabeledGraph pair(2);
  pair.add_edge(0, 1);
  CHECK_FALSE(tolerant_embed(pair, host, PairMass::from_edge_weights(pair)));
}

TEST_CASE("search agrees with brute force on random small instances") {
  std::mt19937_64 rng(31);
  const auto q3 = hypercube(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 3;
    const auto guest = oracle::random_graph(rng, n, 0.6);
    const LabeledGraph host = trial % 2 ? q3 : oracle::random_graph(rng, 7, 0.5);
    const auto mass = oracle::random_mass(rng, guest);
    const auto order = canonical_order(guest);
    const auto ref = oracle::tolerant(guest, host, mass, order);
    const auto got = tolerant_embed(guest, host, mass);
    REQUIRE(got.has_value() == ref.found);
    if (!ref.found) continue;
    CHECK(got->cost.rational() == ref.cost);
    CHECK(got->cost >= Scalar(0));
    CHECK(got->deleted_edges == ref.deleted);
    CHECK(got->vertex_map == ref.map);
    CHECK(verify_embedding(guest, host, *got, false));

    const auto ex = exact_embed(guest, host, false);
    const auto exref = oracle::exact(guest, host, order);
    REQUIRE(ex.has_value() == exref.has_value());
    if (ex) CHECK(ex->vertex_map == *exref);
  }
}

TEST_CASE("zero cost exactly when the guest embeds (mass on guest edges only)") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto guest = oracle::random_graph(rng, 5, 0.5);
    const auto host = oracle::random_graph(rng, 8, 0.45);
    const auto r = tolerant_embed(guest, host, PairMass::from_edge_weights(guest));
    const bool embeds = exact_embed(guest, host, false).has_value();
    if (!r) {
      CHECK_FALSE(embeds);
      continue;
    }
    CHECK(r->cost >= Scalar(0));
    CHECK((r->cost == Scalar(0)) == embeds);
    // With mass only on guest edges, host paths never cost more than the
    // detours left in the guest after deletion.
    const auto mass = PairMass::from_edge_weights(guest);
    if (auto del = deletion_cost(guest, r->deleted_edges, mass)) CHECK(*del >= r->cost);
  }
}

TEST_CASE("parallel search returns the sequential witness") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 15; ++trial) {
    const auto guest = oracle::random_graph(rng, 6, 0.5);
    const auto host = oracle::random_graph(rng, 10, 0.4);
    const auto mass = oracle::random_mass(rng, guest);
    const auto seq = tolerant_embed(guest, host, mass, false, SearchOptions{0, 1});
    const auto par = tolerant_embed(guest, host, mass, false, SearchOptions{0, 4});
    REQUIRE(seq.has_value() == par.has_value());
    if (!seq) continue;
    CHECK(seq->cost == par->cost);
    CHECK(seq->deleted_edges == par->deleted_edges);
    CHECK(seq->vertex_map == par->vertex_map);
  }
}

TEST_CASE("attributed embedding implies plain embedding") {
  std::mt19937_64 rng(61);
  const auto lev = levenshtein_graph(2, 3);
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(lev.vertex_count() - 1));
  int attributed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    // Labels from distinct random host vertices; edges along a random subset of host edges among them.
    std::vector<Vertex> chosen;
    while (chosen.size() < 4) {
      Vertex h = pick(rng);
      if (std::find(chosen.begin(), chosen.end(), h) == chosen.end()) chosen.push_back(h);
    }
    LabeledGraph guest;
    for (Vertex h : chosen) guest.add_vertex(lev.label(h));
    std::bernoulli_distribution coin(0.7);
    for (Vertex u = 0; u < 4; ++u)
      for (Vertex v = u + 1; v < 4; ++v)
        if (coin(rng)) guest.add_edge(u, v);
    if (exact_embed(guest, lev, true)) {
      ++attributed;
      CHECK(exact_embed(guest, lev, false).has_value());
    }
  }
  CHECK(attributed > 0);
}

TEST_CASE("node budget") {
  const auto src = load("editprocess2.json");
  const auto guest = adjacency_graph(src, 1);
  const auto mass = PairMass::from_source(src, 1);
  auto r = tolerant_embed(guest, hypercube(3), mass, false, SearchOptions{20, 1});
  REQUIRE(r);
  CHECK_FALSE(r->proven_optimal);
  CHECK(r->cost >= Scalar(1, 40));
  CHECK(verify_embedding(guest, hypercube(3), *r, false));
  CHECK_THROWS_AS(exact_embed(hypercube(4), hypercube(5), false, SearchOptions{2, 1}), ResourceError);
}

TEST_CASE("witness checker rejects bad maps") {
  const auto guest = hypercube(2);
  EmbeddingResult r;
  r.vertex_map = {0, 1, 3, 2};
  CHECK_FALSE(verify_embedding(guest, hypercube(2), r, false));
  r.vertex_map = {0, 1, 2, 3};
  CHECK(verify_embedding(guest, hypercube(2), r, false));
  r.vertex_map = {0, 0, 2, 3};
  CHECK_FALSE(verify_embedding(guest, hypercube(2), r, false));
}
