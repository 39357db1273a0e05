#include <catch2/catch_amalgamated.hpp>

#include "blindep/quotient.hpp"
#include "blindep/refine.hpp"
#include "blindep/seeds.hpp"

using namespace blindep;

namespace {

Graph random_simple_graph(int n, std::uint64_t seed) {
  auto rng = detail::make_engine(seed, {91});
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng() % 2) edges.push_back({u, v, 1.0});
  return Graph::from_edge_list(n, edges);
}

}  // namespace

TEST_CASE("class weight sums equal the product with the indicator", "[refine]") {
  Graph g = Graph::from_edge_list(5, {{0, 1}, {1, 2, 2.0}, {2, 3}, {3, 4}, {4, 0}, {2, 2, 3.0}});
  Partition p = Partition::from_assignment({0, 1, 0, 1, 0});
  Matrix direct = class_weight_sums(g, p);
  Matrix via_product = multiply(g.adjacency(), indicator_matrix(p));
  CHECK(max_abs_diff(direct, via_product) == 0.0);
}

TEST_CASE("three node path: its coarse partition and quotient", "[refine]") {
  Graph p3 = Graph::from_edge_list(3, {{0, 1}, {1, 2}});
  Partition cep = wl_refine(p3);
  CHECK(cep == Partition::from_assignment({0, 1, 0}));
  CHECK(is_equitable(p3, cep, 0.0));

  QuotientMatrix q = quotient(p3, cep);
  REQUIRE(q.values.rows() == 2);
  CHECK(q.values(0, 0) == 0.0);
  CHECK(q.values(0, 1) == 1.0);
  CHECK(q.values(1, 0) == 2.0);
  CHECK(q.values(1, 1) == 0.0);
  CHECK(q.class_sizes == std::vector<int>{2, 1});
}

TEST_CASE("four node path: ends pair with ends, middles with middles", "[refine]") {
  Graph p4 = Graph::from_edge_list(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(wl_refine(p4) == Partition::from_assignment({0, 1, 1, 0}));
}

TEST_CASE("equitability detects the defining property exactly", "[refine]") {
  Graph c4 = Graph::from_edge_list(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(is_equitable(c4, Partition::single_class(4), 0.0));
  CHECK(is_equitable(c4, Partition::from_assignment({0, 1, 0, 1}), 0.0));
  // Grouping adjacent pairs also works on the cycle: every node sees one
  // neighbor of each class.
  CHECK(is_equitable(c4, Partition::from_assignment({0, 0, 1, 1}), 0.0));
  Graph p4 = Graph::from_edge_list(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK_FALSE(is_equitable(p4, Partition::single_class(4), 0.0));
  CHECK_FALSE(is_equitable(p4, Partition::from_assignment({0, 0, 1, 1}), 0.0));
}

TEST_CASE("quotient algebra holds at the refinement fixpoint", "[refine]") {
  for (std::uint64_t t = 0; t < 25; ++t) {
    Graph g = random_simple_graph(4 + static_cast<int>(t % 5), 100 + t);
    Partition cep = wl_refine(g);
    REQUIRE(is_equitable(g, cep, 0.0));
    // A * H == H * Q written without forming either side implicitly.
    Matrix lhs = multiply(g.adjacency(), indicator_matrix(cep));
    Matrix rhs = multiply(indicator_matrix(cep), quotient(g, cep).values);
    CHECK(max_abs_diff(lhs, rhs) == 0.0);
  }
}

TEST_CASE("refinement is monotone and lands on the coarsest fixpoint", "[refine]") {
  for (std::uint64_t t = 0; t < 25; ++t) {
    Graph g = random_simple_graph(5 + static_cast<int>(t % 4), 200 + t);
    auto trace = wl_refine_trace(g, Partition::single_class(g.node_count()));
    REQUIRE(!trace.empty());
    for (std::size_t i = 1; i < trace.size(); ++i) {
      CHECK(refines(trace[i], trace[i - 1]));
      CHECK(trace[i].class_count() >= trace[i - 1].class_count());
    }
    // Every equitable partition refines into the one found, confirming it is
    // the coarsest.
    Partition cep = trace.back();
    for (const Partition& ep : all_equitable_partitions(g)) CHECK(refines(ep, cep));
  }
}

TEST_CASE("starting from a finer partition refines at least as far", "[refine]") {
  Graph p4 = Graph::from_edge_list(4, {{0, 1}, {1, 2}, {2, 3}});
  Partition seeded = wl_refine(p4, Partition::from_assignment({0, 1, 0, 0}));
  CHECK(refines(seeded, wl_refine(p4)));
  CHECK(is_equitable(p4, seeded, 0.0));
}

TEST_CASE("brute force agreement on small random graphs", "[refine]") {
  for (std::uint64_t t = 0; t < 30; ++t) {
    Graph g = random_simple_graph(3 + static_cast<int>(t % 5), 300 + t);
    CHECK(wl_refine(g) == brute_force_cep(g));
  }
}

TEST_CASE("equitable partition enumeration on the four cycle", "[refine]") {
  Graph c4 = Graph::from_edge_list(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto eps = all_equitable_partitions(c4);
  for (const Partition& ep : eps) CHECK(is_equitable(c4, ep, 0.0));
  // The coarsest one is the single class; singletons are always equitable.
  CHECK(std::count(eps.begin(), eps.end(), Partition::single_class(4)) == 1);
  CHECK(std::count(eps.begin(), eps.end(), Partition::singletons(4)) == 1);
  CHECK(std::count(eps.begin(), eps.end(), Partition::from_assignment({0, 1, 0, 1})) == 1);
}

TEST_CASE("matrix refinement splits on scaled columns like the graph walk", "[refine]") {
  Graph g = random_simple_graph(7, 555);
  CHECK(matrix_cep(g.adjacency()) == wl_refine(g));
}

TEST_CASE("weighted graphs refine on weight sums", "[refine]") {
  // Triangle with one heavy edge plus a pendant. Weighted degrees tie all
  // three triangle nodes at 3, so only the class weight sums separate node 2
  // from the heavy pair, which stays together by symmetry.
  Graph g = Graph::from_edge_list(4, {{0, 1, 2.0}, {1, 2}, {2, 0}, {2, 3}});
  Partition cep = wl_refine(g);
  CHECK(is_equitable(g, cep, 0.0));
  CHECK(cep == Partition::from_assignment({0, 0, 1, 2}));
}
