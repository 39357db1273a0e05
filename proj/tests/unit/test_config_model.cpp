#include <catch2/catch_amalgamated.hpp>

#include "blindep/config_model.hpp"
#include "blindep/quotient.hpp"
#include "blindep/refine.hpp"

using namespace blindep;

namespace {

PlantedSpec two_class_spec() {
  PlantedSpec spec;
  spec.class_sizes = {6, 4};
  spec.quotient_degrees = {{1, 2}, {3, 1}};  // 6*2 == 4*3 across the cut
  return spec;
}

}  // namespace

TEST_CASE("degree plans are checked for realizability", "[generator]") {
  CHECK_NOTHROW(two_class_spec().validate());

  PlantedSpec spec;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = two_class_spec();
  spec.quotient_degrees = {{1, 2}};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = two_class_spec();
  spec.quotient_degrees = {{1, 2}, {3, 1, 0}};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = two_class_spec();
  spec.class_sizes = {6, 0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = two_class_spec();
  spec.quotient_degrees[0][1] = -1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  // Within-class degree needs headroom and an even stub total.
  spec = two_class_spec();
  spec.quotient_degrees[1][1] = 4;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.quotient_degrees[1][1] = 3;  // 4 nodes * 3 stubs is even, still fine
  CHECK_NOTHROW(spec.validate());

  PlantedSpec odd;
  odd.class_sizes = {5};
  odd.quotient_degrees = {{3}};  // 5 * 3 stubs cannot be matched
  CHECK_THROWS_AS(odd.validate(), std::invalid_argument);

  // Cross-class degrees must exchange the same stub count in both directions.
  spec = two_class_spec();
  spec.quotient_degrees[1][0] = 2;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = two_class_spec();
  spec.quotient_degrees[0][1] = 5;  // exceeds the other class size
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("sampled graphs realize the plan exactly", "[generator]") {
  const PlantedSpec spec = two_class_spec();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PlantedGraph pg = sample_graph(spec, GenConfig{}, seed);
    REQUIRE(pg.graph.node_count() == 10);
    CHECK(pg.graph.is_simple());
    CHECK(pg.partition == Partition::from_assignment({0, 0, 0, 0, 0, 0, 1, 1, 1, 1}));
    CHECK(is_equitable(pg.graph, pg.partition, 0.0));

    // Recount every node's edges into each class straight from the adjacency.
    const Matrix a = pg.graph.adjacency();
    for (int v = 0; v < 10; ++v) {
      int into[2] = {0, 0};
      for (int u = 0; u < 10; ++u)
        if (a(v, u) != 0.0) ++into[pg.partition.class_of(u)];
      const int cv = pg.partition.class_of(v);
      CHECK(into[0] == spec.quotient_degrees[cv][0]);
      CHECK(into[1] == spec.quotient_degrees[cv][1]);
    }
  }
}

TEST_CASE("graph sampling is deterministic in the seed", "[generator]") {
  const PlantedSpec spec = two_class_spec();
  PlantedGraph a = sample_graph(spec, GenConfig{}, 5);
  PlantedGraph b = sample_graph(spec, GenConfig{}, 5);
  CHECK(max_abs_diff(a.graph.adjacency(), b.graph.adjacency()) == 0.0);
  CHECK(a.block_redraws == b.block_redraws);

  PlantedGraph c = sample_graph(spec, GenConfig{}, 6);
  CHECK(max_abs_diff(a.graph.adjacency(), c.graph.adjacency()) > 0.0);
}

TEST_CASE("a single class plan produces a regular graph", "[generator]") {
  PlantedSpec spec;
  spec.class_sizes = {8};
  spec.quotient_degrees = {{3}};
  PlantedGraph pg = sample_graph(spec, GenConfig{}, 2);
  CHECK(pg.graph.is_simple());
  const Matrix a = pg.graph.adjacency();
  for (int v = 0; v < 8; ++v) {
    double deg = 0.0;
    for (int u = 0; u < 8; ++u) deg += a(v, u);
    CHECK(deg == 3.0);
  }
}

TEST_CASE("degree plan sampling respects every feasibility rule", "[generator]") {
  const std::vector<int> sizes = {10, 5, 5};
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto d = sample_quotient_degrees(sizes, 4, seed);
    REQUIRE(d.size() == 3);

    PlantedSpec spec;
    spec.class_sizes = sizes;
    spec.quotient_degrees = d;
    CHECK_NOTHROW(spec.validate());
    for (const auto& row : d)
      for (int v : row) {
        CHECK(v >= 0);
        CHECK(v <= 4);
      }
    CHECK_FALSE(d[0] == d[1]);
    CHECK_FALSE(d[0] == d[2]);
    CHECK_FALSE(d[1] == d[2]);
  }

  auto first = sample_quotient_degrees(sizes, 4, 7);
  auto second = sample_quotient_degrees(sizes, 4, 7);
  CHECK(first == second);

  CHECK_THROWS_AS(sample_quotient_degrees({}, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_quotient_degrees(sizes, -1, 1), std::invalid_argument);
}

TEST_CASE("sampled plans drive the generator end to end", "[generator]") {
  for (std::uint64_t seed = 100; seed < 108; ++seed) {
    std::vector<int> sizes = {6, 6, 6};
    PlantedSpec spec;
    spec.class_sizes = sizes;
    spec.quotient_degrees = sample_quotient_degrees(sizes, 3, seed);
    PlantedGraph pg = sample_graph(spec, GenConfig{}, seed);
    CHECK(pg.graph.is_simple());
    CHECK(is_equitable(pg.graph, pg.partition, 0.0));
    // The planted classes are equitable by construction; refinement from a
    // blank start can only land on them or on something strictly coarser.
    CHECK(refines(pg.partition, wl_refine(pg.graph)));
  }
}
