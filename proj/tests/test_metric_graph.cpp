#include <gtest/gtest.h>

#include <random>

#include "graphctl/graph_io.hpp"
#include "graphctl/metric_graph.hpp"
#include "graphctl/scenarios.hpp"
#include "support.hpp"

using namespace graphctl;

TEST(MetricGraph, IncidencesCountLoopsTwice) {
  MetricGraph g({{0, BoundaryCondition::Interior}, {1, BoundaryCondition::Dirichlet}},
                {{0, 0, 0, 1.0, {}}, {1, 0, 1, 2.0, {}}});
  EXPECT_EQ(g.degree(g.vertex_index(0)), 3);
  EXPECT_TRUE(g.is_exterior(g.vertex_index(1)));
  EXPECT_DOUBLE_EQ(g.total_length(), 3.0);
  EXPECT_TRUE(validate(g, {}).empty());
}

TEST(MetricGraph, ValidateReportsEveryProblem) {
  MetricGraph g({{0, BoundaryCondition::Dirichlet}, {1, BoundaryCondition::Interior}, {2, BoundaryCondition::Interior}},
                {{0, 0, 1, -1.0, {}}, {1, 0, 1, 1.0, {}}});
  ControlSet omega;
  omega.add(1, 0.5, 3.0);
  omega.add(7, 0.0, 1.0);
  const auto diags = validate(g, omega);
  // Dirichlet on degree 2, non-positive length, isolated vertex, interval past the end, missing edge.
  EXPECT_EQ(diags.size(), 5u);
  EXPECT_THROW(require_valid(g, omega), ValidationError);
}

TEST(ControlSet, MergesOverlapsAndTouchingIntervals) {
  ControlSet omega;
  omega.add(3, 0.5, 0.7);
  omega.add(3, 0.1, 0.3);
  omega.add(3, 0.3, 0.4);
  omega.add(3, 0.6, 0.9);
  const auto& iv = omega.on(3);
  ASSERT_EQ(iv.size(), 2u);
  EXPECT_DOUBLE_EQ(iv[0].a, 0.1);
  EXPECT_DOUBLE_EQ(iv[0].b, 0.4);
  EXPECT_DOUBLE_EQ(iv[1].a, 0.5);
  EXPECT_DOUBLE_EQ(iv[1].b, 0.9);
  EXPECT_NEAR(omega.measure_on(3), 0.7, 1e-15);
  EXPECT_FALSE(omega.contains(3, 0.45));
  EXPECT_TRUE(omega.on(4).empty());
}

TEST(Normalize, SplitsAtIntervalEnds) {
  const auto sc = interval_scenario(1.0, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet,
                                    Interval{0.2, 0.4});
  const auto ng = normalize(sc.graph, sc.omega);
  ASSERT_EQ(ng.graph.num_edges(), 3u);
  EXPECT_EQ(ng.controlled, (std::vector<bool>{false, true, false}));
  EXPECT_NEAR(ng.graph.total_length(), 1.0, 1e-14);
  int boundary = 0;
  for (std::size_t v = 0; v < ng.graph.num_vertices(); ++v) {
    if (ng.tag(static_cast<int>(v)) == VertexTag::OmegaBoundary) ++boundary;
  }
  EXPECT_EQ(boundary, 2);

  const EdgePoint p = ng.map.to_normalized({0, 0.3});
  EXPECT_TRUE(ng.is_controlled(ng.graph.edge_index(p.edge)));
  const EdgePoint back = ng.map.to_original(p);
  EXPECT_EQ(back.edge, 0);
  EXPECT_NEAR(back.x, 0.3, 1e-15);
}

TEST(Normalize, RandomGraphsPreserveLengthAndControlMeasure) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rc = fixtures::random_graph(rng);
    const auto ng = normalize(rc.graph, rc.omega);
    EXPECT_NEAR(ng.graph.total_length(), rc.graph.total_length(), 1e-12);
    double measure = 0.0;
    double normalized_measure = 0.0;
    for (const auto& e : rc.graph.edges()) measure += rc.omega.measure_on(e.id);
    for (std::size_t i = 0; i < ng.graph.num_edges(); ++i) {
      if (ng.controlled[i]) normalized_measure += ng.graph.edge(static_cast<int>(i)).length;
    }
    EXPECT_NEAR(measure, normalized_measure, 1e-12);
    EXPECT_TRUE(validate(ng.graph, ng.omega).empty());
  }
}

TEST(UncontrolledSubgraph, ComponentsOfTheBotGraph) {
  const auto sc = bot_graph(3, 2, 1);
  const auto ng = normalize(sc.graph, sc.omega);
  const auto comps = uncontrolled_subgraph(ng);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0].graph.num_edges(), 3u);
  EXPECT_EQ(comps[0].count(VertexTag::OmegaBoundary), 3);
  EXPECT_EQ(comps[0].count(VertexTag::WasExterior), 0);
}

TEST(GraphIo, CatalogRoundTrip) {
  for (const auto& sc : scenario_catalog()) {
    const std::string text = to_graph_json(sc.graph, sc.omega);
    const auto in = parse_graph_json(text);
    ASSERT_EQ(in.graph.num_edges(), sc.graph.num_edges()) << sc.name;
    for (std::size_t i = 0; i < sc.graph.num_edges(); ++i) {
      const auto& a = sc.graph.edge(static_cast<int>(i));
      const auto& b = in.graph.edge(static_cast<int>(i));
      EXPECT_EQ(a.id, b.id);
      EXPECT_EQ(a.tail, b.tail);
      EXPECT_EQ(a.head, b.head);
      EXPECT_DOUBLE_EQ(a.length, b.length) << sc.name;
      EXPECT_EQ(sc.omega.on(a.id).size(), in.omega.on(a.id).size());
    }
    EXPECT_EQ(to_graph_json(in.graph, in.omega), text) << sc.name;
  }
}

TEST(GraphIo, MalformedInputIsAValidationError) {
  EXPECT_THROW(parse_graph_json("{"), ValidationError);
  EXPECT_THROW(parse_graph_json(R"({"vertices":[],"edges":[]})"), ValidationError);
  EXPECT_THROW(parse_graph_json(
                   R"({"vertices":[{"id":0,"bc":"dirichlet"},{"id":1,"bc":"dirichlet"}],
                       "edges":[{"id":0,"tail":0,"head":1,"length":{"expr":"sqrt(-"}}]})"),
               ValidationError);
}

TEST(GraphIo, DigestIsStable) {
  EXPECT_EQ(digest(""), "cbf29ce484222325");
  EXPECT_NE(digest("a"), digest("b"));
}
