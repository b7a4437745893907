#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qg/graph.hpp"

using namespace qg;

namespace {

const char* kTriangle = R"({
  "vertices": [
    {"id": "a", "condition": "neumann"},
    {"id": "b", "condition": "neumann"},
    {"id": "c", "condition": "dirichlet"}
  ],
  "edges": [
    {"id": "ab", "from": "a", "to": "b", "length": 1.0},
    {"id": "bc", "from": "b", "to": "c", "length": 2.0},
    {"id": "ca", "from": "c", "to": "a", "length": 1.5}
  ],
  "leads": [{"id": "l0", "vertex": "a"}]
})";

}  // namespace

TEST_CASE("json round trip preserves the graph") {
  ExtendedGraph g = parse_graph(kTriangle);
  CHECK(g.graph().vertices().size() == 3);
  CHECK(g.graph().edges().size() == 3);
  CHECK(g.leads().size() == 1);
  CHECK(g.graph().total_length() == doctest::Approx(4.5));
  ExtendedGraph h = parse_graph(graph_to_json(g));
  CHECK(g == h);
}

TEST_CASE("unknown keys are rejected everywhere") {
  CHECK_THROWS_AS(parse_graph(R"({"vertices": [], "edges": [], "extra": 1})"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_graph(
          R"({"vertices": [{"id": "a", "pos": 0}], "edges": []})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_graph(R"({"vertices": [{"id": "a"}, {"id": "b"}],
        "edges": [{"id": "e", "from": "a", "to": "b", "length": 1, "w": 2}]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_graph(R"({"vertices": [{"id": "a"}, {"id": "b"}],
        "edges": [{"id": "e", "from": "a", "to": "b", "length": 1}],
        "leads": [{"id": "l", "vertex": "a", "x": 0}]})"),
      ParseError);
}

TEST_CASE("structural validation") {
  SUBCASE("duplicate vertex id") {
    CHECK_THROWS_AS(
        MetricGraph({{"a", {}}, {"a", {}}}, {{"e", "a", "a", 1.0}}),
        ValidationError);
  }
  SUBCASE("edge to unknown vertex") {
    CHECK_THROWS_AS(MetricGraph({{"a", {}}}, {{"e", "a", "zz", 1.0}}),
                    ValidationError);
  }
  SUBCASE("nonpositive length") {
    CHECK_THROWS_AS(MetricGraph({{"a", {}}, {"b", {}}}, {{"e", "a", "b", 0.0}}),
                    ValidationError);
    CHECK_THROWS_AS(
        MetricGraph({{"a", {}}, {"b", {}}}, {{"e", "a", "b", -2.0}}),
        ValidationError);
  }
  SUBCASE("lead on dirichlet vertex") {
    MetricGraph g({{"a", VertexCondition::Dirichlet}, {"b", {}}},
                  {{"e", "a", "b", 1.0}});
    CHECK_THROWS_AS(ExtendedGraph(g, {{"l", "a"}}), ValidationError);
  }
  SUBCASE("lead on unknown vertex") {
    MetricGraph g({{"a", {}}, {"b", {}}}, {{"e", "a", "b", 1.0}});
    CHECK_THROWS_AS(ExtendedGraph(g, {{"l", "zz"}}), ValidationError);
  }
}

TEST_CASE("degree helpers") {
  ExtendedGraph g = parse_graph(kTriangle);
  const MetricGraph& mg = g.graph();
  CHECK(mg.degree(mg.vertex_index("a")) == 2);
  CHECK(mg.connected());
  CHECK_FALSE(mg.all_neumann());
  CHECK(g.lead_count_at(mg.vertex_index("a")) == 1);
  CHECK(g.lead_count_at(mg.vertex_index("b")) == 0);
}

TEST_CASE("self loop counts twice in the degree") {
  MetricGraph g({{"a", {}}}, {{"loop", "a", "a", 1.0}});
  CHECK(g.degree(0) == 2);
  CHECK(g.connected());
}

TEST_CASE("attaching a lead at a low-degree vertex only warns on direct "
          "construction") {
  MetricGraph g({{"a", {}}, {"b", VertexCondition::Dirichlet}},
                {{"e", "a", "b", 1.0}});
  ExtendedGraph eg(g, {{"l", "a"}});  // marked degree 2: fine, no warning
  CHECK(eg.warnings().empty());
  MetricGraph lone({{"a", {}}}, {});
  ExtendedGraph deg1(lone, {{"l", "a"}});
  CHECK(deg1.warnings().size() == 1);
}

TEST_CASE("attach_leads") {
  MetricGraph g({{"a", {}}, {"b", {}}, {"c", VertexCondition::Dirichlet}},
                {{"ab", "a", "b", 1.0}, {"bc", "b", "c", 1.0}});
  SUBCASE("auto-named leads in request order") {
    ExtendedGraph eg = attach_leads(g, {"b", "a", "a"});
    REQUIRE(eg.leads().size() == 3);
    CHECK(eg.leads()[0].vertex == "b");
    CHECK(eg.leads()[1].vertex == "a");
    CHECK(eg.leads()[0].id != eg.leads()[1].id);
    CHECK(eg.lead_count_at(g.vertex_index("a")) == 2);
  }
  SUBCASE("dirichlet attachment rejected") {
    CHECK_THROWS_AS(attach_leads(g, {"c"}), ValidationError);
  }
  SUBCASE("degree below two after attachment rejected") {
    MetricGraph lone({{"a", {}}}, {});
    CHECK_THROWS_AS(attach_leads(lone, {"a"}), ValidationError);
    ExtendedGraph two = attach_leads(lone, {"a", "a"});  // degree 2: allowed
    CHECK(two.leads().size() == 2);
  }
}

TEST_CASE("load_graph on a missing file") {
  CHECK_THROWS_AS(load_graph("/nonexistent/graph.json"), ParseError);
}

TEST_CASE("malformed json") {
  CHECK_THROWS_AS(parse_graph("{"), ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"vertices": 3, "edges": []})"), ParseError);
}
