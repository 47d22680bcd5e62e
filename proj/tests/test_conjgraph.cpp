#include <doctest.h>

#include "sofic/conjgraph.hpp"
#include "sofic/error.hpp"
#include "support.hpp"

using namespace sofic;

namespace {

using Matrix = std::vector<std::vector<bool>>;

// Edge oracle from all element products.
Matrix brute_edges(const ClassPartition& p, const std::vector<ClassId>& gen) {
  const auto& g = *p.group();
  Matrix adj(p.size(), std::vector<bool>(p.size(), false));
  for (auto c : gen)
    for (auto a : p.members(c))
      for (Elem b = 0; b < g.order(); ++b) {
        ClassId x = p.class_of(g.mul(a, b)), y = p.class_of(b);
        adj[x][y] = adj[y][x] = true;
      }
  return adj;
}

// Distances from boolean adjacency powers: the first k with (I + A)^k
// reaching the vertex.
std::vector<int> power_distances(const Matrix& adj) {
  const auto n = adj.size();
  std::vector<bool> reach(n, false);
  reach[0] = true;
  std::vector<int> dist(n, -1);
  dist[0] = 0;
  for (int k = 1; k <= static_cast<int>(n); ++k) {
    std::vector<bool> next = reach;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i] && adj[i][j]) next[j] = true;
    for (std::size_t j = 0; j < n; ++j)
      if (next[j] && !reach[j]) dist[j] = k;
    reach = next;
  }
  return dist;
}

ClassId id(const ClassPartition& p, const char* label) { return *p.find(label); }

std::vector<ClassId> all_classes(const ClassPartition& p) {
  std::vector<ClassId> out(p.size());
  for (ClassId c = 0; c < p.size(); ++c) out[c] = c;
  return out;
}

void check_against_oracles(const ClassPartition& p, const std::vector<ClassId>& gen) {
  auto gn = graph_norm(p, gen);
  auto adj = brute_edges(p, gen);
  for (ClassId x = 0; x < p.size(); ++x)
    for (ClassId y = 0; y < p.size(); ++y) REQUIRE(gn.graph.has_edge(x, y) == adj[x][y]);
  auto dist = power_distances(adj);
  int max_reach = 0;
  for (auto d : dist) max_reach = std::max(max_reach, d);
  CHECK(gn.max_reachable == static_cast<unsigned>(max_reach));
  for (ClassId c = 0; c < p.size(); ++c) {
    if (dist[c] < 0) {
      CHECK_FALSE(gn.distance[c].has_value());
    } else {
      REQUIRE(gn.distance[c].has_value());
      CHECK(*gn.distance[c] == static_cast<unsigned>(dist[c]));
    }
    for (auto g : p.members(c)) CHECK(gn.norm(g) == NormValue(dist[c] < 0 ? max_reach : dist[c]));
  }
  auto rep = verify_norm_axioms(gn.norm);
  for (const auto& check : rep.checks) INFO(check.name << ": " << check.witness);
  CHECK(rep.all_pass());
}

}  // namespace

TEST_CASE("empty generating set") {
  ClassPartition p(symmetric_group(4));
  auto g = build_graph(p, std::vector<ClassId>{});
  CHECK(g.edges().empty());
  auto gn = graph_norm(p, std::vector<ClassId>{});
  CHECK(gn.max_reachable == 0);
  for (Elem e = 0; e < 24; ++e) CHECK(gn.norm(e) == NormValue(0));
  CHECK(verify_norm_axioms(gn.norm).all_pass());
  CHECK(edge_list(g).empty());
}

TEST_CASE("Figure-1 graph on S5") {
  ClassPartition p(symmetric_group(5));
  std::vector<ClassId> gen{id(p, "C2")};
  auto g = build_graph(p, gen);
  CHECK(g.vertex_count() == 7);
  auto n1 = g.neighbors(id(p, "C1"));
  CHECK(std::set<ClassId>(n1.begin(), n1.end()) == std::set<ClassId>{id(p, "C2")});
  for (const char* l : {"C1", "C3", "C2,2"}) CHECK(g.has_edge(id(p, "C2"), id(p, l)));
  auto gn = graph_norm(p, gen);
  std::vector<std::pair<const char*, unsigned>> expected{{"C1", 0},   {"C2", 1},   {"C3", 2}, {"C2,2", 2},
                                                         {"C4", 3},   {"C2,3", 3}, {"C5", 4}};
  for (auto [label, d] : expected) CHECK(gn.distance[id(p, label)] == d);
  check_against_oracles(p, gen);
  auto el = edge_list(g);
  CHECK(el.find("C1 -- C2\n") != std::string::npos);
  auto dot = to_dot(g);
  CHECK(dot.rfind("graph ", 0) == 0);
  CHECK(dot.find("\"C1\" -- \"C2\";") != std::string::npos);
}

TEST_CASE("Z4 cycle graph") {
  std::vector<std::vector<Elem>> t(4, std::vector<Elem>(4));
  for (Elem a = 0; a < 4; ++a)
    for (Elem b = 0; b < 4; ++b) t[a][b] = (a + b) % 4;
  ClassPartition p(table_group(t, "Z4"));
  auto g = build_graph(p, std::vector<ClassId>{p.class_of(1)});
  std::set<std::pair<Elem, Elem>> edges;
  for (auto [x, y] : g.edges()) edges.insert({std::min(p.rep(x), p.rep(y)), std::max(p.rep(x), p.rep(y))});
  CHECK(edges == std::set<std::pair<Elem, Elem>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

TEST_CASE("unreachable classes take the component maximum") {
  ClassPartition p(symmetric_group(5));
  std::vector<ClassId> gen{id(p, "C2,2")};
  auto gn = graph_norm(p, gen);
  for (const char* odd : {"C2", "C4", "C2,3"}) {
    CHECK_FALSE(gn.distance[id(p, odd)].has_value());
    CHECK(gn.norm(p.rep(id(p, odd))) == NormValue(gn.max_reachable));
  }
  for (const char* even : {"C1", "C3", "C2,2", "C5"}) CHECK(gn.distance[id(p, even)].has_value());
  check_against_oracles(p, gen);
}

TEST_CASE("graph norms satisfy the axioms and match the oracles") {
  for (const auto& g : {symmetric_group(3), symmetric_group(4), symmetric_group(5), testing::bundled("Q8"),
                        testing::bundled("D4")}) {
    ClassPartition p(g);
    for (ClassId c = 0; c < p.size(); ++c) check_against_oracles(p, {c});
    check_against_oracles(p, all_classes(p));
  }
}

TEST_CASE("enlarging the generating set never increases a distance") {
  ClassPartition p(symmetric_group(4));
  const auto k = p.size();
  std::vector<GraphNorm> norms;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<ClassId> gen;
    for (ClassId c = 0; c < k; ++c)
      if (mask >> c & 1) gen.push_back(c);
    norms.push_back(graph_norm(p, gen));
  }
  for (unsigned a = 0; a < norms.size(); ++a)
    for (unsigned b = 0; b < norms.size(); ++b) {
      if ((a & b) != a) continue;
      for (ClassId c = 0; c < k; ++c) {
        if (!norms[a].distance[c]) continue;
        REQUIRE(norms[b].distance[c].has_value());
        CHECK(*norms[b].distance[c] <= *norms[a].distance[c]);
      }
    }
}

TEST_CASE("scaled graph metric") {
  ClassPartition p(symmetric_group(5));
  std::vector<ClassId> gen{id(p, "C2")};
  auto base = graph_norm(p, gen).norm;
  auto one = scaled_graph_metric(p, gen, Rational(1));
  auto half = scaled_graph_metric(p, gen, Rational(1, 2));
  for (Elem g = 0; g < 120; ++g) {
    CHECK(one(g) == base(g));
    CHECK(half(g) == NormValue(Rational(1, 2)) * base(g));
  }
  CHECK(verify_norm_axioms(half).all_pass());
  auto quarter = scaled_graph_metric(p, gen, Rational(1, 4));
  CHECK(quarter(p.group()->parse_element("(1 2 3 4 5)")) == NormValue(1));
  CHECK_THROWS_AS(scaled_graph_metric(p, gen, Rational(0)), PreconditionFailed);
  CHECK_THROWS_AS(build_graph(p, std::vector<ClassId>{9}), MalformedInput);
}
