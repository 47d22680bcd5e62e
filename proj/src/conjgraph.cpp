#include "sofic/conjgraph.hpp"

#include <algorithm>
#include <deque>

#include "sofic/error.hpp"

namespace sofic {

ConjGraph::ConjGraph(ClassPartition classes, std::vector<ClassId> generating)
    : classes_(std::move(classes)), generating_(std::move(generating)), adjacency_(classes_.size()) {
  for (auto c : generating_)
    if (c >= classes_.size()) throw MalformedInput("class id " + std::to_string(c) + " out of range");
  std::sort(generating_.begin(), generating_.end());
  generating_.erase(std::unique(generating_.begin(), generating_.end()), generating_.end());

  std::vector<std::vector<bool>> edge(classes_.size(), std::vector<bool>(classes_.size(), false));
  for (ClassId y = 0; y < classes_.size(); ++y)
    for (auto c : generating_)
      for (auto x : class_product(classes_, c, y)) edge[x][y] = edge[y][x] = true;
  for (ClassId x = 0; x < classes_.size(); ++x)
    for (ClassId y = 0; y < classes_.size(); ++y)
      if (edge[x][y]) adjacency_[x].push_back(y);
}

bool ConjGraph::has_edge(ClassId x, ClassId y) const {
  const auto& adj = adjacency_[x];
  return std::binary_search(adj.begin(), adj.end(), y);
}

std::vector<std::pair<ClassId, ClassId>> ConjGraph::edges() const {
  std::vector<std::pair<ClassId, ClassId>> out;
  for (ClassId x = 0; x < adjacency_.size(); ++x)
    for (auto y : adjacency_[x]) {
      if (classes_.label(x) < classes_.label(y) || (x == y)) out.emplace_back(x, y);
    }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return std::pair(classes_.label(a.first), classes_.label(a.second)) <
           std::pair(classes_.label(b.first), classes_.label(b.second));
  });
  return out;
}

ConjGraph build_graph(const ClassPartition& classes, std::span<const ClassId> generating) {
  return ConjGraph(classes, std::vector<ClassId>(generating.begin(), generating.end()));
}

GraphNorm graph_norm(const ClassPartition& classes, std::span<const ClassId> generating) {
  ConjGraph graph = build_graph(classes, generating);
  std::vector<std::optional<unsigned>> dist(classes.size());
  dist[0] = 0;
  std::deque<ClassId> queue{0};
  unsigned max_reachable = 0;
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (auto y : graph.neighbors(x)) {
      if (dist[y]) continue;
      dist[y] = *dist[x] + 1;
      max_reachable = std::max(max_reachable, *dist[y]);
      queue.push_back(y);
    }
  }
  std::vector<NormValue> per_class;
  for (const auto& d : dist) per_class.emplace_back(static_cast<std::int64_t>(d.value_or(max_reachable)));

  std::string label = "graph{";
  for (std::size_t i = 0; i < graph.generating().size(); ++i)
    label += (i ? "," : "") + classes.label(graph.generating()[i]);
  label += "}";
  Norm norm = Norm::from_classes(classes, per_class, label, NormKind::Graph);
  return GraphNorm{std::move(graph), std::move(dist), max_reachable, std::move(norm)};
}

Norm scaled_graph_metric(const ClassPartition& classes, std::span<const ClassId> generating, const Rational& eps) {
  if (eps <= 0) throw PreconditionFailed("scale must be positive, got " + format_rational(eps));
  auto gn = graph_norm(classes, generating);
  return gn.norm.scaled(NormValue(eps), format_rational(eps) + "*" + gn.norm.label());
}

std::string edge_list(const ConjGraph& graph) {
  std::string out;
  for (auto [x, y] : graph.edges())
    out += graph.classes().label(x) + " -- " + graph.classes().label(y) + "\n";
  return out;
}

std::string to_dot(const ConjGraph& graph, const std::string& name) {
  const auto& classes = graph.classes();
  std::string out = "graph " + name + " {\n";
  for (ClassId c = 0; c < classes.size(); ++c) out += "  \"" + classes.label(c) + "\";\n";
  for (auto [x, y] : graph.edges())
    out += "  \"" + classes.label(x) + "\" -- \"" + classes.label(y) + "\";\n";
  out += "}\n";
  return out;
}

}  // namespace sofic
