#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/metrics.hpp"

namespace sofic {

// Conjugacy-class graph: vertices are the classes of G, and x -- y is an
// edge iff x lies in c*y for some generating class c. Edges are
// symmetrized, so the graph is undirected even when the generating
// classes are not closed under inverses.
class ConjGraph {
 public:
  ConjGraph(ClassPartition classes, std::vector<ClassId> generating);

  const ClassPartition& classes() const { return classes_; }
  std::span<const ClassId> generating() const { return generating_; }
  std::size_t vertex_count() const { return adjacency_.size(); }
  std::span<const ClassId> neighbors(ClassId x) const { return adjacency_[x]; }
  bool has_edge(ClassId x, ClassId y) const;

  // Each undirected edge once, as (x, y) with label(x) <= label(y),
  // sorted by labels.
  std::vector<std::pair<ClassId, ClassId>> edges() const;

 private:
  ClassPartition classes_;
  std::vector<ClassId> generating_;
  std::vector<std::vector<ClassId>> adjacency_;
};

ConjGraph build_graph(const ClassPartition& classes, std::span<const ClassId> generating);

struct GraphNorm {
  ConjGraph graph;
  // BFS distance from the identity class; nullopt outside its component.
  std::vector<std::optional<unsigned>> distance;
  // Largest distance inside the identity component; the value assigned to
  // unreachable classes.
  unsigned max_reachable = 0;
  Norm norm;
};

GraphNorm graph_norm(const ClassPartition& classes, std::span<const ClassId> generating);

// eps * graph norm; eps must be positive.
Norm scaled_graph_metric(const ClassPartition& classes, std::span<const ClassId> generating, const Rational& eps);

// "<label> -- <label>" per line.
std::string edge_list(const ConjGraph& graph);
std::string to_dot(const ConjGraph& graph, const std::string& name = "conjugacy_graph");

}  // namespace sofic
