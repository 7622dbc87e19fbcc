#pragma once

// The weighted graph of a display: an edge x -> y of weight w whenever the
// y-coordinate of F x is nonzero with valuation w. Cycle slopes weight/length
// bound the smallest Newton slope from above.

#include <optional>
#include <string>
#include <vector>

#include "gustrata/fcrystal.hpp"
#include "gustrata/rational.hpp"

namespace gustrata::graph {

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  int weight = 0;
  bool operator==(const Edge&) const = default;
};

class SlopeGraph {
 public:
  SlopeGraph(std::vector<BasisLabel> vertices, std::vector<Edge> edges);

  const std::vector<BasisLabel>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edges leaving vertex v, in column-major order.
  const std::vector<Edge>& out_edges(std::size_t v) const { return out_[v]; }
  std::size_t index_of(const BasisLabel& label) const;
  std::optional<int> edge_weight(std::size_t from, std::size_t to) const;

 private:
  std::vector<BasisLabel> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Edge>> out_;
};

struct CycleSummary {
  /// Starts and ends implicitly at the same vertex; vertices.front() is the
  /// vertex the cycle was enumerated through.
  std::vector<std::size_t> vertices;
  int length = 0;
  int weight = 0;
  Rational slope() const { return Rational(weight, length); }
};

SlopeGraph build_graph(const DieudonneDisplay& display);

/// All simple cycles through v, by depth-first search from v. Order: DFS
/// order following out_edges.
std::vector<CycleSummary> cycles_through(const SlopeGraph& g, std::size_t v);

/// Minimum of weight/length over cycles_through(g, v). Throws Error when v lies
/// on no cycle.
Rational min_cycle_slope(const SlopeGraph& g, std::size_t v);

/// Karp's minimum cycle mean over the whole graph; nullopt for acyclic graphs.
std::optional<Rational> min_cycle_mean(const SlopeGraph& g);

/// When every vertex has exactly one outgoing and one incoming edge the graph
/// is a disjoint union of cycles, and for a monomial Frobenius matrix each
/// cycle of length L and weight W contributes slope W/L with multiplicity L.
/// nullopt if the graph is not of that shape.
std::optional<NewtonPolygon> cycle_decomposition_slopes(const SlopeGraph& g);

/// Graphviz text; weight-0 edges gray, heavier edges black with a label.
std::string to_dot(const SlopeGraph& g, const std::string& name = "Gamma");

/// Same vertices, keeping only the edges that satisfy pred.
template <class Pred>
SlopeGraph filter_edges(const SlopeGraph& g, Pred pred) {
  std::vector<Edge> kept;
  for (const auto& e : g.edges()) {
    if (pred(e)) kept.push_back(e);
  }
  return SlopeGraph(g.vertices(), std::move(kept));
}

}  // namespace gustrata::graph
