#include "gustrata/slopegraph.hpp"

#include <algorithm>
#include <limits>

#include "gustrata/errors.hpp"

namespace gustrata::graph {

SlopeGraph::SlopeGraph(std::vector<BasisLabel> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), out_(vertices_.size()) {
  for (const auto& e : edges_) {
    if (e.from >= vertices_.size() || e.to >= vertices_.size()) throw InvalidArgument("edge endpoint out of range");
    if (e.weight < 0) throw InvalidArgument("negative edge weight");
    out_[e.from].push_back(e);
  }
}

std::size_t SlopeGraph::index_of(const BasisLabel& label) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] == label) return i;
  }
  throw InvalidArgument("no vertex " + label.name());
}

std::optional<int> SlopeGraph::edge_weight(std::size_t from, std::size_t to) const {
  for (const auto& e : out_[from]) {
    if (e.to == to) return e.weight;
  }
  return std::nullopt;
}

SlopeGraph build_graph(const DieudonneDisplay& display) {
  std::vector<Edge> edges;
  const auto& a = display.frobenius;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (const auto w = a(i, j).valuation()) edges.push_back({j, i, *w});
    }
  }
  return SlopeGraph(display.basis, std::move(edges));
}

std::vector<CycleSummary> cycles_through(const SlopeGraph& g, std::size_t v) {
  const std::size_t n = g.vertices().size();
  if (v >= n) throw InvalidArgument("vertex out of range");

  // Only vertices that can reach v can lie on a cycle through v.
  std::vector<std::vector<std::size_t>> reverse(n);
  for (const auto& e : g.edges()) reverse[e.to].push_back(e.from);
  std::vector<bool> reaches(n, false);
  std::vector<std::size_t> stack{v};
  reaches[v] = true;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (auto y : reverse[x]) {
      if (!reaches[y]) {
        reaches[y] = true;
        stack.push_back(y);
      }
    }
  }

  std::vector<CycleSummary> cycles;
  std::vector<bool> on_path(n, false);
  std::vector<std::size_t> path{v};
  on_path[v] = true;

  auto dfs = [&](auto&& self, std::size_t x, int weight) -> void {
    for (const auto& e : g.out_edges(x)) {
      if (e.to == v) {
        cycles.push_back({path, static_cast<int>(path.size()), weight + e.weight});
      } else if (!on_path[e.to] && reaches[e.to]) {
        on_path[e.to] = true;
        path.push_back(e.to);
        self(self, e.to, weight + e.weight);
        path.pop_back();
        on_path[e.to] = false;
      }
    }
  };
  dfs(dfs, v, 0);
  return cycles;
}

Rational min_cycle_slope(const SlopeGraph& g, std::size_t v) {
  const auto cycles = cycles_through(g, v);
  if (cycles.empty()) throw Error("anomaly: vertex " + g.vertices()[v].name() + " lies on no cycle");
  Rational best = cycles.front().slope();
  for (const auto& c : cycles) best = std::min(best, c.slope());
  return best;
}

std::optional<Rational> min_cycle_mean(const SlopeGraph& g) {
  const std::size_t n = g.vertices().size();
  if (n == 0) return std::nullopt;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // walk[k][x]: least weight of a k-edge walk ending at x, from any start.
  std::vector<std::vector<std::int64_t>> walk(n + 1, std::vector<std::int64_t>(n, kInf));
  std::fill(walk[0].begin(), walk[0].end(), 0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (const auto& e : g.edges()) {
      if (walk[k - 1][e.from] < kInf) walk[k][e.to] = std::min(walk[k][e.to], walk[k - 1][e.from] + e.weight);
    }
  }
  std::optional<Rational> best;
  for (std::size_t x = 0; x < n; ++x) {
    if (walk[n][x] >= kInf) continue;
    std::optional<Rational> worst;
    for (std::size_t k = 0; k < n; ++k) {
      if (walk[k][x] >= kInf) continue;
      const Rational mean(walk[n][x] - walk[k][x], static_cast<std::int64_t>(n - k));
      if (!worst || mean > *worst) worst = mean;
    }
    if (worst && (!best || *worst < *best)) best = worst;
  }
  return best;
}

std::optional<NewtonPolygon> cycle_decomposition_slopes(const SlopeGraph& g) {
  const std::size_t n = g.vertices().size();
  std::vector<int> in_degree(n, 0);
  for (const auto& e : g.edges()) ++in_degree[e.to];
  for (std::size_t x = 0; x < n; ++x) {
    if (g.out_edges(x).size() != 1 || in_degree[x] != 1) return std::nullopt;
  }
  std::vector<bool> seen(n, false);
  std::vector<SlopeSegment> segments;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    int length = 0, weight = 0;
    for (std::size_t x = start; !seen[x]; x = g.out_edges(x).front().to) {
      seen[x] = true;
      ++length;
      weight += g.out_edges(x).front().weight;
    }
    segments.push_back({Rational(weight, length), length});
  }
  return NewtonPolygon(std::move(segments));
}

std::string to_dot(const SlopeGraph& g, const std::string& name) {
  std::string out = "digraph " + name + " {\n";
  for (const auto& v : g.vertices()) out += "  \"" + v.name() + "\";\n";
  for (const auto& e : g.edges()) {
    out += "  \"" + g.vertices()[e.from].name() + "\" -> \"" + g.vertices()[e.to].name() + "\"";
    if (e.weight == 0) {
      out += " [color=gray];\n";
    } else {
      out += " [color=black, label=\"" + std::to_string(e.weight) + "\"];\n";
    }
  }
  return out + "}\n";
}

}  // namespace gustrata::graph
