#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "graphctl/metric_graph.hpp"
#include "graphctl/wavesim.hpp"

namespace graphctl::fixtures {

struct RandomCase {
  MetricGraph graph;
  ControlSet omega;
};

// Random multigraph with up to `max_edges` edges, dyadic lengths, loops and parallel
// edges allowed. Degree-one vertices are Dirichlet, everything else interior.
inline RandomCase random_graph(std::mt19937_64& rng, int max_edges = 8) {
  std::uniform_int_distribution<int> n_edges(1, max_edges);
  const int m = n_edges(rng);
  std::uniform_int_distribution<int> n_vertices(2, m + 1);
  const int n = n_vertices(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> quarter(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Edge> edges;
  std::set<int> used;
  for (int i = 0; i < m; ++i) {
    int a = pick(rng);
    int b = pick(rng);
    if (a == b && unit(rng) < 0.7) b = (a + 1) % n;
    edges.push_back({i, a, b, 0.25 * quarter(rng), {}});
    used.insert(a);
    used.insert(b);
  }
  std::vector<int> degree(n, 0);
  for (const auto& e : edges) {
    ++degree[e.tail];
    ++degree[e.head];
  }
  std::vector<Vertex> vertices;
  for (int v : used) {
    vertices.push_back({v, degree[v] == 1 ? BoundaryCondition::Dirichlet : BoundaryCondition::Interior});
  }

  RandomCase rc;
  rc.graph = MetricGraph(std::move(vertices), edges);
  for (const auto& e : edges) {
    const double r = unit(rng);
    if (r < 0.3) {
      rc.omega.add_whole_edge(rc.graph, e.id);
    } else if (r < 0.4) {
      rc.omega.add(e.id, 0.25 * e.length, 0.75 * e.length);
    }
  }
  return rc;
}

// Piecewise-constant states are compared piece by piece: after dropping slivers and
// merging equal neighbours, both must have the same pieces. Returns the largest
// breakpoint shift or value difference (relative to the largest value), or infinity.
inline double state_gap(const WaveState& a, const WaveState& b, double sliver = 1e-12) {
  auto canon = [sliver](const PiecewiseConstant& f) {
    PiecewiseConstant out;
    out.breaks.push_back(f.breaks.front());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (f.breaks[i + 1] - f.breaks[i] < sliver) continue;
      if (!out.values.empty() && std::abs(out.values.back() - f.values[i]) <= sliver) {
        out.breaks.back() = f.breaks[i + 1];
        continue;
      }
      out.values.push_back(f.values[i]);
      out.breaks.push_back(f.breaks[i + 1]);
    }
    out.breaks.back() = f.breaks.back();
    return out;
  };
  double scale = 0.0;
  for (const auto& f : a.fields) {
    for (double v : f.r.values) scale = std::max(scale, std::abs(v));
    for (double v : f.s.values) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) scale = 1.0;
  double gap = 0.0;
  for (std::size_t e = 0; e < a.fields.size(); ++e) {
    for (const auto m : {&EdgeField::r, &EdgeField::s}) {
      const auto fa = canon(a.fields[e].*m);
      const auto fb = canon(b.fields[e].*m);
      if (fa.values.size() != fb.values.size()) return std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < fa.values.size(); ++i) {
        gap = std::max({gap, std::abs(fa.values[i] - fb.values[i]) / scale, std::abs(fa.breaks[i] - fb.breaks[i]),
                        std::abs(fa.breaks[i + 1] - fb.breaks[i + 1])});
      }
    }
  }
  return gap;
}

}  // namespace graphctl::fixtures
