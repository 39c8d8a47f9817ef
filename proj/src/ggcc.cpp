#include "graphctl/ggcc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace graphctl {

const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::BoundedPaths: return "bounded_paths";
    case Criterion::CyclesAndExteriorPaths: return "cycles_and_exterior_paths";
    case Criterion::Forest: return "forest";
    case Criterion::PeriodicPaths: return "periodic_paths";
    case Criterion::Abp: return "abp";
    case Criterion::WatershedCondition: return "watershed";
  }
  return "?";
}

GraphPath GraphPath::full_edges(const MetricGraph& g, std::vector<PathStep> steps, bool periodic) {
  GraphPath p;
  p.steps = std::move(steps);
  p.periodic = periodic;
  if (p.steps.empty()) return p;
  const Edge& first = g.edge(g.edge_index(p.steps.front().edge));
  const Edge& last = g.edge(g.edge_index(p.steps.back().edge));
  p.start = p.steps.front().dir == Direction::Forward ? 0.0 : first.length;
  p.end = p.steps.back().dir == Direction::Forward ? last.length : 0.0;
  for (const auto& s : p.steps) p.total_length += g.edge(g.edge_index(s.edge)).length;
  return p;
}

double GraphPath::portion(const MetricGraph& g, std::size_t i) const {
  const PathStep& s = steps.at(i);
  const double len = g.edge(g.edge_index(s.edge)).length;
  const bool fwd = s.dir == Direction::Forward;
  if (steps.size() == 1) return std::abs(end - start);
  if (i == 0) return fwd ? len - start : start;
  if (i + 1 == steps.size()) return fwd ? end : len - end;
  return len;
}

namespace {

// Vertex index reached when traversing edge index `e` in direction `d`.
int arrival_vertex(const MetricGraph& g, int e, Direction d) {
  return d == Direction::Forward ? g.head_index(e) : g.tail_index(e);
}
int departure_vertex(const MetricGraph& g, int e, Direction d) {
  return d == Direction::Forward ? g.tail_index(e) : g.head_index(e);
}

// Uncontrolled incidences at a vertex, ordered by edge id then end.
std::vector<Incidence> free_incidences(const NormalizedGraph& ng, int v) {
  std::vector<Incidence> out;
  for (const auto& inc : ng.graph.incidences(v)) {
    if (!ng.controlled[inc.edge]) out.push_back(inc);
  }
  std::sort(out.begin(), out.end(), [&](const Incidence& a, const Incidence& b) {
    const int ia = ng.graph.edge(a.edge).id, ib = ng.graph.edge(b.edge).id;
    return ia != ib ? ia < ib : a.end < b.end;
  });
  return out;
}

std::vector<int> free_edges_by_id(const NormalizedGraph& ng) {
  std::vector<int> out;
  for (std::size_t i = 0; i < ng.graph.num_edges(); ++i) {
    if (!ng.controlled[i]) out.push_back(static_cast<int>(i));
  }
  std::sort(out.begin(), out.end(),
            [&](int a, int b) { return ng.graph.edge(a).id < ng.graph.edge(b).id; });
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Path of edge steps between two vertices using only the given edges (a forest).
std::optional<std::vector<PathStep>> forest_path(const NormalizedGraph& ng, const std::vector<int>& edges,
                                                  int from, int to) {
  const MetricGraph& g = ng.graph;
  std::vector<std::vector<std::pair<int, Direction>>> adj(g.num_vertices());
  for (int e : edges) {
    adj[g.tail_index(e)].push_back({e, Direction::Forward});
    adj[g.head_index(e)].push_back({e, Direction::Backward});
  }
  std::vector<int> prev_edge(g.num_vertices(), -1);
  std::vector<Direction> prev_dir(g.num_vertices(), Direction::Forward);
  std::vector<bool> seen(g.num_vertices(), false);
  std::queue<int> q;
  q.push(from);
  seen[from] = true;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    if (v == to) break;
    for (const auto& [e, d] : adj[v]) {
      const int w = arrival_vertex(g, e, d);
      if (seen[w]) continue;
      seen[w] = true;
      prev_edge[w] = e;
      prev_dir[w] = d;
      q.push(w);
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<PathStep> steps;
  for (int v = to; v != from;) {
    const int e = prev_edge[v];
    steps.push_back({g.edge(e).id, prev_dir[v]});
    v = departure_vertex(g, e, prev_dir[v]);
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

// State graph over (uncontrolled edge index, direction); state = 2*edge + dir.
struct StateGraph {
  std::vector<int> states;                 // valid states, ordered by edge id
  std::vector<std::vector<int>> next;      // successors per state id (2*edge+dir)
};

int state_id(int e, Direction d) { return 2 * e + (d == Direction::Backward ? 1 : 0); }
int state_edge(int s) { return s / 2; }
Direction state_dir(int s) { return s % 2 == 0 ? Direction::Forward : Direction::Backward; }

StateGraph build_state_graph(const NormalizedGraph& ng) {
  const MetricGraph& g = ng.graph;
  StateGraph sg;
  sg.next.assign(2 * g.num_edges(), {});
  for (int e : free_edges_by_id(ng)) {
    for (Direction d : {Direction::Forward, Direction::Backward}) {
      const int s = state_id(e, d);
      sg.states.push_back(s);
      const int v = arrival_vertex(g, e, d);
      const Incidence arrived{e, d == Direction::Forward ? EdgeEnd::Head : EdgeEnd::Tail};
      if (g.is_exterior(v)) {
        sg.next[s].push_back(state_id(e, d == Direction::Forward ? Direction::Backward : Direction::Forward));
        continue;
      }
      for (const auto& inc : free_incidences(ng, v)) {
        if (inc.edge == arrived.edge && inc.end == arrived.end) continue;
        sg.next[s].push_back(
            state_id(inc.edge, inc.end == EdgeEnd::Tail ? Direction::Forward : Direction::Backward));
      }
    }
  }
  return sg;
}

}  // namespace

// ---------------------------------------------------------------------------

CycleCheck check_cycles_and_exterior_paths(const NormalizedGraph& ng) {
  const MetricGraph& g = ng.graph;
  UnionFind uf(g.num_vertices());
  std::vector<int> forest;
  for (int e : free_edges_by_id(ng)) {
    const int t = g.tail_index(e), h = g.head_index(e);
    if (!uf.unite(t, h)) {
      std::vector<PathStep> steps{{g.edge(e).id, Direction::Forward}};
      if (t != h) {
        const auto back = forest_path(ng, forest, h, t);
        steps.insert(steps.end(), back->begin(), back->end());
      }
      return {false, GraphPath::full_edges(g, std::move(steps), true)};
    }
    forest.push_back(e);
  }
  std::map<int, std::vector<int>> exterior_by_root;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const int vi = static_cast<int>(v);
    if (g.is_exterior(vi) && !ng.controlled[g.incidences(vi).front().edge]) {
      exterior_by_root[uf.find(vi)].push_back(vi);
    }
  }
  for (const auto& [root, ext] : exterior_by_root) {
    if (ext.size() < 2) continue;
    auto steps = forest_path(ng, forest, ext[0], ext[1]);
    return {false, GraphPath::full_edges(g, std::move(*steps), false)};
  }
  return {true, std::nullopt};
}

bool check_forest(const NormalizedGraph& ng) {
  for (const auto& comp : uncontrolled_subgraph(ng)) {
    if (comp.graph.num_edges() + 1 != comp.graph.num_vertices()) return false;
    if (comp.count(VertexTag::WasExterior) > 1) return false;
  }
  return true;
}

AbpCheck check_abp(const NormalizedGraph& ng) {
  const MetricGraph& g = ng.graph;
  const std::vector<int> free = free_edges_by_id(ng);

  UnionFind uf(g.num_vertices());
  for (int e : free) {
    if (!uf.unite(g.tail_index(e), g.head_index(e))) return {false, std::nullopt};
  }

  std::vector<int> free_degree(g.num_vertices(), 0);
  for (int e : free) {
    ++free_degree[g.tail_index(e)];
    ++free_degree[g.head_index(e)];
  }
  // Candidate images: endpoints that are not exterior, leaves of the free part first.
  std::vector<std::vector<int>> candidates(g.num_edges());
  for (int e : free) {
    std::vector<int> c;
    for (int v : {g.tail_index(e), g.head_index(e)}) {
      if (!g.is_exterior(v) && std::find(c.begin(), c.end(), v) == c.end()) c.push_back(v);
    }
    std::stable_sort(c.begin(), c.end(), [&](int a, int b) { return free_degree[a] < free_degree[b]; });
    candidates[e] = std::move(c);
  }

  std::vector<int> owner(g.num_vertices(), -1);
  std::function<bool(int, std::vector<bool>&)> augment = [&](int e, std::vector<bool>& visited) {
    for (int v : candidates[e]) {
      if (visited[v]) continue;
      visited[v] = true;
      if (owner[v] < 0 || augment(owner[v], visited)) {
        owner[v] = e;
        return true;
      }
    }
    return false;
  };
  for (int e : free) {
    std::vector<bool> visited(g.num_vertices(), false);
    if (!augment(e, visited)) return {false, std::nullopt};
  }
  AbpCertificate cert;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (owner[v] >= 0) cert[g.edge(owner[v]).id] = g.vertex(static_cast<int>(v)).id;
  }
  return {true, std::move(cert)};
}

// ---------------------------------------------------------------------------

std::optional<Watershed> construct_watershed(const NormalizedGraph& ng) {
  if (!check_forest(ng)) return std::nullopt;
  const MetricGraph& g = ng.graph;
  Watershed w;

  for (const auto& comp : uncontrolled_subgraph(ng)) {
    const MetricGraph& t = comp.graph;
    // Root: the exterior vertex if any, else the lowest-id vertex of largest degree.
    int root = -1;
    for (std::size_t v = 0; v < t.num_vertices(); ++v) {
      if (comp.tags.at(t.vertex(static_cast<int>(v)).id) == VertexTag::WasExterior) root = static_cast<int>(v);
    }
    if (root < 0) {
      for (std::size_t v = 0; v < t.num_vertices(); ++v) {
        const int vi = static_cast<int>(v);
        if (root < 0 || t.degree(vi) > t.degree(root) ||
            (t.degree(vi) == t.degree(root) && t.vertex(vi).id < t.vertex(root).id)) {
          root = vi;
        }
      }
    }

    // BFS order from the root; parent edge of each vertex.
    std::vector<int> order{root};
    std::vector<int> parent_edge(t.num_vertices(), -1);
    std::vector<bool> seen(t.num_vertices(), false);
    seen[root] = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int v = order[k];
      for (const auto& inc : t.incidences(v)) {
        const int u = t.endpoint_index(inc.edge, inc.end == EdgeEnd::Tail ? EdgeEnd::Head : EdgeEnd::Tail);
        if (seen[u]) continue;
        seen[u] = true;
        parent_edge[u] = inc.edge;
        order.push_back(u);
      }
    }

    struct Flow {
      std::vector<PathStep> steps;
      double used = 0.0;
    };
    std::vector<std::vector<Flow>> arriving(t.num_vertices());
    auto finish = [&](Flow&& f, int end_vertex) {
      River r;
      r.path = GraphPath::full_edges(g, std::move(f.steps));
      r.source_at_start = true;
      r.source_at_end = comp.tags.at(t.vertex(end_vertex).id) == VertexTag::OmegaBoundary;
      w.rivers.push_back(std::move(r));
    };

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      auto& in = arriving[v];
      if (v == root) {
        for (auto& f : in) finish(std::move(f), v);
        continue;
      }
      Flow cont;
      if (!in.empty()) {
        auto best = std::min_element(in.begin(), in.end(), [&](const Flow& a, const Flow& b) {
          if (a.used != b.used) return a.used < b.used;
          return a.steps.back().edge < b.steps.back().edge;
        });
        cont = std::move(*best);
        in.erase(best);
        for (auto& f : in) finish(std::move(f), v);
      }
      const int pe = parent_edge[v];
      const Edge& e = t.edge(pe);
      const bool forward = t.tail_index(pe) == v;
      cont.steps.push_back({e.id, forward ? Direction::Forward : Direction::Backward});
      cont.used += e.length;
      const int parent = forward ? t.head_index(pe) : t.tail_index(pe);
      arriving[parent].push_back(std::move(cont));
    }
  }
  return w;
}

bool verify_watershed(const NormalizedGraph& ng, const Watershed& w, std::string* why) {
  const MetricGraph& g = ng.graph;
  auto reject = [why](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  constexpr double kTol = 1e-9;
  auto at_vertex = [&](int edge_index, double x) -> int {
    const double len = g.edge(edge_index).length;
    if (std::abs(x) <= kTol) return g.tail_index(edge_index);
    if (std::abs(x - len) <= kTol) return g.head_index(edge_index);
    return -1;
  };
  auto touches_omega = [&](int v) {
    if (v < 0) return false;
    for (const auto& inc : g.incidences(v)) {
      if (ng.controlled[inc.edge]) return true;
    }
    return false;
  };

  std::vector<std::vector<Interval>> cover(g.num_edges());
  // germ usage per vertex: river index -> number of incident germs used
  std::vector<std::map<int, int>> germs(g.num_vertices());

  for (std::size_t ri = 0; ri < w.rivers.size(); ++ri) {
    const River& r = w.rivers[ri];
    const GraphPath& p = r.path;
    const std::string tag = "river " + std::to_string(ri) + ": ";
    if (p.steps.empty()) return reject(tag + "empty");
    std::vector<int> eidx;
    for (const auto& s : p.steps) {
      if (!g.has_edge_id(s.edge)) return reject(tag + "unknown edge");
      const int e = g.edge_index(s.edge);
      if (ng.controlled[e]) return reject(tag + "runs inside omega");
      eidx.push_back(e);
    }
    for (std::size_t i = 0; i + 1 < eidx.size(); ++i) {
      const int v = arrival_vertex(g, eidx[i], p.steps[i].dir);
      if (v != departure_vertex(g, eidx[i + 1], p.steps[i + 1].dir)) {
        return reject(tag + "consecutive steps do not share a vertex");
      }
      if (eidx[i] == eidx[i + 1] && p.steps[i].dir != p.steps[i + 1].dir) {
        return reject(tag + "reverses direction");
      }
      germs[v][static_cast<int>(ri)] += 2;
    }
    const double len0 = g.edge(eidx.front()).length;
    const double len1 = g.edge(eidx.back()).length;
    if (p.start < -kTol || p.start > len0 + kTol || p.end < -kTol || p.end > len1 + kTol) {
      return reject(tag + "coordinates outside edge");
    }
    for (std::size_t i = 0; i < eidx.size(); ++i) {
      const double len = g.edge(eidx[i]).length;
      const bool fwd = p.steps[i].dir == Direction::Forward;
      double lo = 0.0, hi = len;
      if (i == 0) (fwd ? lo : hi) = p.start;
      if (i + 1 == eidx.size()) (fwd ? hi : lo) = p.end;
      if (hi < lo - kTol) return reject(tag + "step runs against its direction");
      cover[eidx[i]].push_back({lo, hi});
    }
    // Ends of the river that sit on a vertex use one germ there.
    const bool fwd0 = p.steps.front().dir == Direction::Forward;
    const bool fwd1 = p.steps.back().dir == Direction::Forward;
    const int vs = at_vertex(eidx.front(), p.start);
    const int ve = at_vertex(eidx.back(), p.end);
    if (vs >= 0 && vs == departure_vertex(g, eidx.front(), p.steps.front().dir) &&
        (p.steps.size() > 1 || (fwd0 ? p.start <= p.end : p.start >= p.end))) {
      germs[vs][static_cast<int>(ri)] += 1;
    }
    if (ve >= 0 && ve == arrival_vertex(g, eidx.back(), p.steps.back().dir) &&
        (p.steps.size() > 1 || (fwd1 ? p.start <= p.end : p.start >= p.end))) {
      germs[ve][static_cast<int>(ri)] += 1;
    }
    const bool start_in_omega = touches_omega(vs);
    const bool end_in_omega = touches_omega(ve);
    if (!r.source_at_start && !r.source_at_end) return reject(tag + "no source marked");
    if ((r.source_at_start && !start_in_omega) || (r.source_at_end && !end_in_omega)) {
      return reject(tag + "marked source is not on the boundary of omega");
    }
  }

  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto& iv = cover[e];
    const double len = g.edge(static_cast<int>(e)).length;
    if (ng.controlled[e]) continue;
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.a < b.a; });
    double reached = 0.0, gap = 0.0, overlap = 0.0;
    for (const auto& x : iv) {
      if (x.a > reached) gap += x.a - reached;
      overlap += std::max(0.0, std::min(reached, x.b) - x.a);
      reached = std::max(reached, x.b);
    }
    gap += std::max(0.0, len - reached);
    const std::string tag = "edge " + std::to_string(g.edge(static_cast<int>(e)).id) + ": ";
    if (gap >= kTol) return reject(tag + "not covered by the rivers");
    if (overlap > kTol) return reject(tag + "rivers overlap");
  }

  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    int passing = 0;
    for (const auto& [ri, n] : germs[v]) {
      if (n > 2) return reject("vertex " + std::to_string(g.vertex(static_cast<int>(v)).id) + ": river revisits it");
      if (n == 2) ++passing;
    }
    if (passing > 1) {
      return reject("vertex " + std::to_string(g.vertex(static_cast<int>(v)).id) + ": several rivers pass through");
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

std::optional<GraphPath> periodic_path_search(const NormalizedGraph& ng, int max_steps) {
  const MetricGraph& g = ng.graph;
  const StateGraph sg = build_state_graph(ng);
  enum Color : char { White, Gray, Black };
  std::vector<Color> color(sg.next.size(), White);
  std::vector<int> stack;
  std::optional<GraphPath> found;

  std::function<bool(int)> dfs = [&](int s) {
    color[s] = Gray;
    stack.push_back(s);
    if (static_cast<int>(stack.size()) <= max_steps) {
      for (int t : sg.next[s]) {
        if (color[t] == Gray) {
          auto it = std::find(stack.begin(), stack.end(), t);
          std::vector<PathStep> steps;
          for (; it != stack.end(); ++it) steps.push_back({g.edge(state_edge(*it)).id, state_dir(*it)});
          found = GraphPath::full_edges(g, std::move(steps), true);
          return true;
        }
        if (color[t] == White && dfs(t)) return true;
      }
    }
    stack.pop_back();
    color[s] = Black;
    return false;
  };
  for (int s : sg.states) {
    if (color[s] == White && dfs(s)) return found;
  }
  return std::nullopt;
}

std::optional<double> longest_avoiding_walk(const NormalizedGraph& ng) {
  const MetricGraph& g = ng.graph;
  if (periodic_path_search(ng, 2 * static_cast<int>(g.num_edges()) + 2)) return std::nullopt;
  const StateGraph sg = build_state_graph(ng);
  std::vector<double> best(sg.next.size(), -1.0);
  std::function<double(int)> longest = [&](int s) {
    if (best[s] >= 0.0) return best[s];
    double tail = 0.0;
    for (int t : sg.next[s]) tail = std::max(tail, longest(t));
    return best[s] = g.edge(state_edge(s)).length + tail;
  };
  double L = 0.0;
  for (int s : sg.states) L = std::max(L, longest(s));
  return L;
}

namespace {

// Distances from `src` inside a tree component.
std::vector<double> tree_distances(const MetricGraph& t, int src) {
  std::vector<double> dist(t.num_vertices(), -1.0);
  dist[src] = 0.0;
  std::vector<int> stack{src};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& inc : t.incidences(v)) {
      const int u = t.endpoint_index(inc.edge, inc.end == EdgeEnd::Tail ? EdgeEnd::Head : EdgeEnd::Tail);
      if (dist[u] >= 0.0) continue;
      dist[u] = dist[v] + t.edge(inc.edge).length;
      stack.push_back(u);
    }
  }
  return dist;
}

}  // namespace

std::optional<double> ggcc_length(const NormalizedGraph& ng) {
  if (!check_forest(ng)) return std::nullopt;
  double L = 0.0;
  for (const auto& comp : uncontrolled_subgraph(ng)) {
    const MetricGraph& t = comp.graph;
    int ext = -1;
    for (std::size_t v = 0; v < t.num_vertices(); ++v) {
      if (comp.tags.at(t.vertex(static_cast<int>(v)).id) == VertexTag::WasExterior) ext = static_cast<int>(v);
    }
    if (ext >= 0) {
      const auto d = tree_distances(t, ext);
      L = std::max(L, 2.0 * *std::max_element(d.begin(), d.end()));
    } else {
      const auto d0 = tree_distances(t, 0);
      const int far = static_cast<int>(std::max_element(d0.begin(), d0.end()) - d0.begin());
      const auto d1 = tree_distances(t, far);
      L = std::max(L, *std::max_element(d1.begin(), d1.end()));
    }
  }
  return L;
}

// ---------------------------------------------------------------------------

namespace {

// Uncontrolled trees cut open at every vertex touching omega: each incident
// germ of such a vertex becomes its own source leaf.
struct CutTree {
  enum Kind { Plain, Source, Exterior };
  std::vector<Kind> kind;
  std::vector<std::vector<std::pair<int, double>>> adj;  // (neighbor, length)
  double total_length = 0.0;
};

std::vector<CutTree> cut_trees(const NormalizedGraph& ng) {
  std::vector<CutTree> out;
  for (const auto& comp : uncontrolled_subgraph(ng)) {
    const MetricGraph& t = comp.graph;
    // local node for (vertex, edge) germs
    std::vector<int> node_of_vertex(t.num_vertices(), -1);
    std::vector<CutTree::Kind> kind;
    struct LocalEdge { int a, b; double len; };
    std::vector<LocalEdge> ledges;
    auto node_for = [&](int v, int e) {
      const VertexTag tag = comp.tags.at(t.vertex(v).id);
      if (tag == VertexTag::OmegaBoundary) {
        kind.push_back(CutTree::Source);
        return static_cast<int>(kind.size()) - 1;
      }
      (void)e;
      if (node_of_vertex[v] < 0) {
        kind.push_back(tag == VertexTag::WasExterior ? CutTree::Exterior : CutTree::Plain);
        node_of_vertex[v] = static_cast<int>(kind.size()) - 1;
      }
      return node_of_vertex[v];
    };
    for (std::size_t e = 0; e < t.num_edges(); ++e) {
      const int ei = static_cast<int>(e);
      const int a = node_for(t.tail_index(ei), ei);
      const int b = node_for(t.head_index(ei), ei);
      ledges.push_back({a, b, t.edge(ei).length});
    }
    UnionFind uf(kind.size());
    for (const auto& le : ledges) uf.unite(le.a, le.b);
    std::map<int, std::vector<int>> members;
    for (std::size_t n = 0; n < kind.size(); ++n) members[uf.find(static_cast<int>(n))].push_back(static_cast<int>(n));
    for (const auto& [root, nodes] : members) {
      CutTree ct;
      std::map<int, int> local;
      for (int n : nodes) {
        local[n] = static_cast<int>(ct.kind.size());
        ct.kind.push_back(kind[n]);
      }
      ct.adj.assign(ct.kind.size(), {});
      for (const auto& le : ledges) {
        if (!local.count(le.a)) continue;
        ct.adj[local[le.a]].push_back({local[le.b], le.len});
        ct.adj[local[le.b]].push_back({local[le.a], le.len});
        ct.total_length += le.len;
      }
      out.push_back(std::move(ct));
    }
  }
  return out;
}

// Greedy flow toward `root` ignoring the branch through `skip`: rivers start at
// source leaves; at each vertex the shortest arriving river continues. Returns
// (longest arrival anywhere, length of the river leaving `root` toward `skip`).
// The continuing length is +inf when nothing can reach root.
std::pair<double, double> greedy_flow(const CutTree& ct, int root, int skip) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::function<double(int, int)> visit = [&](int v, int parent) -> double {
    bool has_child = false;
    double cont = kInf;
    for (const auto& [u, len] : ct.adj[v]) {
      if (u == parent) continue;
      has_child = true;
      const double arrival = visit(u, v) + len;
      worst = std::max(worst, arrival);
      cont = std::min(cont, arrival);
    }
    if (!has_child) return ct.kind[v] == CutTree::Source ? 0.0 : kInf;
    return cont;
  };
  const double cont = visit(root, skip);
  return {worst, cont};
}

// The greedy flow does not depend on the budget, so the least feasible budget
// has a closed form: the exterior vertex is the only sink when there is one;
// otherwise the sink splits some edge (u, w) and the two rivers meeting there
// share its length.
double min_max_river(const CutTree& ct) {
  for (std::size_t v = 0; v < ct.kind.size(); ++v) {
    if (ct.kind[v] == CutTree::Exterior) return greedy_flow(ct, static_cast<int>(v), -1).first;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < ct.adj.size(); ++a) {
    for (const auto& [b, len] : ct.adj[a]) {
      if (b < static_cast<int>(a)) continue;
      const auto [wa, ca] = greedy_flow(ct, static_cast<int>(a), b);
      const auto [wb, cb] = greedy_flow(ct, b, static_cast<int>(a));
      best = std::min(best, std::max({wa, wb, ca, cb, (ca + cb + len) / 2}));
    }
  }
  return best;
}

}  // namespace

std::optional<OptimalTime> optimal_watershed_time(const NormalizedGraph& ng) {
  if (!check_forest(ng)) return std::nullopt;
  OptimalTime out;
  for (const auto& ct : cut_trees(ng)) {
    const double b = min_max_river(ct);
    out.per_tree_budget.push_back(b);
    out.max_river = std::max(out.max_river, b);
  }
  out.t_star = 2.0 * out.max_river;
  return out;
}

GgccVerdict check_ggcc(const NormalizedGraph& ng, bool with_certificates) {
  GgccVerdict v;
  const auto bounded = longest_avoiding_walk(ng);
  const auto cycles = check_cycles_and_exterior_paths(ng);
  const bool forest = check_forest(ng);
  const auto periodic = periodic_path_search(ng, 2 * static_cast<int>(ng.graph.num_edges()) + 2);
  const auto abp = check_abp(ng);
  const auto ws = construct_watershed(ng);
  const bool ws_ok = ws && verify_watershed(ng, *ws);

  v.criteria[Criterion::BoundedPaths] = bounded.has_value();
  v.criteria[Criterion::CyclesAndExteriorPaths] = cycles.holds;
  v.criteria[Criterion::Forest] = forest;
  v.criteria[Criterion::PeriodicPaths] = !periodic.has_value();
  v.criteria[Criterion::Abp] = abp.holds;
  v.criteria[Criterion::WatershedCondition] = ws_ok;
  v.holds = forest;
  for (const auto& [c, ok] : v.criteria) v.criteria_agree = v.criteria_agree && ok == forest;

  v.violating_path = cycles.witness;
  v.periodic_path = periodic;
  if (v.holds) {
    v.ggcc_length = ggcc_length(ng);
    if (const auto t = optimal_watershed_time(ng)) v.optimal_time = t->t_star;
    if (with_certificates) {
      v.abp = abp.certificate;
      v.watershed = ws;
    }
  }
  return v;
}

}  // namespace graphctl
