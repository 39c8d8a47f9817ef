#include "graphctl/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace graphctl {

const char* to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Interior: return "interior";
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
  }
  return "interior";
}

BoundaryCondition boundary_condition_from_string(const std::string& s) {
  if (s == "interior") return BoundaryCondition::Interior;
  if (s == "dirichlet") return BoundaryCondition::Dirichlet;
  if (s == "neumann") return BoundaryCondition::Neumann;
  throw ValidationError("unknown boundary condition '" + s + "'");
}

const char* to_string(VertexTag tag) {
  switch (tag) {
    case VertexTag::WasExterior: return "was_exterior";
    case VertexTag::OmegaBoundary: return "omega_boundary";
    case VertexTag::Interior: return "interior";
  }
  return "interior";
}

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    vertex_index_.emplace(vertices_[i].id, static_cast<int>(i));
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edge_index_.emplace(edges_[i].id, static_cast<int>(i));
  }
  incidences_.assign(vertices_.size(), {});
  tail_index_.assign(edges_.size(), -1);
  head_index_.assign(edges_.size(), -1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto t = vertex_index_.find(edges_[i].tail);
    const auto h = vertex_index_.find(edges_[i].head);
    if (t == vertex_index_.end() || h == vertex_index_.end()) continue;
    tail_index_[i] = t->second;
    head_index_[i] = h->second;
    incidences_[t->second].push_back({static_cast<int>(i), EdgeEnd::Tail});
    incidences_[h->second].push_back({static_cast<int>(i), EdgeEnd::Head});
  }
}

int MetricGraph::vertex_index(int id) const {
  const auto it = vertex_index_.find(id);
  if (it == vertex_index_.end()) {
    throw ValidationError("no vertex with id " + std::to_string(id));
  }
  return it->second;
}

int MetricGraph::edge_index(int id) const {
  const auto it = edge_index_.find(id);
  if (it == edge_index_.end()) {
    throw ValidationError("no edge with id " + std::to_string(id));
  }
  return it->second;
}

double MetricGraph::total_length() const {
  double sum = 0.0;
  for (const auto& e : edges_) sum += e.length;
  return sum;
}

int MetricGraph::max_vertex_id() const {
  int m = -1;
  for (const auto& v : vertices_) m = std::max(m, v.id);
  return m;
}

int MetricGraph::max_edge_id() const {
  int m = -1;
  for (const auto& e : edges_) m = std::max(m, e.id);
  return m;
}

// ---------------------------------------------------------------------------

void ControlSet::add(int edge_id, double a, double b) {
  raw_.emplace_back(edge_id, Interval{a, b});
  intervals_[edge_id].push_back({a, b});
  canonicalize(edge_id);
}

void ControlSet::add_whole_edge(const MetricGraph& g, int edge_id) {
  add(edge_id, 0.0, g.edge(g.edge_index(edge_id)).length);
}

void ControlSet::canonicalize(int edge_id) {
  auto& v = intervals_[edge_id];
  std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  std::vector<Interval> merged;
  for (const auto& iv : v) {
    if (!merged.empty() && iv.a <= merged.back().b + kMergeTolerance) {
      merged.back().b = std::max(merged.back().b, iv.b);
    } else {
      merged.push_back(iv);
    }
  }
  v = std::move(merged);
}

const std::vector<Interval>& ControlSet::on(int edge_id) const {
  static const std::vector<Interval> kEmpty;
  const auto it = intervals_.find(edge_id);
  return it == intervals_.end() ? kEmpty : it->second;
}

bool ControlSet::empty() const {
  return std::all_of(intervals_.begin(), intervals_.end(),
                     [](const auto& kv) { return kv.second.empty(); });
}

double ControlSet::measure_on(int edge_id) const {
  double m = 0.0;
  for (const auto& iv : on(edge_id)) m += iv.length();
  return m;
}

bool ControlSet::contains(int edge_id, double x) const {
  for (const auto& iv : on(edge_id)) {
    if (x > iv.a && x < iv.b) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

std::vector<std::string> validate(const MetricGraph& graph, const ControlSet& omega) {
  std::vector<std::string> out;
  auto say = [&out](const std::string& s) { out.push_back(s); };

  if (graph.num_edges() == 0) say("graph has no edges");

  std::map<int, int> vertex_seen;
  for (const auto& v : graph.vertices()) {
    if (++vertex_seen[v.id] == 2) say("duplicate vertex id " + std::to_string(v.id));
  }
  std::map<int, int> edge_seen;
  for (std::size_t i = 0; i < graph.num_edges(); ++i) {
    const Edge& e = graph.edge(static_cast<int>(i));
    if (++edge_seen[e.id] == 2) say("duplicate edge id " + std::to_string(e.id));
    if (!(e.length > 0.0)) say("edge " + std::to_string(e.id) + ": non-positive length");
    if (!std::isfinite(e.length)) say("edge " + std::to_string(e.id) + ": non-finite length");
    if (!graph.has_vertex_id(e.tail) || !graph.has_vertex_id(e.head)) {
      say("edge " + std::to_string(e.id) + ": endpoint references a missing vertex");
    }
  }
  for (std::size_t i = 0; i < graph.num_vertices(); ++i) {
    const Vertex& v = graph.vertex(static_cast<int>(i));
    const int deg = graph.degree(static_cast<int>(i));
    if (v.bc != BoundaryCondition::Interior && deg != 1) {
      say("vertex " + std::to_string(v.id) + ": " + to_string(v.bc) +
          " condition requires degree 1, found " + std::to_string(deg));
    }
    if (deg == 0) say("vertex " + std::to_string(v.id) + ": isolated vertex");
  }
  for (const auto& [edge_id, iv] : omega.raw()) {
    if (!graph.has_edge_id(edge_id)) {
      say("control interval on missing edge " + std::to_string(edge_id));
      continue;
    }
    const double len = graph.edge(graph.edge_index(edge_id)).length;
    if (!(iv.a < iv.b)) {
      say("edge " + std::to_string(edge_id) + ": empty or reversed control interval");
    } else if (iv.a < 0.0 || iv.b > len + ControlSet::kMergeTolerance) {
      say("edge " + std::to_string(edge_id) + ": interval exceeds edge");
    }
  }
  return out;
}

void require_valid(const MetricGraph& graph, const ControlSet& omega) {
  const auto diags = validate(graph, omega);
  if (diags.empty()) return;
  std::ostringstream os;
  os << "invalid graph:";
  for (const auto& d : diags) os << "\n  " << d;
  throw ValidationError(os.str());
}

// ---------------------------------------------------------------------------

void PointMap::add_piece(int original_edge_id, Piece piece) {
  auto& v = pieces_[original_edge_id];
  reverse_[piece.new_edge_id] = {original_edge_id, v.size()};
  v.push_back(piece);
}

EdgePoint PointMap::to_normalized(const EdgePoint& p) const {
  const auto it = pieces_.find(p.edge);
  if (it == pieces_.end()) throw ValidationError("point on unknown edge " + std::to_string(p.edge));
  const auto& pieces = it->second;
  for (const auto& piece : pieces) {
    if (p.x <= piece.offset + piece.length) {
      return {piece.new_edge_id, std::max(0.0, p.x - piece.offset)};
    }
  }
  const auto& last = pieces.back();
  return {last.new_edge_id, last.length};
}

EdgePoint PointMap::to_original(const EdgePoint& p) const {
  const auto it = reverse_.find(p.edge);
  if (it == reverse_.end()) throw ValidationError("point on unknown edge " + std::to_string(p.edge));
  const auto& piece = pieces_.at(it->second.first)[it->second.second];
  return {it->second.first, piece.offset + p.x};
}

VertexTag NormalizedGraph::tag(int vertex_index) const {
  if (graph.is_exterior(vertex_index)) return VertexTag::WasExterior;
  bool touches_omega = false;
  bool touches_free = false;
  for (const auto& inc : graph.incidences(vertex_index)) {
    (controlled[inc.edge] ? touches_omega : touches_free) = true;
  }
  return touches_omega && touches_free ? VertexTag::OmegaBoundary : VertexTag::Interior;
}

std::size_t NormalizedGraph::num_uncontrolled() const {
  return static_cast<std::size_t>(std::count(controlled.begin(), controlled.end(), false));
}

NormalizedGraph normalize(const MetricGraph& graph, const ControlSet& omega) {
  std::vector<Vertex> vertices = graph.vertices();
  std::vector<Edge> edges;
  std::vector<bool> controlled;
  PointMap map;
  int next_vertex_id = graph.max_vertex_id() + 1;
  int next_edge_id = graph.max_edge_id() + 1;
  constexpr double kEndTol = ControlSet::kMergeTolerance;

  for (const Edge& e : graph.edges()) {
    const auto& ivs = omega.on(e.id);
    std::vector<double> cuts{0.0};
    for (const auto& iv : ivs) {
      for (double c : {iv.a, iv.b}) {
        if (c > kEndTol && c < e.length - kEndTol) cuts.push_back(c);
      }
    }
    cuts.push_back(e.length);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return y - x <= kEndTol; }),
               cuts.end());
    cuts.back() = e.length;

    auto in_omega = [&ivs](double x) {
      return std::any_of(ivs.begin(), ivs.end(),
                         [x](const Interval& iv) { return x > iv.a && x < iv.b; });
    };

    const std::size_t npieces = cuts.size() - 1;
    if (npieces == 1) {
      edges.push_back(e);
      controlled.push_back(in_omega(0.5 * e.length));
      map.add_piece(e.id, {0.0, e.length, e.id});
      continue;
    }
    int prev_vertex = e.tail;
    for (std::size_t k = 0; k < npieces; ++k) {
      int next_vertex = e.head;
      if (k + 1 < npieces) {
        next_vertex = next_vertex_id++;
        vertices.push_back({next_vertex, BoundaryCondition::Interior});
      }
      Edge piece{next_edge_id++, prev_vertex, next_vertex, cuts[k + 1] - cuts[k], {}};
      edges.push_back(piece);
      controlled.push_back(in_omega(0.5 * (cuts[k] + cuts[k + 1])));
      map.add_piece(e.id, {cuts[k], piece.length, piece.id});
      prev_vertex = next_vertex;
    }
  }

  NormalizedGraph ng;
  ng.graph = MetricGraph(std::move(vertices), std::move(edges));
  ng.controlled = std::move(controlled);
  ng.map = std::move(map);
  for (std::size_t i = 0; i < ng.graph.num_edges(); ++i) {
    if (ng.controlled[i]) ng.omega.add_whole_edge(ng.graph, ng.graph.edge(static_cast<int>(i)).id);
  }
  return ng;
}

int UncontrolledComponent::count(VertexTag t) const {
  return static_cast<int>(std::count_if(tags.begin(), tags.end(),
                                        [t](const auto& kv) { return kv.second == t; }));
}

std::vector<UncontrolledComponent> uncontrolled_subgraph(const NormalizedGraph& ng) {
  const MetricGraph& g = ng.graph;
  std::vector<int> parent(g.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (ng.controlled[i]) continue;
    parent[find(g.tail_index(static_cast<int>(i)))] = find(g.head_index(static_cast<int>(i)));
  }

  std::map<int, std::vector<int>> edges_by_root;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (!ng.controlled[i]) edges_by_root[find(g.tail_index(static_cast<int>(i)))].push_back(static_cast<int>(i));
  }

  std::vector<UncontrolledComponent> out;
  for (const auto& [root, edge_indices] : edges_by_root) {
    std::vector<int> vidx;
    for (int ei : edge_indices) {
      vidx.push_back(g.tail_index(ei));
      vidx.push_back(g.head_index(ei));
    }
    std::sort(vidx.begin(), vidx.end());
    vidx.erase(std::unique(vidx.begin(), vidx.end()), vidx.end());

    UncontrolledComponent comp;
    std::vector<Vertex> vs;
    for (int vi : vidx) {
      vs.push_back(g.vertex(vi));
      comp.tags[g.vertex(vi).id] = ng.tag(vi);
    }
    std::vector<Edge> es;
    for (int ei : edge_indices) es.push_back(g.edge(ei));
    comp.graph = MetricGraph(std::move(vs), std::move(es));
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace graphctl
