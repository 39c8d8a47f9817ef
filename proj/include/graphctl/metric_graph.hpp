#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphctl {

enum class BoundaryCondition { Interior, Dirichlet, Neumann };

const char* to_string(BoundaryCondition bc);
BoundaryCondition boundary_condition_from_string(const std::string& s);

struct Vertex {
  int id = 0;
  BoundaryCondition bc = BoundaryCondition::Interior;
};

/// An edge is parameterized by x in [0, length], x = 0 at `tail`.
struct Edge {
  int id = 0;
  int tail = 0;
  int head = 0;
  double length = 1.0;
  std::string length_expr;  // defining expression when the length came from one
};

enum class EdgeEnd { Tail, Head };

/// One end of an edge seen from a vertex. Loops contribute two incidences.
struct Incidence {
  int edge = 0;  // edge index
  EdgeEnd end = EdgeEnd::Tail;
};

struct EdgePoint {
  int edge = 0;  // edge id
  double x = 0.0;
};

/// Thrown by index lookups and loaders when the graph is malformed.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a computation would exceed a resource or precision guard.
class NumericalGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const Vertex& vertex(int index) const { return vertices_.at(index); }
  const Edge& edge(int index) const { return edges_.at(index); }

  bool has_vertex_id(int id) const { return vertex_index_.count(id) != 0; }
  bool has_edge_id(int id) const { return edge_index_.count(id) != 0; }
  int vertex_index(int id) const;
  int edge_index(int id) const;

  int tail_index(int edge_index) const { return tail_index_.at(edge_index); }
  int head_index(int edge_index) const { return head_index_.at(edge_index); }
  int endpoint_index(int edge_index, EdgeEnd end) const {
    return end == EdgeEnd::Tail ? tail_index(edge_index) : head_index(edge_index);
  }

  const std::vector<Incidence>& incidences(int vertex_index) const {
    return incidences_.at(vertex_index);
  }
  int degree(int vertex_index) const {
    return static_cast<int>(incidences_.at(vertex_index).size());
  }
  /// Exterior means degree one, whatever the stored tag says.
  bool is_exterior(int vertex_index) const { return degree(vertex_index) == 1; }

  double total_length() const;
  int max_vertex_id() const;
  int max_edge_id() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<int, int> vertex_index_;
  std::unordered_map<int, int> edge_index_;
  std::vector<int> tail_index_;
  std::vector<int> head_index_;
  std::vector<std::vector<Incidence>> incidences_;
};

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

/// Union of open intervals, stored per edge id.
class ControlSet {
 public:
  static constexpr double kMergeTolerance = 1e-12;

  void add(int edge_id, double a, double b);
  void add_whole_edge(const MetricGraph& g, int edge_id);

  /// Sorted, merged intervals on an edge (empty when the edge is unobserved).
  const std::vector<Interval>& on(int edge_id) const;
  const std::map<int, std::vector<Interval>>& by_edge() const { return intervals_; }
  bool empty() const;

  /// Raw intervals as inserted; `validate` inspects these before merging hides problems.
  const std::vector<std::pair<int, Interval>>& raw() const { return raw_; }

  double measure_on(int edge_id) const;
  bool contains(int edge_id, double x) const;

 private:
  void canonicalize(int edge_id);

  std::map<int, std::vector<Interval>> intervals_;
  std::vector<std::pair<int, Interval>> raw_;
};

std::vector<std::string> validate(const MetricGraph& graph, const ControlSet& omega);
/// Throws ValidationError carrying every diagnostic when `validate` is non-empty.
void require_valid(const MetricGraph& graph, const ControlSet& omega);

/// Where a vertex of a normalized graph sits with respect to the control set.
enum class VertexTag { WasExterior, OmegaBoundary, Interior };

const char* to_string(VertexTag tag);

/// Converts points between the input graph and its normalization.
class PointMap {
 public:
  struct Piece {
    double offset = 0.0;  // start of the piece in original coordinates
    double length = 0.0;
    int new_edge_id = 0;
  };

  EdgePoint to_normalized(const EdgePoint& p) const;
  EdgePoint to_original(const EdgePoint& p) const;

  void add_piece(int original_edge_id, Piece piece);

 private:
  std::map<int, std::vector<Piece>> pieces_;
  std::map<int, std::pair<int, std::size_t>> reverse_;  // new edge id -> (orig id, piece idx)
};

/// A graph in which every edge is either fully inside omega or disjoint from it.
struct NormalizedGraph {
  MetricGraph graph;
  ControlSet omega;
  std::vector<bool> controlled;  // per edge index
  PointMap map;

  VertexTag tag(int vertex_index) const;
  bool is_controlled(int edge_index) const { return controlled.at(edge_index); }
  std::size_t num_uncontrolled() const;
};

NormalizedGraph normalize(const MetricGraph& graph, const ControlSet& omega);

/// A connected piece of the uncontrolled part. Ids are those of the normalized graph.
struct UncontrolledComponent {
  MetricGraph graph;
  std::map<int, VertexTag> tags;  // by vertex id

  int count(VertexTag t) const;
};

std::vector<UncontrolledComponent> uncontrolled_subgraph(const NormalizedGraph& ng);

}  // namespace graphctl
