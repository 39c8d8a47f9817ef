#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "graphctl/diophantine.hpp"
#include "graphctl/ggcc.hpp"
#include "graphctl/metric_graph.hpp"

namespace graphctl {

/// An uncontrolled cycle or exterior-to-exterior path with its edge lengths in order.
struct ViolatingPath {
  GraphPath path;
  std::vector<double> lengths;
  double total_length = 0.0;
};

/// Throws ValidationError when the GGCC holds (no such path exists).
ViolatingPath find_violating_path(const NormalizedGraph& ng);

/// Profile on one edge, in the edge's own coordinate: amplitude * sin(frequency * x).
/// Edges traversed backwards by the path carry a negative amplitude.
struct EdgeProfile {
  double amplitude = 0.0;
  double frequency = 0.0;
  std::int64_t p = 0;      // frequency * length = 2 pi p
  double epsilon = 0.0;    // p - q * length / L
};

struct Quasimode {
  int n = 0;
  double mu = 0.0;
  std::int64_t q = 0;
  double total_length = 0.0;
  GraphPath path;
  std::map<int, EdgeProfile> profiles;  // by edge id; absent edges carry zero
  SimultaneousApproximation approximation;

  double continuity_residual = 0.0;  // max value jump at any vertex
  double flux_residual = 0.0;        // max |sum of outward derivatives| at interior vertices
  double boundary_residual = 0.0;    // max violation of exterior conditions

  double value(int edge_id, double x) const;
};

/// Cap on mu * max edge length; larger requests throw NumericalGuardError.
inline constexpr double kMaxQuasimodePhase = 1e5;

/// Throws std::domain_error when n is too small for every p_j >= 1, and
/// ValidationError when the path ends at a Neumann vertex.
Quasimode build_quasimode(const NormalizedGraph& ng, const ViolatingPath& vp, int n);

struct MetricValue {
  double closed_form = 0.0;
  double quadrature = 0.0;
  double relative_gap() const;
};

struct QuasimodeMetrics {
  MetricValue l2_norm_sq;
  MetricValue grad_norm_sq;
  MetricValue defect_sq;  // || (Delta + mu^2) u ||^2
};

QuasimodeMetrics metrics(const NormalizedGraph& ng, const Quasimode& qm);

struct ResolventTerm {
  int n = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  double l2_norm_sq = 0.0;
  double defect_sq = 0.0;
  double quality = 0.0;  // q |q ell - p|
};

/// Closed-form resolvent test functions on the X graph with branch lengths 1 and ell:
/// sin(q pi x) on the unit branch, (ell q / p) sin(p pi x / ell) on the other.
/// Uses convergents of ell, or multiples (n p, n q) when ell = p/q is rational.
std::vector<ResolventTerm> x_graph_resolvent_sequence(const Number& ell, int depth);

}  // namespace graphctl
