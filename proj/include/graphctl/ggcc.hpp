#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphctl/metric_graph.hpp"

namespace graphctl {

enum class Direction { Forward, Backward };  // Forward runs tail -> head

struct PathStep {
  int edge = 0;  // edge id
  Direction dir = Direction::Forward;
};

/// A walk on the graph. `start` and `end` are edge-local coordinates on the
/// first and last edge; interior steps traverse their edge completely.
struct GraphPath {
  std::vector<PathStep> steps;
  double start = 0.0;
  double end = 0.0;
  double total_length = 0.0;
  bool periodic = false;  // the step sequence repeats after the last step

  /// Builds a path made of full edges and fills in coordinates and length.
  static GraphPath full_edges(const MetricGraph& g, std::vector<PathStep> steps, bool periodic = false);
  /// Length of the portion traversed on step `i`.
  double portion(const MetricGraph& g, std::size_t i) const;
};

struct River {
  GraphPath path;
  bool source_at_start = true;  // which end lies on the boundary of omega
  bool source_at_end = false;
};

struct Watershed {
  std::vector<River> rivers;
};

/// Injective map from each uncontrolled edge id to an incident non-exterior vertex id.
using AbpCertificate = std::map<int, int>;

enum class Criterion {
  BoundedPaths,             // every long enough path meets omega
  CyclesAndExteriorPaths,   // cycles and exterior-to-exterior paths meet omega
  Forest,                   // uncontrolled part is a forest, <= 1 exterior vertex per tree
  PeriodicPaths,            // every periodic path meets omega
  Abp,                      // acyclic + injective edge -> interior vertex map
  WatershedCondition,       // a watershed exists
};

const char* to_string(Criterion c);
inline constexpr Criterion kAllCriteria[] = {
    Criterion::BoundedPaths, Criterion::CyclesAndExteriorPaths, Criterion::Forest,
    Criterion::PeriodicPaths, Criterion::Abp, Criterion::WatershedCondition};

struct GgccVerdict {
  bool holds = false;
  bool criteria_agree = true;
  std::map<Criterion, bool> criteria;
  std::optional<GraphPath> violating_path;  // cycle or exterior-to-exterior path
  std::optional<GraphPath> periodic_path;
  std::optional<AbpCertificate> abp;
  std::optional<Watershed> watershed;
  std::optional<double> ggcc_length;
  std::optional<double> optimal_time;
};

struct CycleCheck {
  bool holds = true;
  std::optional<GraphPath> witness;
};

// All of the following take a normalized graph.

CycleCheck check_cycles_and_exterior_paths(const NormalizedGraph& ng);
bool check_forest(const NormalizedGraph& ng);

struct AbpCheck {
  bool holds = false;
  std::optional<AbpCertificate> certificate;
};
AbpCheck check_abp(const NormalizedGraph& ng);

std::optional<Watershed> construct_watershed(const NormalizedGraph& ng);
/// Checks the four watershed conditions; reasons for failure go to `why` when given.
bool verify_watershed(const NormalizedGraph& ng, const Watershed& w, std::string* why = nullptr);

/// Depth-bounded search for a periodic walk avoiding omega. Complete when
/// max_steps >= 2|E| + 2.
std::optional<GraphPath> periodic_path_search(const NormalizedGraph& ng, int max_steps);

/// Supremum of the lengths of walks avoiding omega, from the state graph of
/// (edge, direction) pairs; nullopt when it is infinite.
std::optional<double> longest_avoiding_walk(const NormalizedGraph& ng);

/// Per-tree closed form: diameter, or twice the reach of the exterior vertex.
std::optional<double> ggcc_length(const NormalizedGraph& ng);

struct OptimalTime {
  double t_star = 0.0;
  double max_river = 0.0;
  std::vector<double> per_tree_budget;
};

/// Twice the least achievable longest-river length over all watersheds.
std::optional<OptimalTime> optimal_watershed_time(const NormalizedGraph& ng);

GgccVerdict check_ggcc(const NormalizedGraph& ng, bool with_certificates = true);

}  // namespace graphctl
