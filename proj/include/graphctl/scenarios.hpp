#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphctl/metric_graph.hpp"

namespace graphctl {

/// A length given either as a plain value or as an expression (kept for reports).
struct Length {
  double value = 1.0;
  std::string expr;

  Length(double v) : value(v) {}  // NOLINT: implicit on purpose
  Length(const char* e);          // NOLINT
  Length(const std::string& e);   // NOLINT
};

struct Scenario {
  std::string name;
  std::string note;
  MetricGraph graph;
  ControlSet omega;
};

/// Edge 0 from vertex 0 to vertex 1.
Scenario interval_scenario(Length len, BoundaryCondition left, BoundaryCondition right,
                           std::optional<Interval> omega = std::nullopt);

/// Centre 0, edge i from the centre to tip i + 1 (Dirichlet); listed edges fully controlled.
Scenario star_scenario(const std::vector<Length>& lengths, const std::vector<int>& controlled = {0});

enum class XProfile { Dirichlet, Mixed };

/// Centre 0; edges 0, 1 run from tips 1, 2 into the centre with length lb;
/// edges 2, 3 run from the centre to tips 3, 4 with length lt.
/// Mixed puts Neumann on tips 1, 2. omega covers edges 0 and 2, fully or their middle halves.
Scenario x_graph(Length lt, Length lb, XProfile profile = XProfile::Dirichlet, bool whole_edges = true);

/// Three-edge star with edges of length l_i + margin and omega = (l_i, l_i + margin) on each.
Scenario bot_graph(Length l1, Length l2, Length l3, double margin = 1.0);

/// Uncontrolled triangle 0-1-2 with a controlled pendant edge 3 from vertex 0 to a Dirichlet tip.
Scenario triangle_scenario(Length a = 1.0, Length b = 1.0, Length c = "sqrt(2)");

/// Builds a scenario from its name and textual parameters. Throws ValidationError
/// for unknown names or bad parameters.
Scenario make_scenario(const std::string& name, const std::vector<std::string>& params);

/// Names accepted by make_scenario with a short usage string each.
std::vector<std::pair<std::string, std::string>> scenario_usage();

/// The named examples used across the test suites.
std::vector<Scenario> scenario_catalog();

}  // namespace graphctl
