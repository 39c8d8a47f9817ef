#pragma once

#include <string>

#include "graphctl/metric_graph.hpp"

namespace graphctl {

struct GraphInput {
  MetricGraph graph;
  ControlSet omega;
};

/// Parses the graph JSON format. Lengths are numbers or {"expr": "..."}.
/// Throws ValidationError on malformed documents and on graphs failing `validate`.
GraphInput parse_graph_json(const std::string& text);
GraphInput load_graph_file(const std::string& path);

std::string to_graph_json(const MetricGraph& g, const ControlSet& omega, int indent = 2);

/// FNV-1a 64-bit digest, printed as 16 hex digits.
std::string digest(const std::string& text);

}  // namespace graphctl
