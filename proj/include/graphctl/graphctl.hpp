#pragma once

#include "graphctl/diophantine.hpp"
#include "graphctl/ggcc.hpp"
#include "graphctl/graph_io.hpp"
#include "graphctl/metric_graph.hpp"
#include "graphctl/numbers.hpp"
#include "graphctl/quasimodes.hpp"
#include "graphctl/scenarios.hpp"
#include "graphctl/spectral.hpp"
#include "graphctl/wavesim.hpp"

namespace graphctl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace graphctl
