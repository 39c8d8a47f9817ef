#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphctl/metric_graph.hpp"

namespace graphctl {

/// Piecewise-constant function on [breaks.front(), breaks.back()].
struct PiecewiseConstant {
  std::vector<double> breaks;  // strictly increasing, size = values.size() + 1
  std::vector<double> values;

  static PiecewiseConstant constant(double length, double value = 0.0);
  double at(double x) const;
  double integral_sq() const;
};

/// Riemann invariants on one edge: r = (u_t + u_x)/2 moves toward x = 0,
/// s = (u_t - u_x)/2 moves toward x = length.
struct EdgeField {
  PiecewiseConstant r;
  PiecewiseConstant s;
};

struct WaveState {
  double time = 0.0;
  std::vector<EdgeField> fields;  // by edge index

  static WaveState zero(const MetricGraph& g, double time = 0.0);
};

/// Energy (1/2) int (u_t^2 + u_x^2) = int (r^2 + s^2).
double energy(const WaveState& state);
std::vector<double> edge_energies(const WaveState& state);

/// (2/m) 1 1^T - I.
Eigen::MatrixXd scattering_matrix(int degree);

/// Outgoing characteristic values at a vertex of the given degree. Degree-one
/// vertices reflect with -1 (Dirichlet) or +1 (Neumann or untagged).
std::vector<double> scatter(int degree, BoundaryCondition bc, const std::vector<double>& incoming);

/// Time reversal: (r, s) -> (-s, -r).
WaveState time_reversed(const WaveState& state);

struct SimOptions {
  std::size_t max_breakpoints = 1000000;
  double merge_tolerance = 1e-13;
};

/// Exact characteristic transport. Keeps the full history of every channel so
/// observation integrals over any past window can be evaluated exactly.
class WaveSimulator {
 public:
  WaveSimulator(const MetricGraph& g, const WaveState& initial, SimOptions opts = {});

  void advance_to(double t);
  double time() const { return t_; }
  WaveState state() const;
  std::size_t live_breakpoints() const;
  std::size_t events() const { return events_; }

  /// int_{t_from}^{t_to} int_omega (r + s)^2 dx dt; needs start <= t_from <= t_to <= time().
  double observed_energy(const ControlSet& omega, double t_from, double t_to) const;

 private:
  struct Channel {
    int edge = 0;
    bool left = true;      // r channel (exits at the tail) when true
    double begin = 0.0;    // start of the first stored piece
    std::vector<double> ends;
    std::vector<double> values;
    std::size_t front = 0;  // first piece that has not fully exited
  };

  int channel_out_of(const Incidence& inc) const;  // channel arriving at the vertex through inc
  int channel_into(const Incidence& inc) const;    // channel leaving the vertex through inc
  void append(Channel& c, double end, double value);
  double window_integral(int edge, double a, double b, double t_from, double t_to) const;

  const MetricGraph& g_;
  SimOptions opts_;
  double start_ = 0.0;
  double t_ = 0.0;
  std::size_t events_ = 0;
  std::vector<Channel> channels_;  // 2 * edge + (0 for r, 1 for s)
};

WaveState evolve(const MetricGraph& g, const WaveState& state, double T, const SimOptions& opts = {});

/// int_0^T int_omega |u_t|^2 for the solution starting from `initial`.
double observed_energy(const MetricGraph& g, const WaveState& initial, const ControlSet& omega, double T,
                       const SimOptions& opts = {});

struct Pulse {
  enum class Kind { LeftMover, RightMover, Velocity };
  int edge = 0;  // edge id
  double center = 0.0;
  double width = 0.0;
  Kind kind = Kind::Velocity;
  double amplitude = 1.0;
};

const char* to_string(Pulse::Kind k);

/// Sum of box pulses; a Velocity pulse of amplitude A sets u_t = A, u_x = 0.
WaveState make_state(const MetricGraph& g, const std::vector<Pulse>& pulses, double time = 0.0);

struct Probe {
  std::string label;
  std::vector<Pulse> pulses;
};

/// Per edge: centres at (k + 1/2) l / 16, width l / 32, each of the three kinds.
std::vector<Probe> grid_probes(const MetricGraph& g);
/// Pulses hugging the ends of uncontrolled edges and moving inward, and
/// opposite-sign pairs converging on each vertex with two or more uncontrolled edges.
std::vector<Probe> adversarial_probes(const NormalizedGraph& ng);

enum class ProbeFamily { All, Grid, Adversarial };

struct ObservabilityResult {
  double ratio = 0.0;
  Probe argmin;
  std::size_t probes = 0;
};

/// min over probes of observed energy / initial energy, on the normalized graph.
ObservabilityResult observability_ratio(const MetricGraph& g, const ControlSet& omega, double T,
                                        ProbeFamily family = ProbeFamily::All, const SimOptions& opts = {});

struct TraceRow {
  double t = 0.0;
  std::vector<double> edge_energy;
  double observed = 0.0;  // cumulative since the start
};

std::vector<TraceRow> trace(const MetricGraph& g, const WaveState& initial, const ControlSet& omega, double T,
                            double dt, const SimOptions& opts = {});

}  // namespace graphctl
