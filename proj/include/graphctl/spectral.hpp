#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphctl/metric_graph.hpp"

namespace graphctl {

/// u_j(x) = a_j sin(kx) + b_j cos(kx) on every edge (indexed like the graph's edges).
struct EdgeWave {
  double k = 0.0;
  std::vector<double> a;
  std::vector<double> b;

  double value(int edge_index, double x) const;
  double derivative(int edge_index, double x) const;
};

/// Integral of the product of two waves with the same k over [lo, hi] of one edge.
double segment_inner(const EdgeWave& u, const EdgeWave& v, int edge_index, double lo, double hi);
double l2_inner(const MetricGraph& g, const EdgeWave& u, const EdgeWave& v);
double l2_norm_sq(const MetricGraph& g, const EdgeWave& u);

/// Largest vertex-condition residual, relative to the coefficient norm.
double vertex_residual(const MetricGraph& g, const EdgeWave& u);

struct EigenPair {
  double k = 0.0;
  double lambda = 0.0;
  int multiplicity = 0;
  std::vector<EdgeWave> eigenfunctions;  // L2-orthonormal
};

struct SpectrumOptions {
  double k_floor = 1e-6;
  double root_threshold = 1e-8;
  double multiplicity_threshold = 1e-5;
  double step = 0.0;  // 0 picks pi / (4 * total length)
};

struct Spectrum {
  std::vector<EigenPair> pairs;
  std::vector<std::string> warnings;
  bool constant_mode = false;  // no Dirichlet vertex: k = 0 is an eigenvalue, not listed
  double step = 0.0;

  int count() const;  // with multiplicity
};

/// Rows: continuity and Kirchhoff at interior vertices, the boundary condition at
/// exterior ones. Derivative rows are divided by k.
Eigen::MatrixXd secular_matrix(const MetricGraph& g, double k);

Spectrum eigenvalues(const MetricGraph& g, double k_max, const SpectrumOptions& opts = {});

/// Integral of u^2 over omega.
double observation_mass(const MetricGraph& g, const EdgeWave& u, const ControlSet& omega);

/// Least observation mass over unit vectors of the eigenspace.
double min_observation_mass(const MetricGraph& g, const EigenPair& ep, const ControlSet& omega);

struct ProbeRow {
  double k = 0.0;
  int multiplicity = 0;
  double min_mass = 0.0;  // least observation mass over the unit sphere of the eigenspace
};

std::vector<ProbeRow> resolvent_probe(const MetricGraph& g, const ControlSet& omega, double k_max,
                                      const SpectrumOptions& opts = {});

/// a sin(k (s - lo)) + b cos(k (s - lo)) on (lo, hi).
struct IntervalWave {
  double lo = 0.0;
  double hi = 0.0;
  double a = 0.0;
  double b = 0.0;

  double operator()(double k, double s) const;
  double norm_sq(double k) const;
};

struct SymmetryTriple {
  double k = 0.0;
  IntervalWave f;                 // on (-l_b, 0)
  IntervalWave g;                 // on (0, l_t)
  std::vector<IntervalWave> h;    // on (-l_b, 0) and (0, l_t)

  double norm_sq() const;  // ||f||^2 + ||g||^2 + ||h||^2
};

/// Needs the X layout: four edges, the first two pointing into the centre with
/// equal lengths, the last two leaving it with equal lengths. Throws ValidationError otherwise.
SymmetryTriple symmetry_decompose(const MetricGraph& g, const EdgeWave& u);

struct WeylCount {
  int counted = 0;
  double predicted = 0.0;
  double tolerance = 0.0;
  bool within() const;
};

WeylCount weyl_count_check(const MetricGraph& g, double k_max, const SpectrumOptions& opts = {});
WeylCount weyl_count_check(const MetricGraph& g, const Spectrum& s, double k_max);

}  // namespace graphctl
