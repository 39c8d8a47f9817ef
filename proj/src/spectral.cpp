#include "graphctl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace graphctl {

double EdgeWave::value(int e, double x) const { return a[e] * std::sin(k * x) + b[e] * std::cos(k * x); }

double EdgeWave::derivative(int e, double x) const {
  return k * (a[e] * std::cos(k * x) - b[e] * std::sin(k * x));
}

double segment_inner(const EdgeWave& u, const EdgeWave& v, int e, double lo, double hi) {
  const double k = u.k;
  auto ss = [k](double x) { return x / 2 - std::sin(2 * k * x) / (4 * k); };
  auto cc = [k](double x) { return x / 2 + std::sin(2 * k * x) / (4 * k); };
  auto sc = [k](double x) {
    const double s = std::sin(k * x);
    return s * s / (2 * k);
  };
  return u.a[e] * v.a[e] * (ss(hi) - ss(lo)) + u.b[e] * v.b[e] * (cc(hi) - cc(lo)) +
         (u.a[e] * v.b[e] + v.a[e] * u.b[e]) * (sc(hi) - sc(lo));
}

double l2_inner(const MetricGraph& g, const EdgeWave& u, const EdgeWave& v) {
  double sum = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    sum += segment_inner(u, v, static_cast<int>(e), 0.0, g.edge(static_cast<int>(e)).length);
  }
  return sum;
}

double l2_norm_sq(const MetricGraph& g, const EdgeWave& u) { return l2_inner(g, u, u); }

namespace {

// Value and outward derivative / k of a germ as coefficient pairs on (a, b).
std::pair<double, double> value_row(const MetricGraph& g, const Incidence& inc, double k) {
  if (inc.end == EdgeEnd::Tail) return {0.0, 1.0};
  const double kl = k * g.edge(inc.edge).length;
  return {std::sin(kl), std::cos(kl)};
}

std::pair<double, double> flux_row(const MetricGraph& g, const Incidence& inc, double k) {
  if (inc.end == EdgeEnd::Tail) return {-1.0, 0.0};
  const double kl = k * g.edge(inc.edge).length;
  return {std::cos(kl), -std::sin(kl)};
}

bool acts_neumann(const MetricGraph& g, int v) {
  return g.degree(v) == 1 && g.vertex(v).bc != BoundaryCondition::Dirichlet;
}

double sigma_min(const MetricGraph& g, double k) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(secular_matrix(g, k));
  return svd.singularValues().minCoeff();
}

double golden_min(const MetricGraph& g, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = sigma_min(g, x1), f2 = sigma_min(g, x2);
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, hi); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = sigma_min(g, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = sigma_min(g, x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// Bond scattering matrix U(k) = S exp(ikD) on directed bonds: 2e runs tail -> head,
// 2e + 1 head -> tail. Its eigenphases turn counterclockwise as k grows, and k > 0 is
// an eigenvalue of multiplicity m exactly when 1 is an eigenvalue of U(k) of multiplicity m.
Eigen::MatrixXcd bond_matrix(const MetricGraph& g, double k) {
  const int n = 2 * static_cast<int>(g.num_edges());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  auto arriving = [](const Incidence& inc) { return 2 * inc.edge + (inc.end == EdgeEnd::Tail ? 1 : 0); };
  auto leaving = [](const Incidence& inc) { return 2 * inc.edge + (inc.end == EdgeEnd::Tail ? 0 : 1); };
  for (std::size_t vi = 0; vi < g.num_vertices(); ++vi) {
    const int v = static_cast<int>(vi);
    const auto& incs = g.incidences(v);
    const double m = static_cast<double>(incs.size());
    for (std::size_t i = 0; i < incs.size(); ++i) {
      const std::complex<double> phase = std::polar(1.0, k * g.edge(incs[i].edge).length);
      for (std::size_t j = 0; j < incs.size(); ++j) {
        double amp = 2.0 / m - (i == j ? 1.0 : 0.0);
        if (incs.size() == 1) amp = acts_neumann(g, v) ? 1.0 : -1.0;
        u(leaving(incs[j]), arriving(incs[i])) += amp * phase;
      }
    }
  }
  return u;
}

// Sum of the eigenphases of U(k), each taken in [0, 2 pi).
double phase_sum(const MetricGraph& g, double k) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(bond_matrix(g, k), false);
  double total = 0.0;
  for (const auto& z : es.eigenvalues()) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    total += a;
  }
  return total;
}

// Local minima of sigma_min on a grid over [lo, hi], refined and kept when they reach the threshold.
std::vector<double> scan_roots(const MetricGraph& g, double lo, double hi, double step, double k_min, double k_max,
                               double threshold) {
  std::vector<double> ks, sv;
  for (double k = std::max(k_min, lo - step); k <= hi + step; k += step) {
    ks.push_back(k);
    sv.push_back(sigma_min(g, k));
  }
  std::vector<double> roots;
  for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
    if (!(sv[i] <= sv[i - 1] && sv[i] <= sv[i + 1])) continue;
    if (sv[i] == sv[i - 1] && sv[i] == sv[i + 1]) continue;
    const double kr = golden_min(g, ks[i - 1], ks[i + 1]);
    if (sigma_min(g, kr) > threshold) continue;
    if (kr > k_max * (1.0 + 1e-12) || kr <= k_min) continue;
    roots.push_back(kr);
  }
  return roots;
}

void add_roots(std::vector<double>& roots, const std::vector<double>& found) {
  for (double k : found) {
    const bool known = std::any_of(roots.begin(), roots.end(),
                                   [k](double r) { return std::abs(k - r) <= 1e-9 * std::max(1.0, k); });
    if (!known) roots.push_back(k);
  }
  std::sort(roots.begin(), roots.end());
}

EdgeWave wave_from(const Eigen::VectorXd& v, double k) {
  EdgeWave w;
  w.k = k;
  const int m = static_cast<int>(v.size()) / 2;
  for (int j = 0; j < m; ++j) {
    w.a.push_back(v(2 * j));
    w.b.push_back(v(2 * j + 1));
  }
  return w;
}

}  // namespace

Eigen::MatrixXd secular_matrix(const MetricGraph& g, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("secular_matrix: k must be positive");
  const int n = 2 * static_cast<int>(g.num_edges());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  int row = 0;
  auto put = [&](int r, const Incidence& inc, std::pair<double, double> c, double sign) {
    M(r, 2 * inc.edge) += sign * c.first;
    M(r, 2 * inc.edge + 1) += sign * c.second;
  };
  for (std::size_t vi = 0; vi < g.num_vertices(); ++vi) {
    const int v = static_cast<int>(vi);
    const auto& incs = g.incidences(v);
    if (incs.empty()) continue;
    if (row + (incs.size() == 1 ? 1 : static_cast<int>(incs.size())) > n) {
      throw ValidationError("secular_matrix: more conditions than unknowns");
    }
    if (incs.size() == 1) {
      if (acts_neumann(g, v)) {
        put(row++, incs[0], flux_row(g, incs[0], k), 1.0);
      } else {
        put(row++, incs[0], value_row(g, incs[0], k), 1.0);
      }
      continue;
    }
    for (std::size_t i = 1; i < incs.size(); ++i) {
      put(row, incs[i], value_row(g, incs[i], k), 1.0);
      put(row, incs[0], value_row(g, incs[0], k), -1.0);
      ++row;
    }
    for (const auto& inc : incs) put(row, inc, flux_row(g, inc, k), 1.0);
    ++row;
  }
  if (row != n) {
    std::ostringstream os;
    os << "secular_matrix: " << row << " conditions for " << n << " unknowns";
    throw ValidationError(os.str());
  }
  return M;
}

int Spectrum::count() const {
  int c = 0;
  for (const auto& p : pairs) c += p.multiplicity;
  return c;
}

Spectrum eigenvalues(const MetricGraph& g, double k_max, const SpectrumOptions& opts) {
  if (!(k_max > 0.0)) throw std::invalid_argument("eigenvalues: k_max must be positive");
  if (g.num_edges() == 0) throw ValidationError("eigenvalues: graph has no edges");
  Spectrum out;
  const double auto_step = std::numbers::pi / (4.0 * g.total_length());
  out.step = opts.step > 0.0 ? std::min(opts.step, auto_step) : auto_step;
  out.constant_mode = true;
  for (const auto& v : g.vertices()) {
    if (v.bc == BoundaryCondition::Dirichlet) out.constant_mode = false;
  }

  std::vector<double> roots;
  add_roots(roots, scan_roots(g, opts.k_floor, k_max, out.step, opts.k_floor, k_max, opts.root_threshold));

  // The winding of the bond-matrix eigenphases counts eigenvalues exactly, so every
  // stretch between neighbouring roots can be checked and rescanned when one is missing.
  const double two_l = 2.0 * g.total_length();
  const double base = phase_sum(g, opts.k_floor);
  auto count_to = [&](double k) {
    return static_cast<int>(std::lround((two_l * (k - opts.k_floor) - phase_sum(g, k) + base) /
                                        (2.0 * std::numbers::pi)));
  };
  auto svd_multiplicity = [&](double k) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(secular_matrix(g, k));
    const auto& s = svd.singularValues();
    return std::max(1, static_cast<int>((s.array() < opts.multiplicity_threshold).count()));
  };

  std::vector<int> counted;
  std::vector<double> seps;
  constexpr int kPasses = 4;
  for (int pass = 0; pass <= kPasses; ++pass) {
    seps.assign(1, opts.k_floor);
    for (std::size_t i = 1; i < roots.size(); ++i) seps.push_back(0.5 * (roots[i - 1] + roots[i]));
    double top = k_max;
    if (!roots.empty() && top - roots.back() < 1e-7 * std::max(1.0, top)) top = roots.back() + 1e-6 * std::max(1.0, top);
    seps.push_back(top);

    counted.clear();
    int below = 0;
    std::vector<double> found;
    for (std::size_t i = 0; i + 1 < seps.size(); ++i) {
      const int upto = count_to(seps[i + 1]);
      counted.push_back(upto - below);
      below = upto;
      const int have = roots.empty() ? 0 : svd_multiplicity(roots[i]);
      if (counted.back() > have && pass < kPasses) {
        const double fine = out.step / std::pow(8.0, pass + 1);
        add_roots(found, scan_roots(g, seps[i], seps[i + 1], fine, opts.k_floor, k_max, opts.root_threshold));
      }
    }
    const std::size_t before = roots.size();
    add_roots(roots, found);
    if (roots.size() == before) break;
  }

  std::vector<int> mults;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const int svd_mult = svd_multiplicity(roots[i]);
    const int c = counted[i];
    mults.push_back(c >= 1 && c <= svd_mult ? c : svd_mult);
    if (c != mults.back()) {
      std::ostringstream os;
      os << "eigenvalue count between " << seps[i] << " and " << seps[i + 1] << " is " << c << " but the root at "
         << roots[i] << " has multiplicity " << svd_mult << "; nearby roots may be missing";
      out.warnings.push_back(os.str());
    }
  }
  if (roots.empty() && !counted.empty() && counted[0] > 0) {
    std::ostringstream os;
    os << counted[0] << " eigenvalues below " << k_max << " were counted but none was located";
    out.warnings.push_back(os.str());
  }

  for (std::size_t r = 0; r < roots.size(); ++r) {
    const double k = roots[r];
    const int mult = mults[r];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(secular_matrix(g, k), Eigen::ComputeFullV);
    const int n = static_cast<int>(svd.singularValues().size());

    std::vector<EdgeWave> raw;
    for (int c = n - mult; c < n; ++c) raw.push_back(wave_from(svd.matrixV().col(c), k));
    Eigen::MatrixXd G(mult, mult);
    for (int p = 0; p < mult; ++p) {
      for (int q = 0; q < mult; ++q) G(p, q) = l2_inner(g, raw[p], raw[q]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const Eigen::MatrixXd T = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();

    EigenPair ep;
    ep.k = k;
    ep.lambda = k * k;
    ep.multiplicity = mult;
    for (int c = 0; c < mult; ++c) {
      EdgeWave w;
      w.k = k;
      w.a.assign(g.num_edges(), 0.0);
      w.b.assign(g.num_edges(), 0.0);
      for (int p = 0; p < mult; ++p) {
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
          w.a[e] += T(p, c) * raw[p].a[e];
          w.b[e] += T(p, c) * raw[p].b[e];
        }
      }
      ep.eigenfunctions.push_back(std::move(w));
    }
    out.pairs.push_back(std::move(ep));
  }
  return out;
}

double vertex_residual(const MetricGraph& g, const EdgeWave& u) {
  double norm = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) norm += u.a[e] * u.a[e] + u.b[e] * u.b[e];
  norm = std::sqrt(norm);
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t vi = 0; vi < g.num_vertices(); ++vi) {
    const int v = static_cast<int>(vi);
    const auto& incs = g.incidences(v);
    if (incs.empty()) continue;
    double lo = 0.0, hi = 0.0, flux = 0.0;
    for (std::size_t i = 0; i < incs.size(); ++i) {
      const auto [va, vb] = value_row(g, incs[i], u.k);
      const auto [fa, fb] = flux_row(g, incs[i], u.k);
      const double val = va * u.a[incs[i].edge] + vb * u.b[incs[i].edge];
      flux += fa * u.a[incs[i].edge] + fb * u.b[incs[i].edge];
      lo = i == 0 ? val : std::min(lo, val);
      hi = i == 0 ? val : std::max(hi, val);
    }
    if (incs.size() == 1) {
      worst = std::max(worst, acts_neumann(g, v) ? std::abs(flux) : std::abs(lo));
    } else {
      worst = std::max({worst, hi - lo, std::abs(flux)});
    }
  }
  return worst / norm;
}

double observation_mass(const MetricGraph& g, const EdgeWave& u, const ControlSet& omega) {
  double mass = 0.0;
  for (const auto& [edge_id, ivs] : omega.by_edge()) {
    if (!g.has_edge_id(edge_id)) continue;
    const int e = g.edge_index(edge_id);
    for (const auto& iv : ivs) mass += segment_inner(u, u, e, iv.a, iv.b);
  }
  return mass;
}

double min_observation_mass(const MetricGraph& g, const EigenPair& ep, const ControlSet& omega) {
  const int m = ep.multiplicity;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [edge_id, ivs] : omega.by_edge()) {
    if (!g.has_edge_id(edge_id)) continue;
    const int e = g.edge_index(edge_id);
    for (const auto& iv : ivs) {
      for (int p = 0; p < m; ++p) {
        for (int q = 0; q < m; ++q) W(p, q) += segment_inner(ep.eigenfunctions[p], ep.eigenfunctions[q], e, iv.a, iv.b);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
  return std::max(0.0, es.eigenvalues().minCoeff());
}

std::vector<ProbeRow> resolvent_probe(const MetricGraph& g, const ControlSet& omega, double k_max,
                                      const SpectrumOptions& opts) {
  std::vector<ProbeRow> rows;
  for (const auto& ep : eigenvalues(g, k_max, opts).pairs) {
    rows.push_back({ep.k, ep.multiplicity, min_observation_mass(g, ep, omega)});
  }
  return rows;
}

double IntervalWave::operator()(double k, double s) const {
  return a * std::sin(k * (s - lo)) + b * std::cos(k * (s - lo));
}

double IntervalWave::norm_sq(double k) const {
  EdgeWave w;
  w.k = k;
  w.a = {a};
  w.b = {b};
  return segment_inner(w, w, 0, 0.0, hi - lo);
}

double SymmetryTriple::norm_sq() const {
  double s = f.norm_sq(k) + g.norm_sq(k);
  for (const auto& piece : h) s += piece.norm_sq(k);
  return s;
}

SymmetryTriple symmetry_decompose(const MetricGraph& g, const EdgeWave& u) {
  auto fail = [](const std::string& why) { throw ValidationError("symmetry_decompose: " + why); };
  if (g.num_edges() != 4 || g.num_vertices() != 5) fail("expected 4 edges and 5 vertices");
  const int c = g.head_index(0);
  if (g.head_index(1) != c || g.tail_index(2) != c || g.tail_index(3) != c) {
    fail("edges 0,1 must end at the centre and edges 2,3 start there");
  }
  const double lb = g.edge(0).length, lt = g.edge(2).length;
  auto same = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(x, y); };
  if (!same(lb, g.edge(1).length) || !same(lt, g.edge(3).length)) fail("paired edges must have equal lengths");
  if (u.a.size() != 4 || u.b.size() != 4) fail("wave does not match the graph");

  SymmetryTriple t;
  t.k = u.k;
  t.f = {-lb, 0.0, (u.a[0] - u.a[1]) / 2, (u.b[0] - u.b[1]) / 2};
  t.g = {0.0, lt, (u.a[2] - u.a[3]) / 2, (u.b[2] - u.b[3]) / 2};
  t.h = {{-lb, 0.0, (u.a[0] + u.a[1]) / 2, (u.b[0] + u.b[1]) / 2},
         {0.0, lt, (u.a[2] + u.a[3]) / 2, (u.b[2] + u.b[3]) / 2}};
  return t;
}

bool WeylCount::within() const { return std::abs(counted - predicted) <= tolerance; }

WeylCount weyl_count_check(const MetricGraph& g, const Spectrum& s, double k_max) {
  WeylCount w;
  for (const auto& p : s.pairs) {
    if (p.k <= k_max * (1.0 + 1e-12)) w.counted += p.multiplicity;
  }
  w.predicted = g.total_length() * k_max / std::numbers::pi;
  w.tolerance = static_cast<double>(g.num_vertices()) + 2.0;
  return w;
}

WeylCount weyl_count_check(const MetricGraph& g, double k_max, const SpectrumOptions& opts) {
  return weyl_count_check(g, eigenvalues(g, k_max, opts), k_max);
}

}  // namespace graphctl
