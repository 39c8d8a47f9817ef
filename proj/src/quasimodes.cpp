#include "graphctl/quasimodes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace graphctl {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ViolatingPath find_violating_path(const NormalizedGraph& ng) {
  const CycleCheck c = check_cycles_and_exterior_paths(ng);
  if (c.holds) throw ValidationError("find_violating_path: the GGCC holds, no uncontrolled path to use");
  ViolatingPath vp;
  vp.path = *c.witness;
  for (const auto& s : vp.path.steps) {
    vp.lengths.push_back(ng.graph.edge(ng.graph.edge_index(s.edge)).length);
  }
  vp.total_length = vp.path.total_length;
  return vp;
}

double Quasimode::value(int edge_id, double x) const {
  const auto it = profiles.find(edge_id);
  if (it == profiles.end()) return 0.0;
  return it->second.amplitude * std::sin(it->second.frequency * x);
}

Quasimode build_quasimode(const NormalizedGraph& ng, const ViolatingPath& vp, int n) {
  const MetricGraph& g = ng.graph;
  if (n < 1) throw std::domain_error("build_quasimode: n must be positive");
  const long double L = vp.total_length;

  // Ends of a non-periodic path are exterior vertices; they must be Dirichlet.
  if (!vp.path.periodic) {
    const auto& first = vp.path.steps.front();
    const auto& last = vp.path.steps.back();
    const int e0 = g.edge_index(first.edge), e1 = g.edge_index(last.edge);
    const int v0 = first.dir == Direction::Forward ? g.tail_index(e0) : g.head_index(e0);
    const int v1 = last.dir == Direction::Forward ? g.head_index(e1) : g.tail_index(e1);
    for (int v : {v0, v1}) {
      if (g.vertex(v).bc == BoundaryCondition::Neumann) {
        throw ValidationError("build_quasimode: the path ends at a Neumann vertex (id " +
                              std::to_string(g.vertex(v).id) + "); the construction needs Dirichlet ends");
      }
    }
  }

  const double max_len = *std::max_element(vp.lengths.begin(), vp.lengths.end());
  // q >= floor(sqrt(n)), so the phase cap can be checked before the search.
  const double q_floor = std::floor(std::sqrt(static_cast<double>(n)));
  if (static_cast<double>(kTwoPi) * q_floor / vp.total_length * max_len > kMaxQuasimodePhase) {
    throw NumericalGuardError("build_quasimode: n = " + std::to_string(n) +
                              " forces mu * max length above the cap of 1e5; use a smaller n");
  }

  std::vector<double> alphas;
  for (double l : vp.lengths) alphas.push_back(static_cast<double>(l / L));

  Quasimode qm;
  qm.n = n;
  qm.path = vp.path;
  qm.total_length = vp.total_length;
  qm.approximation = dirichlet_simultaneous(alphas, n);
  qm.q = qm.approximation.q;
  qm.mu = static_cast<double>(kTwoPi * static_cast<long double>(qm.q) / L);

  if (qm.mu * max_len > kMaxQuasimodePhase) {
    throw NumericalGuardError("build_quasimode: mu * max length = " + std::to_string(qm.mu * max_len) +
                              " exceeds the cap of 1e5; use a smaller n");
  }

  const double amp = std::sqrt(2.0 / vp.total_length);
  for (std::size_t j = 0; j < vp.path.steps.size(); ++j) {
    const std::int64_t p = qm.approximation.p[j];
    if (p < 1) {
      throw std::domain_error("build_quasimode: p_" + std::to_string(j) + " = " + std::to_string(p) +
                              " < 1 at n = " + std::to_string(n) + "; retry with a larger n");
    }
    EdgeProfile prof;
    prof.p = p;
    prof.frequency = static_cast<double>(kTwoPi * p / static_cast<long double>(vp.lengths[j]));
    prof.epsilon = static_cast<double>(static_cast<long double>(p) -
                                       static_cast<long double>(qm.q) * vp.lengths[j] / L);
    // sin(mu (l - x)) = -sin(mu x) when mu l is a multiple of 2 pi.
    const double sign = vp.path.steps[j].dir == Direction::Forward ? 1.0 : -1.0;
    prof.amplitude = sign * amp / prof.frequency;
    qm.profiles[vp.path.steps[j].edge] = prof;
  }

  // Domain residuals, evaluated from the profiles at every vertex.
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const int vi = static_cast<int>(v);
    double lo = 0.0, hi = 0.0, flux = 0.0;
    bool first = true;
    for (const auto& inc : g.incidences(vi)) {
      const Edge& e = g.edge(inc.edge);
      const double x = inc.end == EdgeEnd::Tail ? 0.0 : e.length;
      const double val = qm.value(e.id, x);
      double der = 0.0;
      if (const auto it = qm.profiles.find(e.id); it != qm.profiles.end()) {
        der = it->second.amplitude * it->second.frequency * std::cos(it->second.frequency * x);
      }
      const double outward = inc.end == EdgeEnd::Tail ? -der : der;
      lo = first ? val : std::min(lo, val);
      hi = first ? val : std::max(hi, val);
      first = false;
      flux += outward;
      if (g.is_exterior(vi)) {
        const double r = g.vertex(vi).bc == BoundaryCondition::Neumann ? std::abs(outward) : std::abs(val);
        qm.boundary_residual = std::max(qm.boundary_residual, r);
      }
    }
    qm.continuity_residual = std::max(qm.continuity_residual, hi - lo);
    if (!g.is_exterior(vi)) qm.flux_residual = std::max(qm.flux_residual, std::abs(flux));
  }
  return qm;
}

double MetricValue::relative_gap() const {
  const double scale = std::max(std::abs(closed_form), std::abs(quadrature));
  return scale == 0.0 ? 0.0 : std::abs(closed_form - quadrature) / scale;
}

QuasimodeMetrics metrics(const NormalizedGraph& ng, const Quasimode& qm) {
  QuasimodeMetrics m;
  // Each edge contributes its weight len / L, and the weights of a path sum to one.
  m.grad_norm_sq.closed_form = 1.0;
  const double L = qm.total_length;
  const double mu = qm.mu;
  for (const auto& [edge_id, prof] : qm.profiles) {
    const double len = ng.graph.edge(ng.graph.edge_index(edge_id)).length;
    const double w = len / L;
    const double shrink = 1.0 - prof.epsilon / static_cast<double>(prof.p);
    const double t = prof.epsilon * (kTwoPi / len + mu / static_cast<double>(prof.p));
    m.l2_norm_sq.closed_form += w * shrink * shrink / (mu * mu);
    m.defect_sq.closed_form += w * t * t;

    // Composite Gauss-Legendre, one 20-node panel per wavelength.
    const double A = prof.amplitude, k = prof.frequency;
    const auto panels = std::max<std::int64_t>(1, prof.p);
    const double h = len / static_cast<double>(panels);
    using Gauss = boost::math::quadrature::gauss<double, 20>;
    for (std::int64_t i = 0; i < panels; ++i) {
      const double a = h * static_cast<double>(i), b = a + h;
      m.l2_norm_sq.quadrature += Gauss::integrate(
          [&](double x) { const double u = A * std::sin(k * x); return u * u; }, a, b);
      m.grad_norm_sq.quadrature += Gauss::integrate(
          [&](double x) { const double du = A * k * std::cos(k * x); return du * du; }, a, b);
      m.defect_sq.quadrature += Gauss::integrate(
          [&](double x) {
            const double u = A * std::sin(k * x);
            const double r = -k * k * u + mu * mu * u;
            return r * r;
          },
          a, b);
    }
  }
  return m;
}

std::vector<ResolventTerm> x_graph_resolvent_sequence(const Number& ell, int depth) {
  if (ell.value <= 0) throw std::invalid_argument("x_graph_resolvent_sequence: ell must be positive");
  const ContinuedFraction cf = continued_fraction(ell, std::max(depth, 1) + 1);
  const auto cs = convergents(ell, cf);

  std::vector<std::pair<std::int64_t, std::int64_t>> pq;
  if (cf.rational) {
    const auto& last = cs.back();
    for (int n = 1; n <= depth; ++n) pq.emplace_back(n * last.p, n * last.q);
  } else {
    for (std::size_t i = 0; i < cs.size() && static_cast<int>(pq.size()) < depth; ++i) {
      if (cs[i].p >= 1) pq.emplace_back(cs[i].p, cs[i].q);
    }
  }

  std::vector<ResolventTerm> out;
  const Real l = ell.value;
  const Real pi = boost::math::constants::pi<Real>();
  for (std::size_t i = 0; i < pq.size(); ++i) {
    const Real p = pq[i].first, q = pq[i].second;
    ResolventTerm t;
    t.n = static_cast<int>(i) + 1;
    t.p = pq[i].first;
    t.q = pq[i].second;
    const Real gap = q * l - p;  // rounds to zero only when ell = p/q
    const Real diff = gap * (q * l + p) / (l * l);  // q^2 - p^2 / ell^2
    t.l2_norm_sq = (Real(1) / 2 + l * l * l * q * q / (2 * p * p)).convert_to<double>();
    t.defect_sq = (l * l * l * pi * pi * pi * pi * q * q / (2 * p * p) * diff * diff).convert_to<double>();
    t.quality = (q * boost::multiprecision::abs(gap)).convert_to<double>();
    if (boost::multiprecision::abs(gap) <= 100 * ell.uncertainty * q) {
      t.defect_sq = 0.0;
      t.quality = 0.0;
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace graphctl
