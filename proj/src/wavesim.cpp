#include "graphctl/wavesim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace graphctl {

PiecewiseConstant PiecewiseConstant::constant(double length, double value) {
  return {{0.0, length}, {value}};
}

double PiecewiseConstant::at(double x) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  if (it == breaks.begin()) return values.front();
  const std::size_t i = std::min<std::size_t>(it - breaks.begin() - 1, values.size() - 1);
  return values[i];
}

double PiecewiseConstant::integral_sq() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * values[i] * (breaks[i + 1] - breaks[i]);
  return s;
}

WaveState WaveState::zero(const MetricGraph& g, double time) {
  WaveState w;
  w.time = time;
  for (const auto& e : g.edges()) {
    w.fields.push_back({PiecewiseConstant::constant(e.length), PiecewiseConstant::constant(e.length)});
  }
  return w;
}

std::vector<double> edge_energies(const WaveState& state) {
  std::vector<double> out;
  for (const auto& f : state.fields) out.push_back(f.r.integral_sq() + f.s.integral_sq());
  return out;
}

double energy(const WaveState& state) {
  double s = 0.0;
  for (double e : edge_energies(state)) s += e;
  return s;
}

Eigen::MatrixXd scattering_matrix(int m) {
  if (m < 1) throw std::invalid_argument("scattering_matrix: degree must be positive");
  return Eigen::MatrixXd::Constant(m, m, 2.0 / m) - Eigen::MatrixXd::Identity(m, m);
}

std::vector<double> scatter(int degree, BoundaryCondition bc, const std::vector<double>& in) {
  if (static_cast<int>(in.size()) != degree) throw std::invalid_argument("scatter: need one value per edge end");
  if (degree == 1) return {bc == BoundaryCondition::Dirichlet ? -in[0] : in[0]};
  double sum = 0.0;
  for (double a : in) sum += a;
  const double c = 2.0 * sum / degree;
  std::vector<double> out;
  for (double a : in) out.push_back(c - a);
  return out;
}

WaveState time_reversed(const WaveState& state) {
  WaveState w = state;
  for (auto& f : w.fields) {
    std::swap(f.r, f.s);
    for (double& v : f.r.values) v = -v;
    for (double& v : f.s.values) v = -v;
  }
  return w;
}

// ---------------------------------------------------------------------------

WaveSimulator::WaveSimulator(const MetricGraph& g, const WaveState& initial, SimOptions opts)
    : g_(g), opts_(opts), start_(initial.time), t_(initial.time) {
  if (initial.fields.size() != g.num_edges()) throw ValidationError("WaveSimulator: state does not match the graph");
  channels_.resize(2 * g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const double len = g.edge(static_cast<int>(e)).length;
    const auto& f = initial.fields[e];
    for (const auto* pc : {&f.r, &f.s}) {
      if (pc->breaks.size() != pc->values.size() + 1 || std::abs(pc->breaks.front()) > 1e-12 ||
          std::abs(pc->breaks.back() - len) > 1e-12 * std::max(1.0, len)) {
        throw ValidationError("WaveSimulator: field on edge " + std::to_string(g.edge(static_cast<int>(e)).id) +
                              " does not span [0, length]");
      }
    }
    // r(x, t) = R(t + x): exit time grows with x.
    Channel& r = channels_[2 * e];
    r.edge = static_cast<int>(e);
    r.left = true;
    r.begin = t_;
    for (std::size_t i = 0; i < f.r.values.size(); ++i) {
      append(r, t_ + (i + 1 == f.r.values.size() ? len : f.r.breaks[i + 1]), f.r.values[i]);
    }
    // s(x, t) = S(t + len - x): exit time grows as x decreases.
    Channel& s = channels_[2 * e + 1];
    s.edge = static_cast<int>(e);
    s.left = false;
    s.begin = t_;
    for (std::size_t i = f.s.values.size(); i-- > 0;) {
      append(s, t_ + len - f.s.breaks[i], f.s.values[i]);
    }
  }
}

int WaveSimulator::channel_out_of(const Incidence& inc) const {
  return 2 * inc.edge + (inc.end == EdgeEnd::Tail ? 0 : 1);
}

int WaveSimulator::channel_into(const Incidence& inc) const {
  return 2 * inc.edge + (inc.end == EdgeEnd::Tail ? 1 : 0);
}

void WaveSimulator::append(Channel& c, double end, double value) {
  if (c.ends.size() > c.front && std::abs(c.values.back() - value) <= opts_.merge_tolerance) {
    c.ends.back() = end;
    return;
  }
  const double last = c.ends.empty() ? c.begin : c.ends.back();
  if (end <= last) return;
  c.ends.push_back(end);
  c.values.push_back(value);
}

std::size_t WaveSimulator::live_breakpoints() const {
  std::size_t n = 0;
  for (const auto& c : channels_) n += c.ends.size() - c.front;
  return n;
}

void WaveSimulator::advance_to(double T) {
  if (T < t_) throw std::invalid_argument("WaveSimulator: cannot run backwards");
  std::vector<double> incoming;
  while (t_ < T) {
    double next = T;
    for (const auto& c : channels_) next = std::min(next, c.ends[c.front]);
    // Values leaving each channel are constant on [t_, next).
    for (std::size_t vi = 0; vi < g_.num_vertices(); ++vi) {
      const int v = static_cast<int>(vi);
      const auto& incs = g_.incidences(v);
      if (incs.empty()) continue;
      incoming.clear();
      for (const auto& inc : incs) {
        const Channel& c = channels_[channel_out_of(inc)];
        incoming.push_back(c.values[c.front]);
      }
      const auto out = scatter(static_cast<int>(incs.size()), g_.vertex(v).bc, incoming);
      for (std::size_t i = 0; i < incs.size(); ++i) {
        Channel& c = channels_[channel_into(incs[i])];
        append(c, next + g_.edge(c.edge).length, out[i]);
      }
    }
    t_ = next;
    const double snap = 1e-13 * std::max(1.0, std::abs(t_));
    for (auto& c : channels_) {
      while (c.front + 1 < c.ends.size() && c.ends[c.front] <= t_ + snap) ++c.front;
    }
    ++events_;
    if (live_breakpoints() > opts_.max_breakpoints) {
      std::ostringstream os;
      os << "wave simulation aborted at t = " << t_ << ": " << live_breakpoints()
         << " live breakpoints exceed the cap of " << opts_.max_breakpoints;
      throw NumericalGuardError(os.str());
    }
  }
}

WaveState WaveSimulator::state() const {
  WaveState w;
  w.time = t_;
  for (std::size_t e = 0; e < g_.num_edges(); ++e) {
    const double len = g_.edge(static_cast<int>(e)).length;
    EdgeField f;
    for (int which = 0; which < 2; ++which) {
      const Channel& c = channels_[2 * e + which];
      // Pieces covering exit times [t, t + len).
      std::vector<double> taus{t_};
      std::vector<double> vals;
      for (std::size_t i = c.front; i < c.ends.size() && taus.back() < t_ + len; ++i) {
        const double end = std::min(c.ends[i], t_ + len);
        if (end <= taus.back()) continue;
        taus.push_back(end);
        vals.push_back(c.values[i]);
      }
      taus.back() = t_ + len;
      PiecewiseConstant pc;
      if (which == 0) {
        for (double tau : taus) pc.breaks.push_back(tau - t_);
        pc.values = vals;
      } else {
        for (auto it = taus.rbegin(); it != taus.rend(); ++it) pc.breaks.push_back(t_ + len - *it);
        pc.values.assign(vals.rbegin(), vals.rend());
      }
      pc.breaks.front() = 0.0;
      pc.breaks.back() = len;
      (which == 0 ? f.r : f.s) = std::move(pc);
    }
    w.fields.push_back(std::move(f));
  }
  return w;
}

namespace {

using Point = std::array<double, 2>;

// Keeps the part of a convex polygon with c0 x + c1 y <= d.
std::vector<Point> clip(const std::vector<Point>& poly, double c0, double c1, double d) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double fp = c0 * p[0] + c1 * p[1] - d;
    const double fq = c0 * q[0] + c1 * q[1] - d;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      const double s = fp / (fp - fq);
      out.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
    }
  }
  return out;
}

double area(const std::vector<Point>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return std::abs(a) / 2;
}

}  // namespace

double WaveSimulator::window_integral(int e, double a, double b, double t0, double t1) const {
  const double len = g_.edge(e).length;
  // sigma = t + x carries R, rho = t + len - x carries S; dx dt = dsigma drho / 2.
  const double dlo = 2 * a - len, dhi = 2 * b - len;   // sigma - rho
  const double slo = 2 * t0 + len, shi = 2 * t1 + len;  // sigma + rho
  auto cell_area = [&](double s0, double s1, double r0, double r1) {
    std::vector<Point> poly{{s0, r0}, {s1, r0}, {s1, r1}, {s0, r1}};
    poly = clip(poly, -1, 1, -dlo);   // sigma - rho >= dlo
    poly = clip(poly, 1, -1, dhi);    // sigma - rho <= dhi
    poly = clip(poly, -1, -1, -slo);  // sigma + rho >= slo
    poly = clip(poly, 1, 1, shi);     // sigma + rho <= shi
    return poly.size() < 3 ? 0.0 : area(poly);
  };
  const double smin = t0 + a, smax = t1 + b;
  const double rmin = t0 + len - b, rmax = t1 + len - a;

  const Channel& R = channels_[2 * e];
  const Channel& S = channels_[2 * e + 1];
  auto piece_start = [](const Channel& c, std::size_t i) { return i == 0 ? c.begin : c.ends[i - 1]; };
  auto first_piece = [](const Channel& c, double x) {
    return static_cast<std::size_t>(std::upper_bound(c.ends.begin(), c.ends.end(), x) - c.ends.begin());
  };

  double total = 0.0;
  for (std::size_t i = first_piece(R, smin); i < R.ends.size() && piece_start(R, i) < smax; ++i) {
    const double v = R.values[i];
    if (v == 0.0) continue;
    const double s0 = std::max(piece_start(R, i), smin), s1 = std::min(R.ends[i], smax);
    if (s1 <= s0) continue;
    total += v * v * cell_area(s0, s1, rmin, rmax);
  }
  for (std::size_t k = first_piece(S, rmin); k < S.ends.size() && piece_start(S, k) < rmax; ++k) {
    const double w = S.values[k];
    if (w == 0.0) continue;
    const double r0 = std::max(piece_start(S, k), rmin), r1 = std::min(S.ends[k], rmax);
    if (r1 <= r0) continue;
    total += w * w * cell_area(smin, smax, r0, r1);
    // Cross terms with the R pieces whose slab meets this rho band inside P.
    const double lo = std::max(r0 + dlo, slo - r1), hi = std::min(r1 + dhi, shi - r0);
    for (std::size_t i = first_piece(R, std::max(lo, smin)); i < R.ends.size() && piece_start(R, i) < std::min(hi, smax);
         ++i) {
      const double v = R.values[i];
      if (v == 0.0) continue;
      const double s0 = std::max(piece_start(R, i), smin), s1 = std::min(R.ends[i], smax);
      if (s1 <= s0) continue;
      total += 2 * v * w * cell_area(s0, s1, r0, r1);
    }
  }
  return total / 2;
}

double WaveSimulator::observed_energy(const ControlSet& omega, double t_from, double t_to) const {
  if (t_from < start_ - 1e-12 || t_to > t_ + 1e-12 || t_to < t_from) {
    throw std::invalid_argument("observed_energy: window outside the simulated history");
  }
  double total = 0.0;
  for (const auto& [edge_id, ivs] : omega.by_edge()) {
    if (!g_.has_edge_id(edge_id)) continue;
    const int e = g_.edge_index(edge_id);
    for (const auto& iv : ivs) total += window_integral(e, iv.a, iv.b, t_from, t_to);
  }
  return total;
}

WaveState evolve(const MetricGraph& g, const WaveState& state, double T, const SimOptions& opts) {
  if (T < 0) throw std::invalid_argument("evolve: T must be non-negative");
  WaveSimulator sim(g, state, opts);
  sim.advance_to(state.time + T);
  return sim.state();
}

double observed_energy(const MetricGraph& g, const WaveState& initial, const ControlSet& omega, double T,
                       const SimOptions& opts) {
  if (T < 0) throw std::invalid_argument("observed_energy: T must be non-negative");
  WaveSimulator sim(g, initial, opts);
  sim.advance_to(initial.time + T);
  return sim.observed_energy(omega, initial.time, initial.time + T);
}

// ---------------------------------------------------------------------------

const char* to_string(Pulse::Kind k) {
  switch (k) {
    case Pulse::Kind::LeftMover: return "left";
    case Pulse::Kind::RightMover: return "right";
    case Pulse::Kind::Velocity: return "velocity";
  }
  return "?";
}

WaveState make_state(const MetricGraph& g, const std::vector<Pulse>& pulses, double time) {
  WaveState w = WaveState::zero(g, time);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(static_cast<int>(e));
    std::vector<const Pulse*> mine;
    std::vector<double> cuts{0.0, edge.length};
    for (const auto& p : pulses) {
      if (p.edge != edge.id) continue;
      if (!(p.width > 0.0)) throw ValidationError("make_state: pulse width must be positive");
      const double lo = p.center - p.width / 2, hi = p.center + p.width / 2;
      if (lo < -1e-12 || hi > edge.length + 1e-12) {
        throw ValidationError("make_state: pulse on edge " + std::to_string(edge.id) + " leaves the edge");
      }
      mine.push_back(&p);
      cuts.push_back(std::clamp(lo, 0.0, edge.length));
      cuts.push_back(std::clamp(hi, 0.0, edge.length));
    }
    if (mine.empty()) continue;
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    EdgeField f;
    f.r.breaks = f.s.breaks = cuts;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double mid = (cuts[i] + cuts[i + 1]) / 2;
      double r = 0.0, s = 0.0;
      for (const Pulse* p : mine) {
        if (std::abs(mid - p->center) >= p->width / 2) continue;
        switch (p->kind) {
          case Pulse::Kind::LeftMover: r += p->amplitude; break;
          case Pulse::Kind::RightMover: s += p->amplitude; break;
          case Pulse::Kind::Velocity:
            r += p->amplitude / 2;
            s += p->amplitude / 2;
            break;
        }
      }
      f.r.values.push_back(r);
      f.s.values.push_back(s);
    }
    w.fields[e] = std::move(f);
  }
  return w;
}

std::vector<Probe> grid_probes(const MetricGraph& g) {
  std::vector<Probe> out;
  for (const auto& e : g.edges()) {
    for (int k = 0; k < 16; ++k) {
      for (auto kind : {Pulse::Kind::LeftMover, Pulse::Kind::RightMover, Pulse::Kind::Velocity}) {
        Probe p;
        p.pulses.push_back({e.id, (k + 0.5) * e.length / 16, e.length / 32, kind, 1.0});
        p.label = "grid edge=" + std::to_string(e.id) + " k=" + std::to_string(k) + " " + to_string(kind);
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

std::vector<Probe> adversarial_probes(const NormalizedGraph& ng) {
  const MetricGraph& g = ng.graph;
  std::vector<Probe> out;
  for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
    if (ng.controlled[ei]) continue;
    const Edge& e = g.edge(static_cast<int>(ei));
    const double w = e.length / 32;
    out.push_back({"hug edge=" + std::to_string(e.id) + " tail",
                   {{e.id, w / 2, w, Pulse::Kind::RightMover, 1.0}}});
    out.push_back({"hug edge=" + std::to_string(e.id) + " head",
                   {{e.id, e.length - w / 2, w, Pulse::Kind::LeftMover, 1.0}}});
  }
  for (std::size_t vi = 0; vi < g.num_vertices(); ++vi) {
    std::vector<Incidence> free;
    for (const auto& inc : g.incidences(static_cast<int>(vi))) {
      if (!ng.controlled[inc.edge]) free.push_back(inc);
    }
    for (std::size_t i = 0; i < free.size(); ++i) {
      for (std::size_t j = i + 1; j < free.size(); ++j) {
        const Edge& ea = g.edge(free[i].edge);
        const Edge& eb = g.edge(free[j].edge);
        if (ea.id == eb.id) continue;
        const double d = std::min(ea.length, eb.length);
        const double w = d / 32;
        // A pulse whose far end sits at distance d from the vertex, moving toward it.
        auto toward = [&](const Incidence& inc, const Edge& e, double amp) {
          const bool at_tail = inc.end == EdgeEnd::Tail;
          const double c = at_tail ? d - w / 2 : e.length - d + w / 2;
          return Pulse{e.id, c, w, at_tail ? Pulse::Kind::LeftMover : Pulse::Kind::RightMover, amp};
        };
        out.push_back({"pair vertex=" + std::to_string(g.vertex(static_cast<int>(vi)).id) + " edges=" +
                           std::to_string(ea.id) + "," + std::to_string(eb.id),
                       {toward(free[i], ea, 1.0), toward(free[j], eb, -1.0)}});
      }
    }
  }
  return out;
}

ObservabilityResult observability_ratio(const MetricGraph& graph, const ControlSet& omega, double T,
                                        ProbeFamily family, const SimOptions& opts) {
  const NormalizedGraph ng = normalize(graph, omega);
  std::vector<Probe> probes;
  if (family != ProbeFamily::Adversarial) probes = grid_probes(ng.graph);
  if (family != ProbeFamily::Grid) {
    auto adv = adversarial_probes(ng);
    probes.insert(probes.end(), adv.begin(), adv.end());
  }
  ObservabilityResult best;
  best.ratio = std::numeric_limits<double>::infinity();
  for (const auto& p : probes) {
    const WaveState s = make_state(ng.graph, p.pulses);
    const double e0 = energy(s);
    if (e0 == 0.0) continue;
    const double r = observed_energy(ng.graph, s, ng.omega, T, opts) / e0;
    ++best.probes;
    if (r < best.ratio) {
      best.ratio = r;
      best.argmin = p;
    }
  }
  return best;
}

std::vector<TraceRow> trace(const MetricGraph& g, const WaveState& initial, const ControlSet& omega, double T,
                            double dt, const SimOptions& opts) {
  if (!(dt > 0.0)) throw std::invalid_argument("trace: dt must be positive");
  WaveSimulator sim(g, initial, opts);
  std::vector<TraceRow> rows;
  const double t0 = initial.time;
  const auto steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  for (long i = 0; i <= steps; ++i) {
    const double t = std::min(t0 + static_cast<double>(i) * dt, t0 + T);
    sim.advance_to(t);
    rows.push_back({t, edge_energies(sim.state()), sim.observed_energy(omega, t0, t)});
  }
  return rows;
}

}  // namespace graphctl
