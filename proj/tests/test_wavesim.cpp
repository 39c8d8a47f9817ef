#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graphctl/scenarios.hpp"
#include "graphctl/wavesim.hpp"
#include "support.hpp"

using namespace graphctl;

namespace {

using Kind = Pulse::Kind;

MetricGraph with_random_tips(const MetricGraph& g, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Vertex> vs = g.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (g.degree(static_cast<int>(i)) == 1) vs[i].bc = coin(rng) ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann;
  }
  return MetricGraph(vs, g.edges());
}

std::vector<Pulse> random_pulses(const MetricGraph& g, std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<int> edge(0, static_cast<int>(g.num_edges()) - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Pulse> out;
  for (int i = 0; i < count; ++i) {
    const auto& e = g.edge(edge(rng));
    const double w = e.length * (0.05 + 0.3 * unit(rng));
    const double c = w / 2 + (e.length - w) * unit(rng);
    out.push_back({e.id, c, w, static_cast<Kind>(static_cast<int>(unit(rng) * 3)), 2 * unit(rng) - 1});
  }
  return out;
}

double l2_distance(const WaveState& a, const WaveState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    for (const auto pair : {&EdgeField::r, &EdgeField::s}) {
      const auto& fa = a.fields[i].*pair;
      const auto& fb = b.fields[i].*pair;
      std::vector<double> cuts = fa.breaks;
      cuts.insert(cuts.end(), fb.breaks.begin(), fb.breaks.end());
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double m = 0.5 * (cuts[k] + cuts[k + 1]);
        const double diff = fa.at(m) - fb.at(m);
        d += diff * diff * (cuts[k + 1] - cuts[k]);
      }
    }
  }
  return d;
}

// Backtracks one characteristic on a Dirichlet interval to time zero.
double interval_oracle(const WaveState& init, double len, bool r_channel, double x, double t) {
  double sign = 1.0;
  while (t > 0) {
    if (r_channel) {  // moves toward 0: came from x + t
      if (x + t <= len) return sign * init.fields[0].r.at(x + t);
      t -= len - x;
      x = len;
      r_channel = false;
      sign = -sign;
    } else {
      if (x - t >= 0) return sign * init.fields[0].s.at(x - t);
      t -= x;
      x = 0;
      r_channel = true;
      sign = -sign;
    }
  }
  return sign * (r_channel ? init.fields[0].r.at(x) : init.fields[0].s.at(x));
}

}  // namespace

TEST(Scattering, ThreeWayJunction) {
  const auto out = scatter(3, BoundaryCondition::Interior, {1.0, 0.0, 0.0});
  ASSERT_EQ(out.size(), 3u);
  EXPECT_NEAR(out[0], -1.0 / 3, 1e-15);
  EXPECT_NEAR(out[1], 2.0 / 3, 1e-15);
  EXPECT_NEAR(out[2], 2.0 / 3, 1e-15);
  EXPECT_EQ(scatter(1, BoundaryCondition::Dirichlet, {0.25})[0], -0.25);
  EXPECT_EQ(scatter(1, BoundaryCondition::Neumann, {0.25})[0], 0.25);
}

TEST(Scattering, MatricesAreOrthogonal) {
  for (int m = 1; m <= 8; ++m) {
    const Eigen::MatrixXd s = scattering_matrix(m);
    EXPECT_LT((s.transpose() * s - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-14) << m;
    // Continuity: incoming + outgoing is the same on every edge.
    const Eigen::VectorXd in = Eigen::VectorXd::LinSpaced(m, 1.0, 2.0);
    const Eigen::VectorXd sum = in + s * in;
    EXPECT_LT((sum.array() - sum(0)).abs().maxCoeff(), 1e-14);
  }
}

TEST(WaveSim, EnergyAndReversibilityOnRandomGraphs) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> horizon(0.5, 6.0);
  for (int run = 0; run < 200; ++run) {
    const auto rc = fixtures::random_graph(rng, 6);
    const auto g = with_random_tips(rc.graph, rng);
    const auto init = make_state(g, random_pulses(g, rng, 3));
    const double e0 = energy(init);
    if (e0 == 0.0) continue;
    const double T = horizon(rng);
    const auto fwd = evolve(g, init, T);
    EXPECT_NEAR(energy(fwd), e0, 1e-9 * e0) << "run " << run;
    const auto back = time_reversed(evolve(g, time_reversed(fwd), T));
    EXPECT_LE(fixtures::state_gap(back, init), 1e-9) << "run " << run;
  }
}

TEST(WaveSim, MatchesDAlembertOnAnInterval) {
  const double len = 1.7;
  const auto sc = interval_scenario(len, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet);
  const auto init = make_state(sc.graph, {{0, 0.4, 0.3, Kind::RightMover, 1.0},
                                          {0, 1.2, 0.2, Kind::Velocity, -0.5},
                                          {0, 0.9, 0.4, Kind::LeftMover, 0.7}});
  for (double t : {0.3, 1.1, 2.9, 5.55}) {
    const auto st = evolve(sc.graph, init, t);
    for (int i = 1; i < 170; ++i) {
      const double x = i * len / 170 + 1e-7;
      EXPECT_NEAR(st.fields[0].r.at(x), interval_oracle(init, len, true, x, t), 1e-14) << "t=" << t << " x=" << x;
      EXPECT_NEAR(st.fields[0].s.at(x), interval_oracle(init, len, false, x, t), 1e-14) << "t=" << t << " x=" << x;
    }
  }
}

TEST(WaveSim, DirichletIntervalHasPeriodTwiceTheLength) {
  const auto sc = interval_scenario(1.25, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet);
  const auto init = make_state(sc.graph, {{0, 0.3, 0.2, Kind::Velocity, 1.0}, {0, 0.8, 0.1, Kind::LeftMover, -2.0}});
  EXPECT_LE(fixtures::state_gap(evolve(sc.graph, init, 2.5), init), 1e-12);
  EXPECT_GT(l2_distance(evolve(sc.graph, init, 1.25), init), 1e-3);
}

TEST(WaveSim, DegreeTwoGluing) {
  const auto whole = interval_scenario(2.0, BoundaryCondition::Dirichlet, BoundaryCondition::Neumann);
  MetricGraph split({{0, BoundaryCondition::Dirichlet}, {1, BoundaryCondition::Interior}, {2, BoundaryCondition::Neumann}},
                    {{0, 0, 1, 0.75, {}}, {1, 1, 2, 1.25, {}}});
  const auto a0 = make_state(whole.graph, {{0, 0.5, 0.4, Kind::RightMover, 1.0}, {0, 1.5, 0.3, Kind::Velocity, 0.5}});
  const auto b0 = make_state(split, {{0, 0.5, 0.4, Kind::RightMover, 1.0}, {1, 0.75, 0.3, Kind::Velocity, 0.5}});
  for (double t : {0.4, 1.9, 3.3, 7.0}) {
    const auto a = evolve(whole.graph, a0, t);
    const auto b = evolve(split, b0, t);
    for (int i = 1; i < 200; ++i) {
      const double x = 2.0 * i / 200 + 1e-6;
      const int e = x < 0.75 ? 0 : 1;
      const double y = e == 0 ? x : x - 0.75;
      EXPECT_NEAR(a.fields[0].r.at(x), b.fields[e].r.at(y), 1e-12);
      EXPECT_NEAR(a.fields[0].s.at(x), b.fields[e].s.at(y), 1e-12);
    }
  }
}

TEST(WaveSim, ObservedEnergyOverAPeriod) {
  const auto sc = interval_scenario(1.0, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet, Interval{0.0, 1.0});
  const auto init = make_state(sc.graph, {{0, 0.3, 0.2, Kind::RightMover, 1.0}, {0, 0.6, 0.3, Kind::Velocity, -1.5}});
  // Over one period int int (r + s)^2 = T E + 2 int int r s, and the cross term is
  // -(1/2) M^2 with M = int (r - s) = int u_x, which a box state need not make zero.
  const double M = [&] {
    double m = 0.0;
    const auto& f = init.fields[0];
    for (std::size_t i = 0; i < f.r.values.size(); ++i) m += f.r.values[i] * (f.r.breaks[i + 1] - f.r.breaks[i]);
    for (std::size_t i = 0; i < f.s.values.size(); ++i) m -= f.s.values[i] * (f.s.breaks[i + 1] - f.s.breaks[i]);
    return m;
  }();
  EXPECT_NEAR(M, -0.2, 1e-15);
  EXPECT_NEAR(observed_energy(sc.graph, init, sc.omega, 2.0), 2.0 * energy(init) - M * M, 1e-12);
}

TEST(WaveSim, ObservedEnergyMatchesMidpointSampling) {
  const auto sc = star_scenario({1.0, 1.3, 0.8});
  const auto init = make_state(sc.graph, {{1, 0.4, 0.3, Kind::RightMover, 1.0}, {2, 0.5, 0.2, Kind::Velocity, 0.7}});
  WaveSimulator sim(sc.graph, init);
  const double T = 2.0;
  const int nt = 800;
  double sampled = 0.0;
  for (int i = 0; i < nt; ++i) {
    sim.advance_to((i + 0.5) * T / nt);
    const auto st = sim.state();
    for (const auto& [edge_id, ivs] : sc.omega.by_edge()) {
      const auto& f = st.fields[sc.graph.edge_index(edge_id)];
      for (const auto& iv : ivs) {
        const int nx = 800;
        for (int j = 0; j < nx; ++j) {
          const double x = iv.a + (j + 0.5) * iv.length() / nx;
          const double v = f.r.at(x) + f.s.at(x);
          sampled += v * v * iv.length() / nx * T / nt;
        }
      }
    }
  }
  sim.advance_to(T);
  EXPECT_NEAR(sim.observed_energy(sc.omega, 0.0, T), sampled, 1e-2 * sampled);
}

TEST(WaveSim, BreakpointCapIsEnforced) {
  const auto sc = star_scenario({1.0, std::sqrt(2.0), std::sqrt(3.0)});
  SimOptions opts;
  opts.max_breakpoints = 50;
  const auto init = make_state(sc.graph, {{0, 0.5, 0.2, Kind::Velocity, 1.0}});
  EXPECT_THROW(evolve(sc.graph, init, 100.0, opts), NumericalGuardError);
}

TEST(Observability, BotGraphDichotomy) {
  const auto sc = bot_graph(3, 2, 1);
  EXPECT_EQ(observability_ratio(sc.graph, sc.omega, 3.8).ratio, 0.0);
  EXPECT_GT(observability_ratio(sc.graph, sc.omega, 4.2).ratio, 0.0);
}

TEST(Observability, ProbeFamiliesAreNonEmpty) {
  const auto sc = bot_graph(3, 2, 1);
  const auto ng = normalize(sc.graph, sc.omega);
  EXPECT_FALSE(grid_probes(ng.graph).empty());
  EXPECT_FALSE(adversarial_probes(ng).empty());
  for (const auto& p : adversarial_probes(ng)) {
    for (const auto& pulse : p.pulses) EXPECT_FALSE(ng.controlled[ng.graph.edge_index(pulse.edge)]) << p.label;
  }
}
