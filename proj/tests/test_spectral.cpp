#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "graphctl/scenarios.hpp"
#include "graphctl/spectral.hpp"

using namespace graphctl;
using std::numbers::pi;

namespace {

std::vector<double> with_multiplicity(const Spectrum& s) {
  std::vector<double> ks;
  for (const auto& p : s.pairs) {
    for (int i = 0; i < p.multiplicity; ++i) ks.push_back(p.k);
  }
  return ks;
}

void expect_orthonormal(const MetricGraph& g, const Spectrum& s) {
  for (const auto& p : s.pairs) {
    ASSERT_EQ(static_cast<int>(p.eigenfunctions.size()), p.multiplicity);
    for (std::size_t i = 0; i < p.eigenfunctions.size(); ++i) {
      EXPECT_LT(vertex_residual(g, p.eigenfunctions[i]), 1e-8) << "k=" << p.k;
      for (std::size_t j = 0; j <= i; ++j) {
        EXPECT_NEAR(l2_inner(g, p.eigenfunctions[i], p.eigenfunctions[j]), i == j ? 1.0 : 0.0, 1e-9);
      }
    }
  }
}

}  // namespace

TEST(Spectrum, IntervalBoundaryConditions) {
  const double len = std::sqrt(3.0);
  using BC = BoundaryCondition;
  struct Case {
    BC left, right;
    double shift;
    bool constant;
  };
  for (const auto& c : {Case{BC::Dirichlet, BC::Dirichlet, 0.0, false}, Case{BC::Dirichlet, BC::Neumann, 0.5, false},
                        Case{BC::Neumann, BC::Neumann, 0.0, true}}) {
    const auto sc = interval_scenario(len, c.left, c.right);
    const auto s = eigenvalues(sc.graph, 30.0);
    EXPECT_EQ(s.constant_mode, c.constant);
    const auto ks = with_multiplicity(s);
    std::vector<double> expected;
    for (int n = c.shift > 0 ? 0 : 1; (n + c.shift) * pi / len <= 30.0; ++n) expected.push_back((n + c.shift) * pi / len);
    ASSERT_EQ(ks.size(), expected.size());
    for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_NEAR(ks[i], expected[i], 1e-9 * expected[i]);
    EXPECT_TRUE(s.warnings.empty());
    expect_orthonormal(sc.graph, s);
  }
}

TEST(Spectrum, EquilateralStar) {
  const auto sc = star_scenario({1.0, 1.0, 1.0});
  const auto s = eigenvalues(sc.graph, 20.0);
  std::vector<double> expected;
  for (int n = 0; n < 10; ++n) {
    if ((n + 0.5) * pi <= 20.0) expected.push_back((n + 0.5) * pi);
    if (n >= 1 && n * pi <= 20.0) {
      expected.push_back(n * pi);
      expected.push_back(n * pi);
    }
  }
  std::sort(expected.begin(), expected.end());
  const auto ks = with_multiplicity(s);
  ASSERT_EQ(ks.size(), expected.size());
  for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_NEAR(ks[i], expected[i], 1e-9 * expected[i]);
  expect_orthonormal(sc.graph, s);
}

TEST(Spectrum, SecularMatrixIsSingularExactlyAtEigenvalues) {
  const auto sc = star_scenario({1.0, 1.0, 1.0});
  auto smin = [&](double k) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(secular_matrix(sc.graph, k));
    return svd.singularValues().minCoeff();
  };
  EXPECT_LT(smin(1.5 * pi), 1e-12);
  EXPECT_GT(smin(1.25 * pi), 1e-3);
}

TEST(Spectrum, DegreeTwoVertexDoesNotChangeTheSpectrum) {
  MetricGraph split({{0, BoundaryCondition::Dirichlet}, {1, BoundaryCondition::Interior}, {2, BoundaryCondition::Dirichlet}},
                    {{0, 0, 1, 0.7, {}}, {1, 1, 2, 1.3, {}}});
  const auto a = with_multiplicity(eigenvalues(split, 25.0));
  const auto b = with_multiplicity(eigenvalues(interval_scenario(2.0, BoundaryCondition::Dirichlet,
                                                                 BoundaryCondition::Dirichlet).graph, 25.0));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9 * b[i]);
}

TEST(Spectrum, WeylLawOnTheCatalog) {
  for (const auto& sc : scenario_catalog()) {
    const auto w = weyl_count_check(sc.graph, 40.0);
    EXPECT_TRUE(w.within()) << sc.name << ": counted " << w.counted << ", predicted " << w.predicted;
  }
}

TEST(ResolventProbe, RationalXGraphHasAnUnobservedMode) {
  const auto sc = x_graph(1.5, 1.0);
  const auto rows = resolvent_probe(sc.graph, sc.omega, 3 * pi);
  double least = 1.0;
  for (const auto& r : rows) least = std::min(least, r.min_mass);
  EXPECT_LT(least, 1e-10);
}

TEST(ResolventProbe, ObservationMassOfASingleMode) {
  // sin(pi x) on (0, 1) observed on (0, 1/2) carries half of its mass.
  const auto sc = interval_scenario(1.0, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet, Interval{0.0, 0.5});
  const auto s = eigenvalues(sc.graph, 4.0);
  ASSERT_EQ(s.pairs.size(), 1u);
  EXPECT_NEAR(observation_mass(sc.graph, s.pairs[0].eigenfunctions[0], sc.omega), 0.5, 1e-12);
  EXPECT_NEAR(min_observation_mass(sc.graph, s.pairs[0], sc.omega), 0.5, 1e-12);
}

TEST(Symmetry, DecompositionOfXGraphEigenfunctions) {
  const auto sc = x_graph(std::sqrt(2.0), 1.0);
  const auto s = eigenvalues(sc.graph, 15.0);
  ASSERT_FALSE(s.pairs.empty());
  for (const auto& p : s.pairs) {
    for (const auto& u : p.eigenfunctions) {
      const auto t = symmetry_decompose(sc.graph, u);
      const double k = p.k;
      EXPECT_NEAR(2 * t.norm_sq(), l2_norm_sq(sc.graph, u), 1e-9);
      // Antisymmetric parts vanish at the centre and the Dirichlet tips.
      EXPECT_NEAR(t.f(k, 0.0), 0.0, 1e-8);
      EXPECT_NEAR(t.g(k, 0.0), 0.0, 1e-8);
      EXPECT_NEAR(t.f(k, t.f.lo), 0.0, 1e-8);
      EXPECT_NEAR(t.g(k, t.g.hi), 0.0, 1e-8);
      // The symmetric part is continuous through the centre.
      EXPECT_NEAR(t.h[0](k, 0.0), t.h[1](k, 0.0), 1e-8);
    }
  }
  EXPECT_THROW(symmetry_decompose(star_scenario({1.0, 1.0, 1.0}).graph, s.pairs[0].eigenfunctions[0]),
               ValidationError);
}
