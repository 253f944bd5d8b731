#include <gtest/gtest.h>

#include <cmath>

#include "orrw/fixtures.hpp"
#include "orrw/kernels.hpp"

using namespace orrw;

TEST(BaseKernel, StarWithOneTraversedEdge) {
  const FiniteGraph g = fixtures::star3();
  const Kernel p = base_kernel(g, EdgeSubset::single(0), 2.0);
  EXPECT_NEAR(p(0, 1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p(0, 2), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(p(1, 0), 1.0);
  EXPECT_EQ(p(2, 0), 1.0);
}

TEST(BaseKernel, UniformAtDeltaOneAndOnFullSet) {
  for (const auto& tag : fixtures::all_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    for (EdgeSubset::Mask m = 0; m <= g.all_edges().mask(); ++m) {
      const Kernel p = base_kernel(g, EdgeSubset(m), 1.0);
      for (int x = 0; x < g.num_vertices(); ++x)
        for (int e : g.incident_edges(x)) EXPECT_DOUBLE_EQ(p(x, g.other_end(e, x)), 1.0 / g.degree(x));
    }
    const Kernel q = base_kernel(g, g.all_edges(), 7.0);
    for (int x = 0; x < g.num_vertices(); ++x)
      for (int e : g.incident_edges(x)) EXPECT_NEAR(q(x, g.other_end(e, x)), 1.0 / g.degree(x), 1e-15);
  }
}

TEST(BaseKernel, RowStochasticWithAdjacencySupport) {
  for (const auto& tag : fixtures::all_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    for (double d : {0.3, 1.0, 2.0, 7.0}) {
      for (EdgeSubset::Mask m = 0; m <= g.all_edges().mask(); ++m) {
        const Kernel p = base_kernel(g, EdgeSubset(m), d);
        EXPECT_TRUE(is_row_stochastic(p));
        for (int x = 0; x < g.num_vertices(); ++x)
          for (int y = 0; y < g.num_vertices(); ++y) EXPECT_EQ(p(x, y) > 0.0, g.edge_between(x, y).has_value());
      }
    }
  }
}

TEST(BaseKernel, RejectsNonPositiveDelta) {
  EXPECT_THROW(base_kernel(fixtures::star3(), EdgeSubset(), 0.0), std::invalid_argument);
  EXPECT_THROW(base_kernel(fixtures::star3(), EdgeSubset(), -1.0), std::invalid_argument);
}

TEST(BaseKernel, TraversedMovesGainWithDelta) {
  for (const auto& tag : fixtures::all_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    for (EdgeSubset s : enumerate_S(g)) {
      const Kernel lo = base_kernel(g, s, 0.7), hi = base_kernel(g, s, 3.0);
      for (int e : s.edges()) {
        const auto [a, b] = g.endpoints(e);
        EXPECT_GE(hi(a, b), lo(a, b) - 1e-15);
        EXPECT_GE(hi(b, a), lo(b, a) - 1e-15);
      }
    }
  }
}

TEST(LiftedKernel, StarExample) {
  const FiniteGraph g = fixtures::star3();
  const LiftedGraph lg(g);
  const Kernel p = lifted_kernel(lg, EdgeSubset::single(0), 2.0);
  const int from = LiftedGraph::arc_id(0, -1);  // 1 -> 0
  const int to = LiftedGraph::arc_id(1, +1);    // 0 -> 2
  EXPECT_NEAR(p(from, to), 1.0 / 3.0, 1e-15);
}

TEST(LiftedKernel, ConsistentWithBaseKernel) {
  for (const auto& tag : fixtures::all_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const LiftedGraph lg(g);
    for (double d : {0.3, 1.0, 2.0, 7.0}) {
      for (EdgeSubset::Mask m = 0; m <= g.all_edges().mask(); ++m) {
        const Kernel p = lifted_kernel(lg, EdgeSubset(m), d);
        const Kernel ph = base_kernel(g, EdgeSubset(m), d);
        EXPECT_TRUE(is_row_stochastic(p));
        for (int z1 = 0; z1 < lg.num_arcs(); ++z1)
          for (int z2 = 0; z2 < lg.num_arcs(); ++z2)
            EXPECT_EQ(p(z1, z2), lg.links(z1, z2) ? ph(lg.tail(z2), lg.head(z2)) : 0.0);
      }
    }
  }
}

TEST(LiftedKernel, UniformRowsAtDeltaOne) {
  const FiniteGraph g = fixtures::paw();
  const LiftedGraph lg(g);
  const Kernel p = lifted_kernel(lg, EdgeSubset::single(2), 1.0);
  for (int z = 0; z < lg.num_arcs(); ++z)
    for (int w : lg.out_neighbors(z)) EXPECT_DOUBLE_EQ(p(z, w), 1.0 / lg.out_degree(z));
}

// Changing δ moves the log-ratio strictly below zero exactly on boundary arcs:
// at the head of a boundary arc the walk on E' can leave through an edge
// outside E', whose probability shrinks as δ grows.
TEST(LiftedKernel, BoundaryDichotomy) {
  for (const auto& tag : fixtures::all_tags()) {
    const FiniteGraph g = fixtures::by_tag(tag);
    const LiftedGraph lg(g);
    for (EdgeSubset s : enumerate_S(g)) {
      const Kernel p1 = lifted_kernel(lg, s, 1.5), p2 = lifted_kernel(lg, s, 4.0);
      const auto bd = lifted_boundary(lg, s);
      for (int z = 0; z < lg.num_arcs(); ++z) {
        if (!s.contains(lg.arc(z).edge)) continue;
        const bool on_boundary = std::count(bd.begin(), bd.end(), z) > 0;
        for (int w : lg.out_neighbors(z)) {
          if (!s.contains(lg.arc(w).edge)) continue;
          const double r = std::log(p1(z, w) / p2(z, w));
          if (on_boundary) {
            EXPECT_LT(r, 0.0);
          } else {
            EXPECT_NEAR(r, 0.0, 1e-15);
          }
        }
      }
    }
  }
}

TEST(RelativeEntropy, Basics) {
  Eigen::Vector2d a(0.3, 0.7);
  EXPECT_EQ(relative_entropy(a, a).value(), 0.0);
  EXPECT_NEAR(relative_entropy(Eigen::Vector2d(1, 0), Eigen::Vector2d(0.5, 0.5)).value(), std::log(2.0), 1e-15);
  EXPECT_TRUE(relative_entropy(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(1, 0)).is_infinite());
  EXPECT_THROW(relative_entropy(Eigen::Vector2d(-0.1, 1.1), Eigen::Vector2d(0.5, 0.5)), std::invalid_argument);
}

TEST(RelativeEntropy, PositiveOffDiagonal) {
  Eigen::Vector3d rho(0.2, 0.3, 0.5);
  for (int i = 1; i < 20; ++i) {
    Eigen::Vector3d g(i / 40.0, 0.5 - i / 40.0, 0.5);
    const double r = relative_entropy(g, rho).value();
    if ((g - rho).cwiseAbs().maxCoeff() < 1e-15) {
      EXPECT_NEAR(r, 0.0, 1e-15);
    } else {
      EXPECT_GT(r, 0.0);
    }
  }
}

TEST(EntropyCost, Examples) {
  const FiniteGraph g = fixtures::star3();
  for (double d : {0.5, 1.0, 2.0, 5.0}) {
    const Kernel p = base_kernel(g, EdgeSubset::single(0), d);
    Measure nu(3);
    nu << 0.5, 0.5, 0.0;
    Kernel q = Kernel::Zero(3, 3);
    q(0, 1) = 1.0;
    q(1, 0) = 1.0;
    q(2, 0) = 1.0;
    EXPECT_NEAR(entropy_cost(nu, q, p).value(), 0.5 * std::log((1.0 + d) / d), 1e-15);
    EXPECT_EQ(entropy_cost(nu, p, p).value(), 0.0);
    Kernel bad = q;
    bad(1, 0) = 0.5;
    bad(1, 2) = 0.5;  // 1-2 is not an edge
    EXPECT_TRUE(entropy_cost(nu, bad, p).is_infinite());
  }
}

TEST(ExtendedReal, Arithmetic) {
  const ExtendedReal inf = ExtendedReal::infinity();
  EXPECT_TRUE((inf + 1.0).is_infinite());
  EXPECT_EQ((0.0 * inf).value(), 0.0);
  EXPECT_TRUE(ExtendedReal(5.0) < inf);
  EXPECT_FALSE(inf < inf);
  EXPECT_EQ(xlogxy(0.0, 0.0), 0.0);
}
