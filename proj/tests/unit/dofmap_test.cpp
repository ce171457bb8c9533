#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "thermoporo/dofmap.hpp"

namespace tp = thermoporo;

namespace {

tp::TriMesh unit_mesh(int n) {
  return tp::build_uniform_rect(n, n, {0, 0}, {1, 1}, tp::vertical_sides_clamped({0, 0}, {1, 1}));
}

}  // namespace

class DofCount : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(DofCount, StructuredGridHasLatticeCount) {
  const auto [n, k] = GetParam();
  const auto mesh = unit_mesh(n);
  const tp::DofMap s(mesh, tp::SpaceKind::Scalar, k);
  EXPECT_EQ(s.scalar_size(), (k * n + 1) * (k * n + 1));
  const tp::DofMap v(mesh, tp::SpaceKind::Vector, k);
  EXPECT_EQ(v.size(), 2 * (k * n + 1) * (k * n + 1));
}

TEST_P(DofCount, NodesFormTheLattice) {
  const auto [n, k] = GetParam();
  const tp::DofMap s(unit_mesh(n), tp::SpaceKind::Scalar, k);
  std::set<std::pair<long, long>> lattice;
  for (const auto& c : s.coordinates()) {
    const double i = c.x * k * n;
    const double j = c.y * k * n;
    EXPECT_NEAR(i, std::round(i), 1e-9);
    EXPECT_NEAR(j, std::round(j), 1e-9);
    lattice.insert({std::lround(i), std::lround(j)});
  }
  EXPECT_EQ(lattice.size(), s.coordinates().size());
}

INSTANTIATE_TEST_SUITE_P(MeshesAndDegrees, DofCount,
                         ::testing::Combine(::testing::Values(1, 2, 4, 7),
                                            ::testing::Values(1, 2, 3)));

TEST(DofMap, CellDofsMatchReferenceNodes) {
  const auto mesh = unit_mesh(3);
  for (int k = 1; k <= 3; ++k) {
    const tp::DofMap s(mesh, tp::SpaceKind::Scalar, k);
    for (tp::Index c = 0; c < mesh.triangle_count(); ++c) {
      const auto& tri = mesh.triangles()[c];
      const auto& a = mesh.vertices()[tri[0]];
      const auto& b = mesh.vertices()[tri[1]];
      const auto& d = mesh.vertices()[tri[2]];
      const auto dofs = s.cell_dofs(c);
      for (int i = 0; i < s.local_size(); ++i) {
        const auto r = s.element().nodes()[i];
        const double x = a.x + r.x * (b.x - a.x) + r.y * (d.x - a.x);
        const double y = a.y + r.x * (b.y - a.y) + r.y * (d.y - a.y);
        EXPECT_NEAR(s.coordinates()[dofs[i]].x, x, 1e-13);
        EXPECT_NEAR(s.coordinates()[dofs[i]].y, y, 1e-13);
      }
    }
  }
}

TEST(DofMap, VectorSpaceIsBlockedByComponent) {
  const tp::DofMap v(unit_mesh(2), tp::SpaceKind::Vector, 2);
  EXPECT_EQ(v.components(), 2);
  EXPECT_EQ(v.dof(3, 0), 3);
  EXPECT_EQ(v.dof(3, 1), v.scalar_size() + 3);
  const auto values = v.interpolate_vector([](tp::Point2 p) { return tp::Vec2{p.x, -p.y}; });
  for (tp::Index i = 0; i < v.scalar_size(); ++i) {
    EXPECT_DOUBLE_EQ(values[i], v.coordinates()[i].x);
    EXPECT_DOUBLE_EQ(values[v.scalar_size() + i], -v.coordinates()[i].y);
  }
}

TEST(DofMap, BoundaryDofsByTag) {
  const int n = 4, k = 2;
  const auto mesh = unit_mesh(n);
  const tp::DofMap s(mesh, tp::SpaceKind::Scalar, k);
  const auto whole = tp::boundary_dofs(s, mesh, tp::BoundarySelector::whole());
  EXPECT_EQ(whole.size(), static_cast<std::size_t>(4 * k * n));
  EXPECT_TRUE(std::is_sorted(whole.begin(), whole.end()));
  const auto clamped =
      tp::boundary_dofs(s, mesh, tp::BoundarySelector::tagged(tp::BoundaryTag::GammaD));
  EXPECT_EQ(clamped.size(), static_cast<std::size_t>(2 * (k * n + 1)));
  for (const auto d : clamped) {
    const double x = s.coordinates()[d].x;
    EXPECT_TRUE(x == 0.0 || x == 1.0);
  }
  const tp::DofMap v(mesh, tp::SpaceKind::Vector, k);
  EXPECT_EQ(
      tp::boundary_dofs(v, mesh, tp::BoundarySelector::tagged(tp::BoundaryTag::GammaD)).size(),
      2 * clamped.size());
}

TEST(DofMap, EdgeDofsIncludeEndpoints) {
  const auto mesh = unit_mesh(2);
  const tp::DofMap s(mesh, tp::SpaceKind::Scalar, 3);
  const auto [a, b] = s.edges().front();
  const auto dofs = s.edge_dofs(a, b);
  ASSERT_EQ(dofs.size(), 4u);
  EXPECT_EQ(dofs[0], a);
  EXPECT_EQ(dofs[1], b);
  // Interior nodes sit at the trisection points of the edge.
  const auto& pa = s.coordinates()[a];
  const auto& pb = s.coordinates()[b];
  for (int j = 2; j < 4; ++j) {
    const auto& x = s.coordinates()[dofs[j]];
    const double cross = (pb.x - pa.x) * (x.y - pa.y) - (pb.y - pa.y) * (x.x - pa.x);
    EXPECT_NEAR(cross, 0.0, 1e-14);
  }
}

TEST(Spaces, DegreeValidation) {
  const auto mesh = unit_mesh(2);
  const auto spaces = tp::build_spaces(mesh, 3, 2);
  EXPECT_EQ(spaces.k(), 3);
  EXPECT_EQ(spaces.l(), 2);
  EXPECT_EQ(spaces.xi.degree(), 2);
  EXPECT_THROW(tp::build_spaces(mesh, 1, 1), tp::InvalidInput);
  EXPECT_THROW(tp::build_spaces(mesh, 4, 1), tp::InvalidInput);
  EXPECT_THROW(tp::build_spaces(mesh, 2, 0), tp::InvalidInput);
}
