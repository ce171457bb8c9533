#include "thermoporo/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <utility>

namespace thermoporo {

namespace {

using EdgeKey = std::pair<Index, Index>;

EdgeKey edge_key(Index a, Index b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

bool on_line(double v, double target, double scale) {
  return std::abs(v - target) <= 1e-12 * scale;
}

}  // namespace

TagRule vertical_sides_clamped(Point2 lo, Point2 hi) {
  const double scale = std::max({1.0, std::abs(hi.x - lo.x), std::abs(hi.y - lo.y)});
  return [lo, hi, scale](const Point2& a, const Point2& b) {
    const bool left = on_line(a.x, lo.x, scale) && on_line(b.x, lo.x, scale);
    const bool right = on_line(a.x, hi.x, scale) && on_line(b.x, hi.x, scale);
    return (left || right) ? BoundaryTag::GammaD : BoundaryTag::GammaN;
  };
}

TagRule all_clamped() {
  return [](const Point2&, const Point2&) { return BoundaryTag::GammaD; };
}

TriMesh::TriMesh(std::vector<Point2> vertices, std::vector<std::array<Index, 3>> triangles,
                 std::vector<BoundaryEdge> boundary_edges, Point2 lo, Point2 hi, int divisions)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)),
      lo_(lo),
      hi_(hi),
      divisions_(divisions) {
  for (const auto& tri : triangles_) {
    for (int e = 0; e < 3; ++e) {
      h_ = std::max(h_, distance(vertices_[tri[e]], vertices_[tri[(e + 1) % 3]]));
    }
  }
}

double TriMesh::triangle_area(Index t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

TriMesh build_uniform_rect(int nx, int ny, Point2 lo, Point2 hi, const TagRule& tag_rule) {
  if (nx < 1 || ny < 1) {
    throw InvalidInput("build_uniform_rect: nx and ny must be at least 1");
  }
  if (!(lo.x < hi.x) || !(lo.y < hi.y)) {
    throw InvalidInput("build_uniform_rect: degenerate rectangle");
  }
  const auto vid = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };

  std::vector<Point2> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Snap the last row/column to the exact corner to keep boundary tests exact.
      const double x = i == nx ? hi.x : lo.x + (hi.x - lo.x) * i / nx;
      const double y = j == ny ? hi.y : lo.y + (hi.y - lo.y) * j / ny;
      vertices.push_back({x, y});
    }
  }

  std::vector<std::array<Index, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Index v00 = vid(i, j);
      const Index v10 = vid(i + 1, j);
      const Index v11 = vid(i + 1, j + 1);
      const Index v01 = vid(i, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }

  std::vector<BoundaryEdge> boundary;
  const auto add = [&](Index a, Index b) {
    boundary.push_back({{a, b}, tag_rule(vertices[a], vertices[b])});
  };
  for (int i = 0; i < nx; ++i) add(vid(i, 0), vid(i + 1, 0));
  for (int j = 0; j < ny; ++j) add(vid(nx, j), vid(nx, j + 1));
  for (int i = nx; i > 0; --i) add(vid(i, ny), vid(i - 1, ny));
  for (int j = ny; j > 0; --j) add(vid(0, j), vid(0, j - 1));

  return TriMesh(std::move(vertices), std::move(triangles), std::move(boundary), lo, hi,
                 std::max(nx, ny));
}

TriMesh refine_regular(const TriMesh& mesh) {
  std::vector<Point2> vertices = mesh.vertices();
  std::map<EdgeKey, Index> midpoint;
  const auto mid = [&](Index a, Index b) {
    const auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), 0);
    if (inserted) {
      const Point2& pa = mesh.vertices()[a];
      const Point2& pb = mesh.vertices()[b];
      it->second = static_cast<Index>(vertices.size());
      vertices.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    }
    return it->second;
  };

  std::vector<std::array<Index, 3>> triangles;
  triangles.reserve(4 * mesh.triangles().size());
  for (const auto& [a, b, c] : mesh.triangles()) {
    const Index ab = mid(a, b);
    const Index bc = mid(b, c);
    const Index ca = mid(c, a);
    triangles.push_back({a, ab, ca});
    triangles.push_back({ab, b, bc});
    triangles.push_back({ca, bc, c});
    triangles.push_back({ab, bc, ca});
  }

  std::vector<BoundaryEdge> boundary;
  boundary.reserve(2 * mesh.boundary_edges().size());
  for (const auto& edge : mesh.boundary_edges()) {
    const Index m = midpoint.at(edge_key(edge.vertices[0], edge.vertices[1]));
    boundary.push_back({{edge.vertices[0], m}, edge.tag});
    boundary.push_back({{m, edge.vertices[1]}, edge.tag});
  }
  return TriMesh(std::move(vertices), std::move(triangles), std::move(boundary),
                 mesh.lower_corner(), mesh.upper_corner(), 2 * mesh.divisions());
}

std::vector<std::string> check_invariants(const TriMesh& mesh) {
  std::vector<std::string> problems;
  const auto& verts = mesh.vertices();

  for (const auto& v : verts) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      problems.emplace_back("non-finite vertex coordinate");
      break;
    }
  }

  double area = 0.0;
  std::map<EdgeKey, int> use_count;
  for (Index t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    for (Index v : tri) {
      if (v < 0 || v >= mesh.vertex_count()) {
        problems.push_back("triangle " + std::to_string(t) + " references a missing vertex");
        return problems;
      }
    }
    const double a = mesh.triangle_area(t);
    if (!(a > 0.0)) {
      problems.push_back("triangle " + std::to_string(t) + " is not counter-clockwise");
    }
    area += a;
    for (int e = 0; e < 3; ++e) {
      ++use_count[edge_key(tri[e], tri[(e + 1) % 3])];
    }
  }

  const Point2 lo = mesh.lower_corner();
  const Point2 hi = mesh.upper_corner();
  const double rect_area = (hi.x - lo.x) * (hi.y - lo.y);
  if (std::abs(area - rect_area) > 1e-12 * rect_area) {
    problems.emplace_back("triangle areas do not sum to the rectangle area");
  }

  std::map<EdgeKey, int> tagged;
  for (const auto& be : mesh.boundary_edges()) {
    ++tagged[edge_key(be.vertices[0], be.vertices[1])];
  }
  std::size_t boundary_in_triangles = 0;
  for (const auto& [key, count] : use_count) {
    if (count > 2) {
      problems.emplace_back("edge shared by more than two triangles (non-conforming)");
    } else if (count == 1) {
      ++boundary_in_triangles;
      const auto it = tagged.find(key);
      if (it == tagged.end()) {
        problems.emplace_back("boundary edge without a tag");
      } else if (it->second != 1) {
        problems.emplace_back("boundary edge tagged more than once");
      }
    }
  }
  if (boundary_in_triangles != tagged.size()) {
    problems.emplace_back("tagged edge set differs from the geometric boundary");
  }

  // Euler characteristic of a disc: V - E + F = 1.
  const long euler = static_cast<long>(mesh.vertex_count()) - static_cast<long>(use_count.size()) +
                     static_cast<long>(mesh.triangle_count());
  if (euler != 1) {
    problems.emplace_back("Euler characteristic is " + std::to_string(euler) + ", expected 1");
  }

  bool has_dirichlet = false;
  for (const auto& be : mesh.boundary_edges()) {
    has_dirichlet = has_dirichlet || be.tag == BoundaryTag::GammaD;
  }
  if (!has_dirichlet) {
    problems.emplace_back("no GammaD edge");
  }
  return problems;
}

void write_mesh_text(std::ostream& out, const TriMesh& mesh) {
  out << "vertices " << mesh.vertex_count() << '\n';
  for (const auto& v : mesh.vertices()) out << v.x << ' ' << v.y << '\n';
  out << "triangles " << mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "boundary_edges " << mesh.boundary_edges().size() << '\n';
  for (const auto& e : mesh.boundary_edges()) {
    out << e.vertices[0] << ' ' << e.vertices[1] << ' '
        << (e.tag == BoundaryTag::GammaD ? "GammaD" : "GammaN") << '\n';
  }
}

}  // namespace thermoporo
