#include "thermoporo/vtk.hpp"

#include <fstream>
#include <iomanip>

namespace thermoporo {

namespace {

void write_grid(std::ostream& out, const TriMesh& mesh, const std::string& title) {
  out << "# vtk DataFile Version 2.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const Point2& v : mesh.vertices()) out << v.x << ' ' << v.y << " 0\n";
  out << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.triangle_count() << '\n';
  for (Index i = 0; i < mesh.triangle_count(); ++i) out << "5\n";
  out << "POINT_DATA " << mesh.vertex_count() << '\n';
}

void check_size(std::span<const double> values, const TriMesh& mesh) {
  if (values.size() < static_cast<std::size_t>(mesh.vertex_count())) {
    throw InvalidInput("fewer values than mesh vertices");
  }
}

std::filesystem::path open_and_write(const std::filesystem::path& path, auto&& writer) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  writer(out);
  if (!out) throw InvalidInput("failed writing " + path.string());
  return path;
}

}  // namespace

void write_vtk_scalar(std::ostream& out, const TriMesh& mesh, const std::string& name,
                      std::span<const double> vertex_values) {
  check_size(vertex_values, mesh);
  write_grid(out, mesh, name);
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Index i = 0; i < mesh.vertex_count(); ++i) out << vertex_values[i] << '\n';
}

void write_vtk_vector(std::ostream& out, const TriMesh& mesh, const std::string& name,
                      std::span<const double> vx, std::span<const double> vy) {
  check_size(vx, mesh);
  check_size(vy, mesh);
  write_grid(out, mesh, name);
  out << "VECTORS " << name << " double\n";
  for (Index i = 0; i < mesh.vertex_count(); ++i) out << vx[i] << ' ' << vy[i] << " 0\n";
}

std::vector<std::filesystem::path> write_state_vtk(const std::filesystem::path& directory,
                                                   const TriMesh& mesh, const Spaces& spaces,
                                                   const State& state) {
  std::filesystem::create_directories(directory);
  const auto su = static_cast<std::size_t>(spaces.displacement.scalar_size());
  const std::span<const double> u(state.u);
  std::vector<std::filesystem::path> paths;
  paths.push_back(open_and_write(directory / "u.vtk", [&](std::ostream& out) {
    write_vtk_vector(out, mesh, "u", u.subspan(0, su), u.subspan(su, su));
  }));
  paths.push_back(open_and_write(directory / "xi.vtk", [&](std::ostream& out) {
    write_vtk_scalar(out, mesh, "xi", state.xi);
  }));
  paths.push_back(open_and_write(directory / "p.vtk", [&](std::ostream& out) {
    write_vtk_scalar(out, mesh, "p", state.p);
  }));
  paths.push_back(open_and_write(directory / "T.vtk", [&](std::ostream& out) {
    write_vtk_scalar(out, mesh, "T", state.T);
  }));
  return paths;
}

}  // namespace thermoporo
