#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "thermoporo/dofmap.hpp"
#include "thermoporo/mesh.hpp"
#include "thermoporo/steppers.hpp"

namespace thermoporo {

/// Legacy ASCII VTK (version 2.0) unstructured grid of the mesh triangles
/// with one point-data array sampled at the mesh vertices.
void write_vtk_scalar(std::ostream& out, const TriMesh& mesh, const std::string& name,
                      std::span<const double> vertex_values);
void write_vtk_vector(std::ostream& out, const TriMesh& mesh, const std::string& name,
                      std::span<const double> vx, std::span<const double> vy);

/// Writes u.vtk, xi.vtk, p.vtk and T.vtk into `directory` (created if needed)
/// and returns the file paths. xi is sampled at the vertices of its space,
/// which holds for every supported degree.
std::vector<std::filesystem::path> write_state_vtk(const std::filesystem::path& directory,
                                                   const TriMesh& mesh, const Spaces& spaces,
                                                   const State& state);

}  // namespace thermoporo
