#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the solver's numerics.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "thermoporo/common.hpp"

namespace oracle {

using thermoporo::Mat2;
using thermoporo::Point2;
using thermoporo::Vec2;

/// Gaussian elimination with partial pivoting on a dense row-major copy.
/// Returns nothing when a pivot falls below `singular_tol` times the largest entry.
inline std::optional<std::vector<double>> dense_solve(std::vector<double> a, std::vector<double> b,
                                                      double singular_tol = 1e-13) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    if (std::abs(a[piv * n + c]) <= singular_tol * scale) return std::nullopt;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

/// True when the dense symmetric matrix admits a Cholesky factorization
/// with every pivot above `tol` times its diagonal entry.
inline bool dense_cholesky_ok(std::vector<double> a, std::size_t n, double tol = 1e-14) {
  for (std::size_t j = 0; j < n; ++j) {
    const double diag = a[j * n + j];
    double d = diag;
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > tol * std::abs(diag))) return false;
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / l;
    }
  }
  return true;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Integral of x^a y^b over the reference triangle.
inline double monomial_integral(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

// Fourth-order central differences.

inline double d1(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

inline double d2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) /
         (12 * h * h);
}

using SpaceTime = std::function<double(Point2, double)>;

inline double dx(const SpaceTime& f, Point2 p, double t, double h) {
  return d1([&](double s) { return f({s, p.y}, t); }, p.x, h);
}
inline double dy(const SpaceTime& f, Point2 p, double t, double h) {
  return d1([&](double s) { return f({p.x, s}, t); }, p.y, h);
}
inline double dxx(const SpaceTime& f, Point2 p, double t, double h) {
  return d2([&](double s) { return f({s, p.y}, t); }, p.x, h);
}
inline double dyy(const SpaceTime& f, Point2 p, double t, double h) {
  return d2([&](double s) { return f({p.x, s}, t); }, p.y, h);
}
inline double dxy(const SpaceTime& f, Point2 p, double t, double h) {
  return d1([&](double s) { return dy(f, {s, p.y}, t, h); }, p.x, h);
}
inline double dt(const SpaceTime& f, Point2 p, double t, double h) {
  return d1([&](double s) { return f(p, s); }, t, h);
}

struct StrongCoefficients {
  double lambda, mu, alpha, beta, a0, b0, c0;
  std::array<double, 3> K;      // xx, xy, yy
  std::array<double, 3> Theta;  // xx, xy, yy
};

struct StrongSources {
  Vec2 f;
  double g;
  double heat;
};

/// Applies the strong thermo-poroelastic operators to the fields by finite
/// differences:
///   f  = -div(2 mu eps(u) + lambda div(u) I) + alpha grad p + beta grad T
///   g  = d/dt(c0 p - b0 T + alpha div u) - div(K grad p)
///   Hs = d/dt(a0 T - b0 p + beta div u) - div(Theta grad T)
inline StrongSources apply_strong_operators(const SpaceTime& ux, const SpaceTime& uy,
                                            const SpaceTime& p, const SpaceTime& T,
                                            const StrongCoefficients& c, Point2 x, double t,
                                            double h) {
  const double lap_ux = dxx(ux, x, t, h) + dyy(ux, x, t, h);
  const double lap_uy = dxx(uy, x, t, h) + dyy(uy, x, t, h);
  const double ddiv_x = dxx(ux, x, t, h) + dxy(uy, x, t, h);
  const double ddiv_y = dxy(ux, x, t, h) + dyy(uy, x, t, h);
  StrongSources s{};
  s.f[0] = -c.mu * lap_ux - (c.mu + c.lambda) * ddiv_x + c.alpha * dx(p, x, t, h) +
           c.beta * dx(T, x, t, h);
  s.f[1] = -c.mu * lap_uy - (c.mu + c.lambda) * ddiv_y + c.alpha * dy(p, x, t, h) +
           c.beta * dy(T, x, t, h);

  const SpaceTime div_u = [&](Point2 y, double s) { return dx(ux, y, s, h) + dy(uy, y, s, h); };
  const auto div_flux = [&](const SpaceTime& q, const std::array<double, 3>& k) {
    return k[0] * dxx(q, x, t, h) + 2.0 * k[1] * dxy(q, x, t, h) + k[2] * dyy(q, x, t, h);
  };
  s.g = c.c0 * dt(p, x, t, h) - c.b0 * dt(T, x, t, h) + c.alpha * dt(div_u, x, t, h) -
        div_flux(p, c.K);
  s.heat = c.a0 * dt(T, x, t, h) - c.b0 * dt(p, x, t, h) + c.beta * dt(div_u, x, t, h) -
           div_flux(T, c.Theta);
  return s;
}

/// Structural summary of a legacy ASCII VTK unstructured-grid file.
struct VtkFile {
  bool valid = false;
  std::string error;
  std::size_t points = 0;
  std::size_t cells = 0;
  std::string data_name;
  int components = 0;
  std::vector<double> data;  ///< point data, `components` values per point
  std::vector<std::array<double, 3>> coordinates;
};

/// Checks the header, the point, cell and cell-type sections (triangles
/// only, indices in range) and a single finite point-data array.
inline VtkFile read_vtk(std::istream& in) {
  VtkFile f;
  auto fail = [&](std::string why) {
    f.valid = false;
    f.error = std::move(why);
    return f;
  };
  std::string line;
  if (!std::getline(in, line) || line != "# vtk DataFile Version 2.0") return fail("header");
  if (!std::getline(in, line)) return fail("title");
  if (!std::getline(in, line) || line != "ASCII") return fail("not ASCII");
  if (!std::getline(in, line) || line != "DATASET UNSTRUCTURED_GRID") return fail("dataset");

  std::string word, type;
  if (!(in >> word >> f.points >> type) || word != "POINTS") return fail("POINTS");
  f.coordinates.resize(f.points);
  for (auto& c : f.coordinates) {
    if (!(in >> c[0] >> c[1] >> c[2]) || !std::isfinite(c[0]) || !std::isfinite(c[1])) {
      return fail("point coordinates");
    }
  }
  std::size_t size = 0;
  if (!(in >> word >> f.cells >> size) || word != "CELLS" || size != 4 * f.cells) {
    return fail("CELLS");
  }
  for (std::size_t i = 0; i < f.cells; ++i) {
    std::size_t n = 0, a = 0, b = 0, c = 0;
    if (!(in >> n >> a >> b >> c) || n != 3) return fail("cell connectivity");
    if (a >= f.points || b >= f.points || c >= f.points) return fail("cell index out of range");
  }
  std::size_t type_count = 0;
  if (!(in >> word >> type_count) || word != "CELL_TYPES" || type_count != f.cells) {
    return fail("CELL_TYPES");
  }
  for (std::size_t i = 0; i < f.cells; ++i) {
    int cell_type = 0;
    if (!(in >> cell_type) || cell_type != 5) return fail("cell type");
  }
  std::size_t data_points = 0;
  if (!(in >> word >> data_points) || word != "POINT_DATA" || data_points != f.points) {
    return fail("POINT_DATA");
  }
  if (!(in >> word >> f.data_name >> type)) return fail("data section");
  if (word == "SCALARS") {
    int comps = 0;
    if (!(in >> comps) || comps != 1) return fail("scalar components");
    std::string lut, name;
    if (!(in >> lut >> name) || lut != "LOOKUP_TABLE") return fail("LOOKUP_TABLE");
    f.components = 1;
  } else if (word == "VECTORS") {
    f.components = 3;
  } else {
    return fail("unknown data kind " + word);
  }
  f.data.resize(f.points * static_cast<std::size_t>(f.components));
  for (double& v : f.data) {
    if (!(in >> v) || !std::isfinite(v)) return fail("point data");
  }
  if (in >> word) return fail("trailing content");
  f.valid = true;
  return f;
}

inline VtkFile read_vtk_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    VtkFile f;
    f.error = "cannot open " + path;
    return f;
  }
  return read_vtk(in);
}

}  // namespace oracle
