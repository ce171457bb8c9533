#include "thermoporo/reference_element.hpp"

#include <algorithm>

namespace thermoporo {

namespace {

constexpr int kEdgeVertices[3][2] = {{0, 1}, {1, 2}, {2, 0}};
constexpr Vec2 kBaryGradient[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

// Basis values and derivatives with respect to the three barycentric
// coordinates; dphi[i][k] = d phi_i / d L_k.
void barycentric_basis(int degree, const std::array<double, 3>& L, std::span<double> phi,
                       std::span<std::array<double, 3>> dphi) {
  const bool want_d = !dphi.empty();
  if (want_d) std::fill(dphi.begin(), dphi.end(), std::array<double, 3>{0.0, 0.0, 0.0});
  switch (degree) {
    case 1:
      for (int i = 0; i < 3; ++i) {
        if (!phi.empty()) phi[i] = L[i];
        if (want_d) dphi[i][i] = 1.0;
      }
      break;
    case 2:
      for (int i = 0; i < 3; ++i) {
        if (!phi.empty()) phi[i] = L[i] * (2.0 * L[i] - 1.0);
        if (want_d) dphi[i][i] = 4.0 * L[i] - 1.0;
      }
      for (int e = 0; e < 3; ++e) {
        const int a = kEdgeVertices[e][0];
        const int b = kEdgeVertices[e][1];
        if (!phi.empty()) phi[3 + e] = 4.0 * L[a] * L[b];
        if (want_d) {
          dphi[3 + e][a] = 4.0 * L[b];
          dphi[3 + e][b] = 4.0 * L[a];
        }
      }
      break;
    case 3: {
      for (int i = 0; i < 3; ++i) {
        const double l = L[i];
        if (!phi.empty()) phi[i] = 0.5 * l * (3.0 * l - 1.0) * (3.0 * l - 2.0);
        if (want_d) dphi[i][i] = 0.5 * (27.0 * l * l - 18.0 * l + 2.0);
      }
      for (int e = 0; e < 3; ++e) {
        for (int s = 0; s < 2; ++s) {
          // s = 0: node nearer the edge's first vertex.
          const int near = kEdgeVertices[e][s];
          const int far = kEdgeVertices[e][1 - s];
          const int node = 3 + 2 * e + s;
          const double ln = L[near];
          const double lf = L[far];
          if (!phi.empty()) phi[node] = 4.5 * ln * lf * (3.0 * ln - 1.0);
          if (want_d) {
            dphi[node][near] = 4.5 * (6.0 * ln * lf - lf);
            dphi[node][far] = 4.5 * (3.0 * ln * ln - ln);
          }
        }
      }
      if (!phi.empty()) phi[9] = 27.0 * L[0] * L[1] * L[2];
      if (want_d) {
        dphi[9][0] = 27.0 * L[1] * L[2];
        dphi[9][1] = 27.0 * L[0] * L[2];
        dphi[9][2] = 27.0 * L[0] * L[1];
      }
      break;
    }
    default:
      throw InvalidInput("unsupported Lagrange degree " + std::to_string(degree));
  }
}

std::array<double, 3> barycentric(Point2 p) { return {1.0 - p.x - p.y, p.x, p.y}; }

}  // namespace

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  if (degree < 1 || degree > 3) {
    throw InvalidInput("unsupported Lagrange degree " + std::to_string(degree) +
                       " (supported: 1, 2, 3)");
  }
  const Point2 corners[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  nodes_.assign(corners, corners + 3);
  for (int e = 0; e < 3; ++e) {
    const Point2 a = corners[kEdgeVertices[e][0]];
    const Point2 b = corners[kEdgeVertices[e][1]];
    for (int s = 1; s < degree; ++s) {
      const double w = static_cast<double>(s) / degree;
      nodes_.push_back({(1.0 - w) * a.x + w * b.x, (1.0 - w) * a.y + w * b.y});
    }
  }
  if (degree == 3) nodes_.push_back({1.0 / 3.0, 1.0 / 3.0});
}

void ReferenceElement::evaluate(Point2 ref, std::span<double> values) const {
  barycentric_basis(degree_, barycentric(ref), values.first(nodes_.size()), {});
}

void ReferenceElement::gradients(Point2 ref, std::span<Vec2> grads) const {
  std::array<std::array<double, 3>, 10> dphi{};
  const auto n = nodes_.size();
  barycentric_basis(degree_, barycentric(ref), {}, std::span(dphi).first(n));
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      g[0] += dphi[i][k] * kBaryGradient[k][0];
      g[1] += dphi[i][k] * kBaryGradient[k][1];
    }
    grads[i] = g;
  }
}

ReferenceElement reference_element(int degree) { return ReferenceElement(degree); }

std::vector<int> edge_nodes(int degree, int local_edge) {
  std::vector<int> nodes{kEdgeVertices[local_edge][0]};
  for (int s = 0; s < degree - 1; ++s) nodes.push_back(3 + (degree - 1) * local_edge + s);
  nodes.push_back(kEdgeVertices[local_edge][1]);
  return nodes;
}

}  // namespace thermoporo
