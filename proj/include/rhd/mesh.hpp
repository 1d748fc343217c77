#pragma once

#include <array>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/state.hpp"

namespace rhd {

struct Mesh {
  int dim = 1;
  std::array<double, 2> low{0.0, 0.0};
  std::array<double, 2> high{1.0, 1.0};
  std::array<int, 2> cells{1, 1};
  std::array<double, 2> dx{1.0, 1.0};

  static Mesh line(double lo, double hi, int nx);
  static Mesh rect(double xlo, double xhi, int nx, double ylo, double yhi, int ny);

  int n_elements() const { return cells[0] * cells[1]; }
  int element(int ex, int ey) const { return ex + cells[0] * ey; }
};

/// Nodal conserved states on a tensor-product Gauss-Legendre grid. A 1-D field is the
/// 2-D layout with a single element row and a single node per element in y.
struct SolutionField {
  Mesh mesh;
  int degree = 1;
  std::vector<State> u;

  SolutionField() = default;
  SolutionField(const Mesh& m, int n);

  int n1() const { return degree + 1; }
  int n_y_nodes() const { return mesh.dim == 2 ? degree + 1 : 1; }
  int nodes_per_element() const { return n1() * n_y_nodes(); }
  int index(int e, int i, int j) const { return e * nodes_per_element() + i + n1() * j; }

  /// Physical coordinates of node (i, j) of element (ex, ey).
  std::array<double, 2> node_position(const BasisData& b, int ex, int ey, int i, int j) const;

  State element_mean(const BasisData& b, int e) const;
};

/// Weighted mean of nodal states; accumulated as differences from the first node.
State weighted_mean(const BasisData& b, int dim, const State* u);

}  // namespace rhd
