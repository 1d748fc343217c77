#include "rhd/mesh.hpp"

namespace rhd {

Mesh Mesh::line(double lo, double hi, int nx) {
  if (nx < 1 || !(hi > lo)) throw ConfigError("invalid 1-D mesh extent or cell count");
  Mesh m;
  m.dim = 1;
  m.low = {lo, 0.0};
  m.high = {hi, 1.0};
  m.cells = {nx, 1};
  m.dx = {(hi - lo) / nx, 1.0};
  return m;
}

Mesh Mesh::rect(double xlo, double xhi, int nx, double ylo, double yhi, int ny) {
  if (nx < 1 || ny < 1 || !(xhi > xlo) || !(yhi > ylo))
    throw ConfigError("invalid 2-D mesh extent or cell count");
  Mesh m;
  m.dim = 2;
  m.low = {xlo, ylo};
  m.high = {xhi, yhi};
  m.cells = {nx, ny};
  m.dx = {(xhi - xlo) / nx, (yhi - ylo) / ny};
  return m;
}

SolutionField::SolutionField(const Mesh& m, int n) : mesh(m), degree(n) {
  u.assign(static_cast<size_t>(mesh.n_elements()) * nodes_per_element(), State::Zero());
}

std::array<double, 2> SolutionField::node_position(const BasisData& b, int ex, int ey, int i,
                                                   int j) const {
  const double x = mesh.low[0] + (ex + b.nodes[i]) * mesh.dx[0];
  const double y = mesh.dim == 2 ? mesh.low[1] + (ey + b.nodes[j]) * mesh.dx[1] : 0.0;
  return {x, y};
}

State weighted_mean(const BasisData& b, int dim, const State* u) {
  const int n1 = b.n_nodes();
  const int ny = dim == 2 ? n1 : 1;
  State acc = State::Zero();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < n1; ++i) {
      const double w = dim == 2 ? b.weights[i] * b.weights[j] : b.weights[i];
      acc += w * (u[i + n1 * j] - u[0]);
    }
  return u[0] + acc;
}

State SolutionField::element_mean(const BasisData& b, int e) const {
  return weighted_mean(b, mesh.dim, &u[index(e, 0, 0)]);
}

}  // namespace rhd
