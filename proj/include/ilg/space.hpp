#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ilg/mesh.hpp"

namespace ilg {

/// Lowest-order Lagrange space on a triangulation with homogeneous Dirichlet
/// conditions. Caches element geometry, interior dof numbering, the edge
/// table, and the CSR sparsity pattern shared by every assembled operator.
/// The triangulation must outlive the space.
class P1Space {
 public:
  struct Element {
    std::array<int, 3> v;
    double area;
    double h;                  // longest edge (element diameter)
    std::array<Vec2, 3> grad;  // hat-function gradients, constant on the element
  };
  struct Edge {
    int a, b;         // vertex ids, a < b
    int left, right;  // adjacent elements; right = -1 on the boundary
    double length;
    Vec2 normal;  // unit normal, fixed (arbitrary) orientation
  };

  explicit P1Space(const Triangulation& mesh);

  const Triangulation& mesh() const { return *mesh_; }
  int n_vertices() const { return mesh_->vertex_count(); }
  int n_elements() const { return mesh_->triangle_count(); }
  int n_interior() const { return static_cast<int>(dof_to_vertex_.size()); }

  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge ids of element t; local slot k holds the edge opposite vertex k.
  const std::array<int, 3>& element_edges(int t) const { return element_edges_[t]; }

  bool is_boundary_vertex(int v) const { return vertex_to_dof_[v] < 0; }
  int dof_of_vertex(int v) const { return vertex_to_dof_[v]; }
  int vertex_of_dof(int d) const { return dof_to_vertex_[d]; }

  // CSR pattern over interior dofs
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  int nnz() const { return static_cast<int>(col_idx_.size()); }
  /// Position of local pair (i,j) of element t in the CSR value array, or -1
  /// if either vertex is on the boundary.
  int scatter(int t, int i, int j) const { return scatter_[9 * t + 3 * i + j]; }

  Vec2 gradient(int t, std::span<const double> vertex_values) const;
  /// |u|_{H1} = ||grad u||_{L2}, exact for P1 coefficients.
  double h1_seminorm(std::span<const double> vertex_values) const;

 private:
  const Triangulation* mesh_;
  std::vector<Element> elements_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<int> vertex_to_dof_;
  std::vector<int> dof_to_vertex_;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<int> scatter_;
};

/// Coefficient vector over mesh vertices; entries at boundary vertices are
/// exactly zero.
struct DiscreteFunction {
  const P1Space* space = nullptr;
  std::vector<double> values;
};

DiscreteFunction zero_function(const P1Space& space);
/// Nodal interpolant with boundary values forced to zero.
DiscreteFunction nodal_interpolant(const P1Space& space, const std::function<double(Vec2)>& f);

std::vector<double> gather_interior(const P1Space& space, const DiscreteFunction& u);
DiscreteFunction from_interior(const P1Space& space, std::span<const double> interior);

/// Transfer coefficients to the refined mesh (exact nested-space inclusion:
/// old vertices keep their values, new vertices interpolate edge midpoints).
std::vector<double> prolong(std::span<const double> coarse_values, const RefineResult& refined);

double h1_distance(const P1Space& space, const DiscreteFunction& a, const DiscreteFunction& b);

}  // namespace ilg
