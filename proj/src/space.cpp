#include "ilg/space.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace ilg {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

P1Space::P1Space(const Triangulation& mesh) : mesh_(&mesh) {
  const int nt = mesh.triangle_count();
  const int nv = mesh.vertex_count();

  elements_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangle(t);
    Element& e = elements_[t];
    e.v = tri.v;
    const Vec2 p0 = mesh.vertex(tri.v[0]);
    const Vec2 p1 = mesh.vertex(tri.v[1]);
    const Vec2 p2 = mesh.vertex(tri.v[2]);
    e.area = 0.5 * cross(p1 - p0, p2 - p0);
    e.h = std::max({norm(p1 - p0), norm(p2 - p1), norm(p0 - p2)});
    const double inv2a = 1.0 / (2.0 * e.area);
    e.grad[0] = inv2a * perp(p2 - p1);
    e.grad[1] = inv2a * perp(p0 - p2);
    e.grad[2] = inv2a * perp(p1 - p0);
  }

  // edge table
  std::unordered_map<std::uint64_t, int> edge_id;
  edge_id.reserve(3 * nt);
  element_edges_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& v = elements_[t].v;
    for (int k = 0; k < 3; ++k) {
      const int a = v[(k + 1) % 3];
      const int b = v[(k + 2) % 3];
      const std::uint64_t key = edge_key(a, b);
      auto it = edge_id.find(key);
      if (it == edge_id.end()) {
        const int id = static_cast<int>(edges_.size());
        Edge e;
        e.a = std::min(a, b);
        e.b = std::max(a, b);
        e.left = t;
        e.right = -1;
        const Vec2 d = mesh.vertex(e.b) - mesh.vertex(e.a);
        e.length = norm(d);
        e.normal = (1.0 / e.length) * perp(d);
        edges_.push_back(e);
        edge_id.emplace(key, id);
        element_edges_[t][k] = id;
      } else {
        edges_[it->second].right = t;
        element_edges_[t][k] = it->second;
      }
    }
  }

  // interior dof numbering; boundary vertices from boundary edges
  vertex_to_dof_.assign(nv, 0);
  for (const auto& [a, b] : mesh.boundary_edges()) {
    vertex_to_dof_[a] = -1;
    vertex_to_dof_[b] = -1;
  }
  for (int v = 0; v < nv; ++v) {
    if (vertex_to_dof_[v] == 0) {
      vertex_to_dof_[v] = static_cast<int>(dof_to_vertex_.size());
      dof_to_vertex_.push_back(v);
    }
  }

  // CSR pattern: vertex adjacency restricted to interior dofs
  const int n = n_interior();
  std::vector<std::vector<int>> cols(n);
  for (int d = 0; d < n; ++d) cols[d].push_back(d);
  for (const auto& e : edges_) {
    const int da = vertex_to_dof_[e.a];
    const int db = vertex_to_dof_[e.b];
    if (da >= 0 && db >= 0) {
      cols[da].push_back(db);
      cols[db].push_back(da);
    }
  }
  row_ptr_.assign(n + 1, 0);
  for (int d = 0; d < n; ++d) {
    std::sort(cols[d].begin(), cols[d].end());
    cols[d].erase(std::unique(cols[d].begin(), cols[d].end()), cols[d].end());
    row_ptr_[d + 1] = row_ptr_[d] + static_cast<int>(cols[d].size());
  }
  col_idx_.reserve(row_ptr_[n]);
  for (int d = 0; d < n; ++d) col_idx_.insert(col_idx_.end(), cols[d].begin(), cols[d].end());

  scatter_.assign(9 * nt, -1);
  const auto find_pos = [&](int row, int col) {
    const int lo = row_ptr_[row];
    const int hi = row_ptr_[row + 1];
    const auto it = std::lower_bound(col_idx_.begin() + lo, col_idx_.begin() + hi, col);
    return static_cast<int>(it - col_idx_.begin());
  };
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const int di = vertex_to_dof_[elements_[t].v[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = vertex_to_dof_[elements_[t].v[j]];
        if (dj < 0) continue;
        scatter_[9 * t + 3 * i + j] = find_pos(di, dj);
      }
    }
  }
}

Vec2 P1Space::gradient(int t, std::span<const double> vertex_values) const {
  const Element& e = elements_[t];
  Vec2 g{0.0, 0.0};
  for (int k = 0; k < 3; ++k) g = g + vertex_values[e.v[k]] * e.grad[k];
  return g;
}

double P1Space::h1_seminorm(std::span<const double> vertex_values) const {
  double sum = 0.0;
  for (int t = 0; t < n_elements(); ++t) {
    const Vec2 g = gradient(t, vertex_values);
    sum += elements_[t].area * dot(g, g);
  }
  return std::sqrt(sum);
}

DiscreteFunction zero_function(const P1Space& space) {
  return {&space, std::vector<double>(space.n_vertices(), 0.0)};
}

DiscreteFunction nodal_interpolant(const P1Space& space, const std::function<double(Vec2)>& f) {
  DiscreteFunction u = zero_function(space);
  for (int v = 0; v < space.n_vertices(); ++v) {
    if (!space.is_boundary_vertex(v)) u.values[v] = f(space.mesh().vertex(v));
  }
  return u;
}

std::vector<double> gather_interior(const P1Space& space, const DiscreteFunction& u) {
  std::vector<double> x(space.n_interior());
  for (int d = 0; d < space.n_interior(); ++d) x[d] = u.values[space.vertex_of_dof(d)];
  return x;
}

DiscreteFunction from_interior(const P1Space& space, std::span<const double> interior) {
  DiscreteFunction u = zero_function(space);
  for (int d = 0; d < space.n_interior(); ++d) u.values[space.vertex_of_dof(d)] = interior[d];
  return u;
}

std::vector<double> prolong(std::span<const double> coarse_values, const RefineResult& refined) {
  std::vector<double> fine(refined.mesh.vertex_count(), 0.0);
  std::copy(coarse_values.begin(), coarse_values.end(), fine.begin());
  for (const auto& rec : refined.new_vertices)
    fine[rec.vertex] = 0.5 * (fine[rec.parent_a] + fine[rec.parent_b]);
  return fine;
}

double h1_distance(const P1Space& space, const DiscreteFunction& a, const DiscreteFunction& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("h1_distance: functions live on different meshes");
  std::vector<double> d(a.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
  return space.h1_seminorm(d);
}

}  // namespace ilg
