#include "ilg/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace ilg {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

Triangulation::Triangulation(std::vector<Vec2> vertices, std::vector<Tri> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = vertex_count();
  std::unordered_map<std::uint64_t, int> edge_count;
  edge_count.reserve(3 * triangles_.size());
  for (int t = 0; t < triangle_count(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      if (tri.v[k] < 0 || tri.v[k] >= nv)
        throw std::runtime_error("Triangulation: vertex index out of range in triangle " +
                                 std::to_string(t));
    }
    if (signed_area(t) <= 0.0)
      throw std::runtime_error("Triangulation: nonpositive area in triangle " + std::to_string(t));
    for (int k = 0; k < 3; ++k) {
      int n = ++edge_count[edge_key(tri.v[k], tri.v[(k + 1) % 3])];
      if (n > 2)
        throw std::runtime_error("Triangulation: edge shared by more than two triangles");
    }
  }
  for (const auto& [key, count] : edge_count) {
    if (count == 1)
      boundary_edges_.emplace_back(static_cast<int>(key >> 32),
                                   static_cast<int>(key & 0xffffffffu));
  }
  std::sort(boundary_edges_.begin(), boundary_edges_.end());
}

double Triangulation::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Vec2 p0 = vertices_[tri.v[0]];
  return 0.5 * cross(vertices_[tri.v[1]] - p0, vertices_[tri.v[2]] - p0);
}

double Triangulation::total_area() const {
  double a = 0.0;
  for (int t = 0; t < triangle_count(); ++t) a += signed_area(t);
  return a;
}

Triangulation make_lshape_initial() {
  // 9x9 lattice with spacing 1/4; lattice points strictly inside the removed
  // quadrant (x > 0 and y < 0) are dropped.
  int grid[9][9];
  std::vector<Vec2> verts;
  for (int j = 0; j < 9; ++j) {
    for (int i = 0; i < 9; ++i) {
      const double x = 0.25 * i - 1.0;
      const double y = 0.25 * j - 1.0;
      if (x > 0.0 && y < 0.0) {
        grid[i][j] = -1;
        continue;
      }
      grid[i][j] = static_cast<int>(verts.size());
      verts.push_back({x, y});
    }
  }
  std::vector<Tri> tris;
  tris.reserve(192);
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 8; ++i) {
      const bool removed = (i >= 4) && (j <= 3);  // square inside [0,1]x[-1,0]
      if (removed) continue;
      const int c00 = grid[i][j];
      const int c10 = grid[i + 1][j];
      const int c11 = grid[i + 1][j + 1];
      const int c01 = grid[i][j + 1];
      const int m = static_cast<int>(verts.size());
      verts.push_back({0.25 * i - 1.0 + 0.125, 0.25 * j - 1.0 + 0.125});
      // counterclockwise fan around the center; square side = refinement edge
      tris.push_back({{m, c00, c10}, 0});
      tris.push_back({{m, c10, c11}, 0});
      tris.push_back({{m, c11, c01}, 0});
      tris.push_back({{m, c01, c00}, 0});
    }
  }
  return Triangulation(std::move(verts), std::move(tris));
}

namespace {

/// Mutable refinement state: triangle list plus an edge -> adjacent triangles
/// table kept consistent across splits.
struct RefineState {
  std::vector<Vec2> verts;
  std::vector<Tri> tris;
  std::unordered_map<std::uint64_t, std::array<int, 2>> edge_tris;
  std::unordered_map<std::uint64_t, int> midpoints;
  std::vector<MidpointRecord> records;
  std::vector<char> intact;  // original slot still holds its input triangle

  void add_edge(std::uint64_t key, int t) {
    auto& slots = edge_tris.try_emplace(key, std::array<int, 2>{-1, -1}).first->second;
    if (slots[0] < 0) {
      slots[0] = t;
    } else if (slots[1] < 0) {
      slots[1] = t;
    } else {
      throw std::runtime_error("refine: edge acquired a third neighbor");
    }
  }

  void remove_edge(std::uint64_t key, int t) {
    auto it = edge_tris.find(key);
    if (it == edge_tris.end()) throw std::logic_error("refine: missing edge entry");
    auto& slots = it->second;
    if (slots[0] == t) {
      slots[0] = slots[1];
      slots[1] = -1;
    } else if (slots[1] == t) {
      slots[1] = -1;
    } else {
      throw std::logic_error("refine: stale edge entry");
    }
    if (slots[0] < 0) edge_tris.erase(it);
  }

  std::uint64_t refinement_edge(int t) const { return edge_key(tris[t].v[1], tris[t].v[2]); }

  int neighbor_across(int t, std::uint64_t key) const {
    auto it = edge_tris.find(key);
    if (it == edge_tris.end()) return -1;
    const auto& slots = it->second;
    if (slots[0] == t) return slots[1];
    if (slots[1] == t) return slots[0];
    throw std::logic_error("refine: triangle not registered on its edge");
  }

  int midpoint_of(int a, int b) {
    const std::uint64_t key = edge_key(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const int m = static_cast<int>(verts.size());
    verts.push_back(0.5 * (verts[a] + verts[b]));
    midpoints.emplace(key, m);
    records.push_back({m, a, b});
    return m;
  }

  /// Bisect triangle t across its refinement edge with midpoint m. The first
  /// child replaces slot t, the second is appended; both carry the newest
  /// vertex m first, so their refinement edges are the parent's old edges.
  void split(int t, int m) {
    const Tri old = tris[t];
    if (t < static_cast<int>(intact.size())) intact[t] = 0;
    remove_edge(edge_key(old.v[1], old.v[2]), t);
    remove_edge(edge_key(old.v[0], old.v[1]), t);
    remove_edge(edge_key(old.v[0], old.v[2]), t);
    const Tri child_a{{m, old.v[0], old.v[1]}, old.generation + 1};
    const Tri child_b{{m, old.v[2], old.v[0]}, old.generation + 1};
    tris[t] = child_a;
    const int j = static_cast<int>(tris.size());
    tris.push_back(child_b);
    add_edge(edge_key(old.v[0], old.v[1]), t);
    add_edge(edge_key(m, old.v[0]), t);
    add_edge(edge_key(m, old.v[1]), t);
    add_edge(edge_key(old.v[2], old.v[0]), j);
    add_edge(edge_key(m, old.v[2]), j);
    add_edge(edge_key(m, old.v[0]), j);
  }

  /// Bisect t with recursive compatibility closure: a triangle may only be
  /// bisected across an edge that is also the refinement edge of its
  /// neighbor, so incompatible neighbors are bisected first.
  void bisect_with_closure(int t0) {
    std::vector<int> path{t0};
    std::unordered_set<int> on_path{t0};
    while (true) {
      const int t = path.back();
      const std::uint64_t e = refinement_edge(t);
      const int nb = neighbor_across(t, e);
      if (nb >= 0 && refinement_edge(nb) != e) {
        if (on_path.count(nb) || path.size() > tris.size())
          throw std::runtime_error("refine: cycle in refinement-edge closure");
        path.push_back(nb);
        on_path.insert(nb);
      } else {
        break;
      }
    }
    while (!path.empty()) {
      const int t = path.back();
      path.pop_back();
      const std::uint64_t e = refinement_edge(t);
      const int nb = neighbor_across(t, e);
      const int m = midpoint_of(tris[t].v[1], tris[t].v[2]);
      split(t, m);
      if (nb >= 0) {
        if (refinement_edge(nb) != e)
          throw std::logic_error("refine: neighbor incompatible after closure");
        split(nb, m);
      }
    }
  }
};

}  // namespace

RefineResult refine(const Triangulation& mesh, const MarkedSet& marked) {
  if (marked.elements.empty())
    throw std::invalid_argument("refine: marked set must not be empty");
  for (int t : marked.elements) {
    if (t < 0 || t >= mesh.triangle_count())
      throw std::invalid_argument("refine: marked element index out of range");
  }

  RefineState state;
  state.verts = mesh.vertices();
  state.tris = mesh.triangles();
  state.edge_tris.reserve(3 * state.tris.size());
  for (int t = 0; t < static_cast<int>(state.tris.size()); ++t) {
    const auto& tri = state.tris[t];
    for (int k = 0; k < 3; ++k) state.add_edge(edge_key(tri.v[k], tri.v[(k + 1) % 3]), t);
  }

  state.intact.assign(mesh.triangle_count(), 1);
  std::vector<int> order(marked.elements);
  std::sort(order.begin(), order.end());
  // An original may be bisected while closing the refinement of an earlier
  // marked element; it then already satisfies "bisected at least once".
  for (int t : order) {
    if (!state.intact[t]) continue;
    state.bisect_with_closure(t);
  }

  RefineResult result{Triangulation(std::move(state.verts), std::move(state.tris)),
                      std::move(state.records)};
  return result;
}

double min_angle(const Triangulation& mesh) {
  double best = 4.0;  // > pi
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = mesh.vertex(tri.v[k]);
      const Vec2 e1 = mesh.vertex(tri.v[(k + 1) % 3]) - p;
      const Vec2 e2 = mesh.vertex(tri.v[(k + 2) % 3]) - p;
      best = std::min(best, std::atan2(std::abs(cross(e1, e2)), dot(e1, e2)));
    }
  }
  return best;
}

void validate(const Triangulation& mesh) {
  std::unordered_map<std::uint64_t, int> edge_count;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.signed_area(t) <= 0.0)
      throw std::runtime_error("validate: nonpositive area in triangle " + std::to_string(t));
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) ++edge_count[edge_key(tri.v[k], tri.v[(k + 1) % 3])];
  }
  std::vector<std::pair<int, int>> derived;
  for (const auto& [key, count] : edge_count) {
    if (count > 2) throw std::runtime_error("validate: edge shared by more than two triangles");
    if (count == 1)
      derived.emplace_back(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu));
  }
  std::sort(derived.begin(), derived.end());
  if (derived != mesh.boundary_edges())
    throw std::runtime_error("validate: stored boundary edges do not match connectivity");

  // Hanging-node audit: the midpoint of a single-sided edge must not be a
  // mesh vertex (it would be the hanging vertex of a finer neighbor).
  std::map<std::pair<double, double>, int> coord_index;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const Vec2 p = mesh.vertex(i);
    coord_index[{p.x, p.y}] = i;
  }
  for (const auto& [a, b] : derived) {
    const Vec2 m = 0.5 * (mesh.vertex(a) + mesh.vertex(b));
    if (coord_index.count({m.x, m.y}))
      throw std::runtime_error("validate: hanging node on edge (" + std::to_string(a) + "," +
                               std::to_string(b) + ")");
  }
}

void write_mesh(const Triangulation& mesh, std::ostream& os) {
  os << mesh.vertex_count() << ' ' << mesh.triangle_count() << '\n';
  os.precision(17);
  for (int i = 0; i < mesh.vertex_count(); ++i)
    os << mesh.vertex(i).x << ' ' << mesh.vertex(i).y << '\n';
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    // refinement edge is opposite the first listed vertex: local index 0
    os << tri.v[0] << ' ' << tri.v[1] << ' ' << tri.v[2] << " 0\n";
  }
  os << mesh.boundary_edges().size() << '\n';
  for (const auto& [a, b] : mesh.boundary_edges()) os << a << ' ' << b << '\n';
}

}  // namespace ilg
