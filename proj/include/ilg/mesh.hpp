#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <utility>
#include <vector>

namespace ilg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Triangle with positive orientation. The edge opposite v[0] is the
/// refinement edge (newest-vertex convention).
struct Tri {
  std::array<int, 3> v{};
  int generation = 0;
};

/// Conforming triangulation of a polygonal domain. Boundary edges are derived
/// from the connectivity: an edge belonging to exactly one triangle is on the
/// boundary.
class Triangulation {
 public:
  Triangulation(std::vector<Vec2> vertices, std::vector<Tri> triangles);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  const Vec2& vertex(int i) const { return vertices_[i]; }
  const Tri& triangle(int t) const { return triangles_[t]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Tri>& triangles() const { return triangles_; }
  /// Index pairs (a < b), lexicographically sorted.
  const std::vector<std::pair<int, int>>& boundary_edges() const { return boundary_edges_; }

  double signed_area(int t) const;
  double total_area() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Tri> triangles_;
  std::vector<std::pair<int, int>> boundary_edges_;
};

struct MarkedSet {
  std::vector<int> elements;  // ascending, no duplicates
};

/// Provenance of a vertex created during refinement: midpoint of the edge
/// (parent_a, parent_b). Records are ordered so parents always precede
/// children, which makes nodal prolongation a single forward sweep.
struct MidpointRecord {
  int vertex;
  int parent_a;
  int parent_b;
};

struct RefineResult {
  Triangulation mesh;
  std::vector<MidpointRecord> new_vertices;
};

/// Initial mesh of the L-shaped domain (-1,1)^2 \ [0,1]x[-1,0]: 48 squares of
/// side 1/4, each split criss-cross into 4 triangles (192 in total). The
/// refinement edge of every triangle is its longest edge, the square side.
Triangulation make_lshape_initial();

/// Newest-vertex bisection: every marked triangle is bisected at least once;
/// recursive closure keeps the mesh conforming. Input vertices are preserved
/// (nested P1 spaces).
RefineResult refine(const Triangulation& mesh, const MarkedSet& marked);

double min_angle(const Triangulation& mesh);

/// Full conformity audit (orientation, edge sharing, hanging nodes, boundary
/// consistency). Throws std::runtime_error with a diagnostic on violation.
void validate(const Triangulation& mesh);

/// Plain-text dump: "nv nt", nv lines "x y", nt lines "i j k refedge",
/// "nb", nb boundary-edge lines. Debugging / plotting only.
void write_mesh(const Triangulation& mesh, std::ostream& os);

}  // namespace ilg
