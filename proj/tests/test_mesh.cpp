#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ilg/mesh.hpp"

using namespace ilg;

namespace {

MarkedSet mark_all(const Triangulation& mesh) {
  MarkedSet m;
  m.elements.resize(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) m.elements[t] = t;
  return m;
}

}  // namespace

TEST_CASE("initial L-shape mesh") {
  const Triangulation mesh = make_lshape_initial();
  CHECK(mesh.triangle_count() == 192);
  // 81 lattice points - 16 excluded + 48 square centers
  CHECK(mesh.vertex_count() == 113);
  validate(mesh);

  for (int t = 0; t < mesh.triangle_count(); ++t)
    CHECK(mesh.signed_area(t) == doctest::Approx(0.25 * 0.25 / 4.0).epsilon(1e-14));
  CHECK(mesh.total_area() == doctest::Approx(3.0).epsilon(1e-14));

  // criss-cross triangles are right isosceles
  CHECK(min_angle(mesh) == doctest::Approx(M_PI / 4.0).epsilon(1e-13));

  // all boundary vertices lie on the boundary of the L-shape
  for (const auto& [a, b] : mesh.boundary_edges()) {
    for (int v : {a, b}) {
      const Vec2 p = mesh.vertex(v);
      const bool outer = std::abs(p.x) == 1.0 || std::abs(p.y) == 1.0;
      const bool reentrant = (p.x == 0.0 && p.y <= 0.0) || (p.y == 0.0 && p.x >= 0.0);
      CHECK((outer || reentrant));
    }
  }
}

TEST_CASE("uniform marking bisects every triangle once") {
  const Triangulation mesh = make_lshape_initial();
  const RefineResult r = refine(mesh, mark_all(mesh));
  CHECK(r.mesh.triangle_count() == 384);
  validate(r.mesh);
  CHECK(r.mesh.total_area() == doctest::Approx(3.0).epsilon(1e-14));

  // parent vertices are preserved with identical coordinates (nestedness)
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    CHECK(r.mesh.vertex(v).x == mesh.vertex(v).x);
    CHECK(r.mesh.vertex(v).y == mesh.vertex(v).y);
  }
  // every new vertex is the midpoint of its recorded parents
  for (const auto& rec : r.new_vertices) {
    const Vec2 m = 0.5 * (r.mesh.vertex(rec.parent_a) + r.mesh.vertex(rec.parent_b));
    CHECK(r.mesh.vertex(rec.vertex).x == m.x);
    CHECK(r.mesh.vertex(rec.vertex).y == m.y);
  }
}

TEST_CASE("single marked triangle stays conforming with bounded closure") {
  const Triangulation mesh = make_lshape_initial();
  // an interior triangle: find one whose vertices are all interior-ish
  const RefineResult r = refine(mesh, MarkedSet{{97}});
  validate(r.mesh);
  const int added = r.mesh.triangle_count() - mesh.triangle_count();
  CHECK(added >= 2);
  CHECK(added <= 8);
}

TEST_CASE("empty marking is rejected") {
  const Triangulation mesh = make_lshape_initial();
  CHECK_THROWS_AS(refine(mesh, MarkedSet{}), std::invalid_argument);
}

TEST_CASE("marked index out of range is rejected") {
  const Triangulation mesh = make_lshape_initial();
  CHECK_THROWS_AS(refine(mesh, MarkedSet{{192}}), std::invalid_argument);
}

TEST_CASE("degenerate triangle is rejected at construction") {
  std::vector<Vec2> verts{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  std::vector<Tri> tris{{{0, 1, 2}, 0}};
  CHECK_THROWS_AS(Triangulation(verts, tris), std::runtime_error);
}

TEST_CASE("20 random refinement sweeps keep shape regularity and area") {
  Triangulation mesh = make_lshape_initial();
  std::mt19937 rng(42);
  for (int sweep = 0; sweep < 20; ++sweep) {
    std::uniform_int_distribution<int> pick(0, mesh.triangle_count() - 1);
    std::set<int> marked;
    for (int k = 0; k < std::max(1, mesh.triangle_count() / 10); ++k) marked.insert(pick(rng));
    MarkedSet m;
    m.elements.assign(marked.begin(), marked.end());
    mesh = refine(mesh, m).mesh;
    validate(mesh);
    CHECK(min_angle(mesh) >= 0.3);
    CHECK(std::abs(mesh.total_area() - 3.0) <= 3.0e-12);
  }
  // NVB on the criss-cross mesh only ever produces right isosceles triangles
  CHECK(min_angle(mesh) == doctest::Approx(M_PI / 4.0).epsilon(1e-12));
}

TEST_CASE("uniform sweeps double the element count") {
  Triangulation mesh = make_lshape_initial();
  int expected = 192;
  for (int sweep = 0; sweep < 4; ++sweep) {
    mesh = refine(mesh, mark_all(mesh)).mesh;
    expected *= 2;
    CHECK(mesh.triangle_count() == expected);
    validate(mesh);
  }
}

TEST_CASE("mesh dump round-trips the counts") {
  const Triangulation mesh = make_lshape_initial();
  std::ostringstream os;
  write_mesh(mesh, os);
  std::istringstream is(os.str());
  int nv = 0, nt = 0;
  is >> nv >> nt;
  CHECK(nv == 113);
  CHECK(nt == 192);
}
