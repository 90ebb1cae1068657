#include <doctest.h>

#include <cmath>
#include <set>

#include "smm/mesh.hpp"

using namespace smm;

namespace {

// Signed outward normals times lengths around element e, from the face lists.
Point closure_sum(const Mesh& m, int e) {
  Point s;
  for (int k = 0; k < 4; ++k) {
    const FaceRef f = m.face(e, static_cast<Side>(k));
    if (f.boundary) {
      const auto& bf = m.boundary_faces()[f.index];
      s = s + bf.length * bf.normal;
    } else {
      const auto& inf = m.interior_faces()[f.index];
      const double sign = inf.elem1 == e ? 1.0 : -1.0;
      s = s + (sign * inf.length) * inf.normal;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("two-element strip has the hand-counted faces") {
  const Mesh m = build_cartesian(2, 1, {0, 0, 2, 1});
  CHECK(m.num_elements() == 2);
  REQUIRE(m.interior_faces().size() == 1);
  CHECK(m.boundary_faces().size() == 6);
  const auto& f = m.interior_faces()[0];
  CHECK(f.normal.x == 1.0);
  CHECK(f.normal.y == 0.0);
  CHECK(f.elem1 == 0);
  CHECK(f.elem2 == 1);
  CHECK(f.length == doctest::Approx(1.0));
}

TEST_CASE("8x8 unit square") {
  const Mesh m = build_cartesian(8, 8, {0, 0, 1, 1});
  CHECK(m.h() == doctest::Approx(0.125));
  CHECK(m.num_elements() == 64);
  CHECK(m.interior_faces().size() == 112);
  CHECK(m.boundary_faces().size() == 32);
}

TEST_CASE("crooked pipe base mesh size") {
  const Mesh m = build_cartesian(224, 64, {0, 0, 7, 2});
  CHECK(m.h() == doctest::Approx(3.125e-2).epsilon(1e-14));
  CHECK(m.num_elements() == 14336);
}

TEST_CASE("invalid construction is rejected") {
  CHECK_THROWS_AS(build_cartesian(0, 4, {0, 0, 1, 1}), MeshError);
  CHECK_THROWS_AS(build_cartesian(4, 0, {0, 0, 1, 1}), MeshError);
  CHECK_THROWS_AS(build_cartesian(4, 4, {1, 0, 0, 1}), MeshError);
}

TEST_CASE("face partition, orientation and closure") {
  const Mesh m = build_cartesian(5, 3, {-1.0, 0.5, 2.0, 3.0});
  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < m.num_elements(); ++e) {
    for (int k = 0; k < 4; ++k) {
      const FaceRef f = m.face(e, static_cast<Side>(k));
      REQUIRE(f.index >= 0);
      CHECK(seen.insert({e, k}).second);
      if (f.boundary) CHECK(m.boundary_faces()[f.index].elem == e);
      else {
        const auto& inf = m.interior_faces()[f.index];
        CHECK((inf.elem1 == e || inf.elem2 == e));
      }
    }
    const Point s = closure_sum(m, e);
    CHECK(std::abs(s.x) < 1e-14);
    CHECK(std::abs(s.y) < 1e-14);
  }
  // every edge exactly once: 4 Ne = 2 interior + boundary
  CHECK(4 * m.num_elements() == 2 * static_cast<int>(m.interior_faces().size()) +
                                    static_cast<int>(m.boundary_faces().size()));
  for (const auto& f : m.interior_faces()) {
    CHECK(f.elem1 != f.elem2);
    const Point d = m.element(f.elem2).centroid() - m.element(f.elem1).centroid();
    CHECK(dot(f.normal, d) > 0.0);
  }
  double area = 0.0;
  for (const auto& el : m.elements()) {
    CHECK(el.box.area() > 0.0);
    area += el.box.area();
  }
  CHECK(std::abs(area - m.bbox().area()) <= 1e-12 * m.bbox().area());
}

TEST_CASE("boundary faces carry the edge tags") {
  EdgeTags tags;
  tags.bottom = BoundaryTag::Reflecting;
  const Mesh m = build_cartesian(3, 2, {0, 0, 3, 2}, {}, tags);
  int reflecting = 0;
  for (const auto& f : m.boundary_faces()) {
    const bool bottom = f.normal.y < -0.5;
    CHECK((f.tag == BoundaryTag::Reflecting) == bottom);
    reflecting += bottom;
  }
  CHECK(reflecting == 3);
}

TEST_CASE("materials are assigned by centroid, first box wins") {
  RegionMap r;
  r.default_material = 7;
  r.regions = {{{0.0, 0.0, 0.5, 1.0}, 1}, {{0.0, 0.0, 1.0, 0.5}, 2}};
  const Mesh m = build_cartesian(2, 2, {0, 0, 1, 1}, r);
  CHECK(m.element(m.index(0, 0)).material == 1);  // both boxes contain it
  CHECK(m.element(m.index(1, 0)).material == 2);
  CHECK(m.element(m.index(0, 1)).material == 1);
  CHECK(m.element(m.index(1, 1)).material == 7);
}

TEST_CASE("uniform refinement") {
  const Mesh m = build_cartesian(8, 8, {0, 0, 1, 1});
  const Mesh r = uniform_refine(m);
  CHECK(r.nx() == 16);
  CHECK(r.ny() == 16);
  CHECK(r.h() == doctest::Approx(0.5 * m.h()));
  CHECK(uniform_refine(r).nx() == 4 * m.nx());

  SUBCASE("children tile each parent") {
    for (int j = 0; j < m.ny(); ++j)
      for (int i = 0; i < m.nx(); ++i) {
        double a = 0.0;
        for (int cj = 0; cj < 2; ++cj)
          for (int ci = 0; ci < 2; ++ci) {
            const auto& child = r.element(r.index(2 * i + ci, 2 * j + cj));
            CHECK(m.element(m.index(i, j)).box.contains(child.centroid()));
            a += child.box.area();
          }
        CHECK(std::abs(a - m.element(m.index(i, j)).box.area()) < 1e-12);
      }
  }
}

TEST_CASE("refinement re-evaluates materials") {
  RegionMap r;
  r.regions = {{{0.0, 0.0, 0.3, 1.0}, 1}};
  const Mesh m = build_cartesian(2, 1, {0, 0, 1, 1}, r);
  CHECK(m.element(0).material == 1);  // centroid x = 0.25
  const Mesh f = uniform_refine(m);
  CHECK(f.element(f.index(0, 0)).material == 1);  // x = 0.125
  CHECK(f.element(f.index(1, 0)).material == 0);  // x = 0.375
}

TEST_CASE("four refinements of the crooked pipe base mesh") {
  Mesh m = build_cartesian(224, 64, {0, 0, 7, 2});
  for (int i = 0; i < 4; ++i) m = uniform_refine(m);
  CHECK(m.nx() == 3584);
  CHECK(m.ny() == 1024);
  CHECK(m.num_elements() == 3670016);
}

TEST_CASE("locate assigns shared edges to the upper/right element") {
  const Mesh m = build_cartesian(4, 4, {0, 0, 1, 1});
  CHECK(m.locate({0.5, 0.5}) == m.index(2, 2));
  CHECK(m.locate({0.1, 0.1}) == m.index(0, 0));
  CHECK(m.locate({1.0, 1.0}) == m.index(3, 3));
}
