#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "smm/dg_space.hpp"
#include "test_util.hpp"

using namespace smm;
using smm::test::unit_mesh;

TEST_CASE("jump and average of face values") {
  const auto a = jump_avg(3.0, 1.0);
  CHECK(a.jump == 2.0);
  CHECK(a.avg == 2.0);
  const auto c = jump_avg(0.7, 0.7);
  CHECK(c.jump == 0.0);
  CHECK(c.avg == 0.7);
  const auto s = jump_avg(1.0, 3.0);
  CHECK(s.jump == -a.jump);
  CHECK(s.avg == a.avg);
}

TEST_CASE("jump and average on mesh faces") {
  auto mesh = unit_mesh(4);
  SUBCASE("continuous field has no jump") {
    const auto u = DgScalarField::interpolate(mesh, [](Point p) { return 1.0 + p.x * p.y; });
    for (const auto& f : mesh->interior_faces())
      for (double t : {0.0, 0.3, 1.0}) {
        const auto ja = jump_avg(u, f, t);
        CHECK(std::abs(ja.jump) < 1e-14);
        const Point x = f.at(t);
        CHECK(ja.avg == doctest::Approx(1.0 + x.x * x.y));
      }
  }
  SUBCASE("element-wise constants give the difference across the face") {
    DgScalarField u(mesh);
    for (int e = 0; e < mesh->num_elements(); ++e)
      for (double& c : u.element(e)) c = e;
    for (const auto& f : mesh->interior_faces()) {
      const auto ja = jump_avg(u, f, 0.5);
      CHECK(ja.jump == doctest::Approx(f.elem1 - f.elem2));
      CHECK(ja.avg == doctest::Approx(0.5 * (f.elem1 + f.elem2)));
    }
  }
}

TEST_CASE("partition of unity and basis ordering") {
  for (double xi : {0.0, 0.21, 0.5, 1.0})
    for (double eta : {0.0, 0.77, 1.0}) {
      const auto b = basis_values(xi, eta);
      CHECK(b[0] + b[1] + b[2] + b[3] == doctest::Approx(1.0));
      const auto g = basis_gradients(xi, eta);
      CHECK(std::abs(g[0][0] + g[1][0] + g[2][0] + g[3][0]) < 1e-15);
      CHECK(std::abs(g[0][1] + g[1][1] + g[2][1] + g[3][1]) < 1e-15);
    }
  const auto at_vertex1 = basis_values(1.0, 0.0);
  CHECK(at_vertex1[1] == 1.0);
  const auto at_vertex2 = basis_values(0.0, 1.0);
  CHECK(at_vertex2[2] == 1.0);
}

TEST_CASE("quadrature rules") {
  for (int n = 1; n <= 5; ++n) {
    const auto r = gauss_line(n);
    double s = 0.0, m = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
      CHECK(r.weights[q] > 0.0);
      s += r.weights[q];
      m += r.weights[q] * std::pow(r.points[q][0], 2 * n - 1);
    }
    CHECK(s == doctest::Approx(1.0));
    CHECK(m == doctest::Approx(1.0 / (2 * n)));  // exact to degree 2n-1
  }
  const auto sq = gauss_square(3);
  double s = 0.0;
  for (double w : sq.weights) s += w;
  CHECK(sq.size() == 9);
  CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("l2 errors") {
  auto mesh = unit_mesh(4);
  const auto bilinear = [](Point p) { return 2.0 - p.x + 3.0 * p.y + 0.5 * p.x * p.y; };
  CHECK(l2_error(DgScalarField::interpolate(mesh, bilinear), bilinear) <= 1e-12);
  CHECK(l2_error(DgScalarField(mesh), [](Point) { return 1.0; }) == doctest::Approx(1.0));
  const auto u = DgScalarField::interpolate(mesh, [](Point p) { return std::sin(p.x); });
  CHECK(l2_distance(u, u) == 0.0);

  DgVectorField v(mesh);
  CHECK(l2_error(v, [](Point) { return Point{3.0, 4.0}; }) == doctest::Approx(5.0));
}

TEST_CASE("interpolation error of sin(pi x) sin(pi y) is second order") {
  // Reference values from an independent 8x8-point Gauss evaluation.
  const double expected[] = {0.013328460668888075, 0.003360167181362389, 0.0008418047481285228};
  const auto f = [](Point p) { return std::sin(std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y); };
  double err[3];
  int k = 0;
  for (int n : {8, 16, 32}) {
    err[k] = l2_error(DgScalarField::interpolate(unit_mesh(n), f), f);
    CHECK(err[k] == doctest::Approx(expected[k]).epsilon(1e-6));
    ++k;
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.02));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("element matrices") {
  const Element unit{{0, 0, 1, 1}, 0};
  SUBCASE("mass entries sum to the area and the matrix is SPD") {
    const auto m = element_matrices(unit, 1.0, {1.0, 0.0});
    CHECK(m.mass.sum() == doctest::Approx(1.0));
    CHECK((m.mass - m.mass.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::SelfAdjointEigenSolver<Mat4> es(m.mass);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    const Element big{{1, 2, 3, 2.5}, 0};
    CHECK(element_matrices(big, 3.0, {0.0, 1.0}).mass.sum() == doctest::Approx(3.0 * 1.0));
  }
  SUBCASE("streaming columns sum to the boundary flux of each basis function") {
    // -int (Omega . grad b_i) b_j summed over j is -int Omega . grad b_i, i.e.
    // minus the outflow of b_i through the element boundary.
    const Element K{{0.0, 0.0, 0.5, 2.0}, 0};
    const Point om{0.6, -0.8};
    const auto m = element_matrices(K, 1.0, om);
    const double hx = 0.5, hy = 2.0;
    for (int i = 0; i < 4; ++i) {
      const int ix = i % 2, iy = i / 2;
      // b_i integrates to hy/2 on each vertical side it touches, hx/2 on horizontal ones
      const double flux_x = om.x * (ix == 1 ? 1.0 : -1.0) * hy / 2.0;
      const double flux_y = om.y * (iy == 1 ? 1.0 : -1.0) * hx / 2.0;
      CHECK(m.streaming.row(i).sum() == doctest::Approx(-(flux_x + flux_y)));
    }
  }
  SUBCASE("rect_ops agree with element_matrices") {
    const Box b{0.5, 0.25, 1.25, 0.5};
    const auto ops = rect_ops(b);
    const auto m = element_matrices(Element{b, 0}, 1.0, {1.0, 0.0});
    CHECK((ops.mass - m.mass).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((ops.grad_x + m.streaming).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("face mass integrates products of traces exactly") {
  // u = 1 - t + 2t, v = 3 + t on a face of length 2: int u v ds = 2 * int_0^1 (1+t)(3+t) dt
  const Mat2 m = face_mass(2.0);
  const Eigen::Vector2d u(1.0, 2.0), v(3.0, 4.0);
  CHECK(u.dot(m * v) == doctest::Approx(2.0 * (3.0 + 2.0 + 1.0 / 3.0)));
}

TEST_CASE("point evaluation and lineouts") {
  auto mesh = unit_mesh(4);
  const auto f = [](Point p) { return p.x + 2.0 * p.y; };
  const auto u = DgScalarField::interpolate(mesh, f);
  CHECK(u.eval({0.3, 0.6}) == doctest::Approx(1.5));
  const auto line = sample_line(u, {0.0, 0.5}, {1.0, 0.5}, 10);
  REQUIRE(line.size() == 10);
  CHECK(line.front().x == doctest::Approx(0.05));
  CHECK(line.back().x == doctest::Approx(0.95));
  for (const auto& s : line) CHECK(s.value == doctest::Approx(f({s.x, s.y})));
}

TEST_CASE("evaluation inside an element uses only its own coefficients") {
  auto mesh = unit_mesh(2);
  DgScalarField u(mesh);
  for (double& c : u.element(0)) c = 1.0;
  CHECK(u.eval({0.25, 0.25}) == 1.0);
  CHECK(u.eval({0.75, 0.25}) == 0.0);
  CHECK(u.coefficients().size() == 4 * 4);
}
