#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "smm/benchmarks.hpp"

using namespace smm;
using namespace smm::bench;

TEST_CASE("manufactured source by complex-step differentiation") {
  // q = Omega . grad psi + sigma_t psi - sigma_s phi / 4pi, with the gradient
  // from complex steps of the templated psi.
  std::mt19937 rng(63);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-30, st = 2.0, ss = 1.9;
  for (int k = 0; k < 200; ++k) {
    const Point x{u(rng), u(rng)};
    const double mu = 2.0 * u(rng) - 1.0, az = 2.0 * std::numbers::pi * u(rng);
    const double s = std::sqrt(1.0 - mu * mu);
    const Direction o{s * std::cos(az), s * std::sin(az), mu};
    using C = std::complex<double>;
    const double dx = mms_psi(C(x.x, h), C(x.y, 0.0), o[0], o[1]).imag() / h;
    const double dy = mms_psi(C(x.x, 0.0), C(x.y, h), o[0], o[1]).imag() / h;
    const double psi = mms_psi(x.x, x.y, o[0], o[1]);
    const double q = o[0] * dx + o[1] * dy + st * psi - ss * mms_phi(x) / (4.0 * std::numbers::pi);
    CHECK(std::abs(mms_source(x, o, st, ss) - q) <= 1e-12);
  }
}

TEST_CASE("manufactured moments match quadrature sums of psi") {
  // psi is quadratic in Omega, so any set with exact second moments integrates it.
  const auto quad = level_symmetric(4);
  for (const Point x : {Point{0.1, 0.2}, Point{0.5, 0.5}, Point{0.93, 0.41}}) {
    double phi = 0.0;
    Point j;
    for (int d = 0; d < quad.size(); ++d) {
      const auto& o = quad.direction(d);
      const double v = quad.weight(d) * mms_psi(x.x, x.y, o[0], o[1]);
      phi += v;
      j = j + v * Point{o[0], o[1]};
    }
    CHECK(mms_phi(x) == doctest::Approx(phi).epsilon(1e-13));
    CHECK(mms_current(x).x == doctest::Approx(j.x).epsilon(1e-12));
    CHECK(mms_current(x).y == doctest::Approx(j.y).epsilon(1e-12));
  }
}

TEST_CASE("MMS problem definition") {
  const ProblemSpec spec = make_mms_problem({});
  CHECK(spec.mesh->num_elements() == 64);
  CHECK(spec.quad.size() == 12);
  CHECK(spec.materials[0].sigma_t == 2.0);
  CHECK(spec.materials[0].sigma_s == 1.9);
  CHECK_FALSE(spec.isotropic_source);
  const Direction o = spec.quad.direction(3);
  CHECK(spec.inflow({0.0, 0.3}, o) == doctest::Approx(mms_psi(0.0, 0.3, o[0], o[1])));
}

TEST_CASE("diffusion-limit problem definition") {
  for (double eps : {1e-1, 1e-4}) {
    const ProblemSpec spec = make_diffusion_limit_problem({eps, 8, 4});
    CHECK(spec.mesh->num_elements() == 64);
    CHECK(spec.materials[0].sigma_t == doctest::Approx(1.0 / eps));
    CHECK(spec.materials[0].sigma_a() == doctest::Approx(eps).epsilon(1e-9));
    CHECK(spec.source({0.5, 0.5}, spec.quad.direction(0)) == eps);
    CHECK_FALSE(spec.inflow);
  }
}

TEST_CASE("crooked pipe problem definition") {
  const CrookedPipeParams p = default_crooked_pipe();
  CHECK(p.wall_sigma_t / p.pipe_sigma_t == doctest::Approx(1000.0));
  const ProblemSpec spec = make_crooked_pipe_problem(p);
  const Mesh& m = *spec.mesh;
  CHECK(m.num_elements() == 14336);
  CHECK(spec.quad.size() == 84);
  CHECK(spec.materials[0].sigma_t == 200.0);
  CHECK(spec.materials[1].sigma_t == doctest::Approx(0.2));
  CHECK(spec.materials[0].sigma_a() == doctest::Approx(1e-3));
  CHECK(spec.materials[1].sigma_a() == doctest::Approx(1e-3));
  CHECK(m.edge_tags().bottom == BoundaryTag::Reflecting);
  CHECK(m.edge_tags().left == BoundaryTag::Inflow);

  // pipe along the axis at entry and exit, wall above it, the jog through y = 1.25
  CHECK(m.element(m.locate({0.1, 0.25})).material == 1);
  CHECK(m.element(m.locate({6.9, 0.25})).material == 1);
  CHECK(m.element(m.locate({0.1, 1.0})).material == 0);
  CHECK(m.element(m.locate({3.5, 1.25})).material == 1);
  CHECK(m.element(m.locate({3.5, 0.25})).material == 0);
  CHECK(m.element(m.locate({2.75, 0.75})).material == 1);
  CHECK(m.element(m.locate({4.25, 0.75})).material == 1);
  CHECK(m.element(m.locate({3.5, 1.75})).material == 0);

  // every pipe box edge lies on a mesh line
  for (const auto& r : p.regions.regions)
    for (double v : {r.box.x0 / m.hx(), r.box.x1 / m.hx(), r.box.y0 / m.hy(), r.box.y1 / m.hy()})
      CHECK(std::abs(v - std::round(v)) < 1e-12);

  const Direction in{0.5, 0.5, std::sqrt(0.5)};
  CHECK(spec.inflow({0.0, 0.25}, in) == doctest::Approx(0.5 / std::numbers::pi));
  CHECK(spec.inflow({0.0, 0.75}, in) == 0.0);
  CHECK(spec.inflow({7.0, 0.25}, in) == 0.0);
  CHECK(spec.source({1.0, 1.0}, in) == 1e-7);

  CrookedPipeParams r = p;
  r.nx = 28;
  r.ny = 8;
  r.refine = 2;
  CHECK(make_crooked_pipe_problem(r).mesh->nx() == 112);
}
