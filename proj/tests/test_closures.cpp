#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "smm/closures.hpp"
#include "test_util.hpp"

using namespace smm;
using namespace smm::test;

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

}  // namespace

TEST_CASE("isotropic flux: no current, no correction tensor, no beta") {
  const ProblemSpec spec = simple_problem(3, 4, 1.0, 0.0);
  const TransportSweeper sweeper(spec);
  const double c = 0.7;
  const ClosureState s = compute_closures(constant_psi(spec.mesh, spec.quad.size(), c), sweeper);
  for (double v : s.phi.coefficients()) CHECK(v == doctest::Approx(kFourPi * c));
  for (int k = 0; k < 2; ++k)
    for (double v : s.current[k].coefficients()) CHECK(std::abs(v) < 1e-14);
  for (const auto* t : {&s.correction.xx, &s.correction.xy, &s.correction.yy})
    for (double v : t->coefficients()) CHECK(std::abs(v) < 1e-13);
  for (const auto& face : s.interior)
    for (const auto& pt : face)
      for (const auto& side : pt) {
        CHECK(std::abs(side.beta) < 1e-13);
        CHECK(side.jp == doctest::Approx(0.5 * s.interior_alpha[0] * kFourPi * c));
        CHECK(side.jm == doctest::Approx(-side.jp));
      }
  for (int f = 0; f < static_cast<int>(s.interior.size()); ++f)
    CHECK(std::abs(upwind_moment_fluxes(s, f, 0).jn) < 1e-14);
}

TEST_CASE("vacuum downwind: upwind current is the outgoing partial current") {
  const ProblemSpec spec = simple_problem(2, 4, 1.0, 0.0);
  const TransportSweeper sweeper(spec);
  const double c = 1.3;
  AngularFlux psi(spec.mesh, spec.quad.size());
  for (int d = 0; d < psi.size(); ++d)
    for (double& v : psi[d].element(0)) v = c;  // element 0 only; element 1 to its right is empty
  const ClosureState s = compute_closures(psi, sweeper);
  const auto& mesh = *spec.mesh;
  for (int f = 0; f < static_cast<int>(mesh.interior_faces().size()); ++f) {
    const auto& face = mesh.interior_faces()[f];
    if (face.elem1 != 0 || face.normal.x != 1.0) continue;
    const double alpha = spec.quad.alpha(face.normal);
    CHECK(upwind_moment_fluxes(s, f, 0).jn == doctest::Approx(2.0 * std::numbers::pi * alpha * c));
    CHECK(upwind_moment_fluxes(s, f, 1).jn == doctest::Approx(2.0 * std::numbers::pi * alpha * c));
  }
}

TEST_CASE("linearly anisotropic flux returns its own moments") {
  const ProblemSpec spec = simple_problem(3, 6, 1.0, 0.0);
  const TransportSweeper sweeper(spec);
  const auto phi = [](Point x) { return 2.0 + x.x; };
  const auto jx = [](Point x) { return 0.3 * x.y; };
  const auto jy = [](Point x) { return -0.2 + 0.1 * x.x * x.y; };
  AngularFlux psi(spec.mesh, spec.quad.size());
  for (int d = 0; d < psi.size(); ++d) {
    const auto& o = spec.quad.direction(d);
    psi[d] = DgScalarField::interpolate(
        spec.mesh, [&](Point x) { return (phi(x) + 3.0 * (o[0] * jx(x) + o[1] * jy(x))) / kFourPi; });
  }
  const ClosureState s = compute_closures(psi, sweeper);
  CHECK(l2_error(s.phi, phi) < 1e-13);
  CHECK(l2_error(s.current[0], jx) < 1e-13);
  CHECK(l2_error(s.current[1], jy) < 1e-13);
  for (const auto* t : {&s.correction.xx, &s.correction.xy, &s.correction.yy})
    CHECK(l2_norm(*t) < 1e-13);
}

TEST_CASE("closure identities and flux forms on random angular fluxes") {
  std::mt19937 rng(2024);
  for (bool reflecting : {false, true}) {
    const ProblemSpec spec = two_material_problem(reflecting);
    const TransportSweeper sweeper(spec);
    for (int trial = 0; trial < 50; ++trial) {
      const AngularFlux psi = random_psi(spec.mesh, spec.quad.size(), rng, -1.0, 2.0);
      const ClosureState s = compute_closures(psi, sweeper);
      CHECK(identity_violation(s, *spec.mesh) < 1e-12);
      CHECK(flux_form_mismatch(s, *spec.mesh) < 1e-13);
    }
  }
}

TEST_CASE("boundary moment fluxes add the inflow partial moments") {
  const ProblemSpec spec = two_material_problem(false);
  const TransportSweeper sweeper(spec);
  std::mt19937 rng(5);
  const ClosureState s = compute_closures(random_psi(spec.mesh, spec.quad.size(), rng), sweeper);
  for (int f = 0; f < static_cast<int>(s.boundary.size()); ++f)
    for (int g = 0; g < 2; ++g) {
      const auto& bp = s.boundary[f][g];
      const auto flux = boundary_moment_fluxes(s, f, g);
      CHECK(flux.jn == doctest::Approx(bp.trace.jp + bp.j_in));
      CHECK(flux.pn.x == doctest::Approx(bp.trace.pp.x + bp.p_in.x));
      CHECK(bp.j_in <= 0.0);  // positive inflow data flows inward
    }
}

TEST_CASE("consistency cancellation for every consistent method and boundary treatment") {
  std::mt19937 rng(99);
  for (bool reflecting : {false, true})
    for (const LoConfig& cfg : all_lo_configs()) {
      if (cfg.variant != LoVariant::Consistent) continue;
      CAPTURE(cfg.label());
      CAPTURE(reflecting);
      const ProblemSpec spec = two_material_problem(reflecting);
      for (int trial = 0; trial < 5; ++trial) {
        const AngularFlux psi = random_psi(spec.mesh, spec.quad.size(), rng);
        CHECK(cancellation_residual(spec, psi, cfg) <= 1e-12);
      }
    }
}

TEST_CASE("independent variants do not cancel on rough fluxes") {
  std::mt19937 rng(7);
  const ProblemSpec spec = two_material_problem(false);
  const AngularFlux psi = random_psi(spec.mesh, spec.quad.size(), rng);
  for (const LoConfig& cfg : all_lo_configs())
    if (cfg.variant == LoVariant::Independent) CHECK(cancellation_residual(spec, psi, cfg) > 1e-3);
}
