#include <doctest.h>

#include <cmath>
#include <numbers>

#include "smm/driver.hpp"
#include "test_util.hpp"

using namespace smm;
using namespace smm::test;

namespace {

LoConfig ldg_half() { return LoConfig{}; }

double residual_norm(const std::vector<double>& x, const std::vector<double>& gx) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (gx[i] - x[i]) * (gx[i] - x[i]);
  return std::sqrt(s);
}

// G(x) = A x + b with a fixed contraction A (spectral radius 0.95).
struct ToyMap {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  ToyMap() : a(5, 5), b(5) {
    a << 0.95, 0.1, 0.0, 0.0, 0.0,  //
        0.0, 0.8, 0.1, 0.0, 0.0,    //
        0.0, 0.0, 0.6, 0.2, 0.0,    //
        0.0, 0.0, 0.0, -0.7, 0.1,   //
        0.0, 0.0, 0.0, 0.0, 0.3;
    b << 1.0, -1.0, 0.5, 2.0, 0.25;
  }
  std::vector<double> operator()(const std::vector<double>& x) const {
    const Eigen::VectorXd y = a * Eigen::Map<const Eigen::VectorXd>(x.data(), 5) + b;
    return {y.data(), y.data() + 5};
  }
};

int iterations_to_converge(const ToyMap& g, int depth) {
  AndersonMixer mixer(depth);
  std::vector<double> x(5, 0.0);
  for (int it = 1; it <= 1000; ++it) {
    auto gx = g(x);
    if (residual_norm(x, gx) < 1e-10) return it;
    x = mixer.step(x, gx);
  }
  return 1000;
}

}  // namespace

TEST_CASE("outer norm names") {
  CHECK(parse_outer_norm("relative-l2") == OuterNorm::RelativeL2);
  CHECK(parse_outer_norm("absolute-coefficient") == OuterNorm::AbsoluteCoefficient);
  CHECK(to_string(OuterNorm::AbsoluteCoefficient) == "absolute-coefficient");
  CHECK_THROWS_AS(parse_outer_norm("linf"), std::invalid_argument);
}

TEST_CASE("without scattering the outer loop needs at most two sweeps") {
  const ProblemSpec spec = simple_problem(6, 4, 1.0, 0.0, 0.5);
  for (auto m : {LoMethod::P1, LoMethod::LDG, LoMethod::IP}) {
    LoConfig lo;
    lo.method = m;
    OuterConfig outer;
    outer.tol = 1e-10;
    outer.inner_tol = 1e-13;
    const SmmResult r = solve_smm(spec, lo, outer);
    CHECK(r.iterations <= 2);
    // consistent LO solution equals the HO moments
    const ClosureState& cl = r.closures;
    CHECK(l2_distance(r.phi, cl.phi) < 1e-10 * l2_norm(cl.phi));
  }
}

TEST_CASE("infinite-medium surrogate reproduces the equilibrium flux") {
  // Inflow set to the infinite-medium angular flux makes it the exact solution.
  const double sigma_t = 1.0, sigma_s = 0.9, q = 0.05;
  const double phi_inf = 4.0 * std::numbers::pi * q / (sigma_t - sigma_s);
  ProblemSpec spec = simple_problem(4, 4, sigma_t, sigma_s, q);
  spec.inflow = [=](Point, const Direction&) { return phi_inf / (4.0 * std::numbers::pi); };
  OuterConfig outer;
  outer.tol = 1e-12;
  outer.inner_tol = 1e-13;
  const SmmResult r = solve_smm(spec, ldg_half(), outer);
  CHECK(l2_error(r.phi, [=](Point) { return phi_inf; }) < 1e-9 * phi_inf);
  CHECK(l2_error(r.current, [](Point) { return Point{}; }) < 1e-9 * phi_inf);
}

TEST_CASE("scattering source update") {
  const ProblemSpec spec = simple_problem(2, 2, 2.0, 1.0);
  const DgScalarField zero = source_update(spec, DgScalarField(spec.mesh));
  for (double v : zero.coefficients()) CHECK(v == 0.0);
  const auto phi = DgScalarField::interpolate(spec.mesh, [](Point x) { return x.x + 2.0 * x.y; });
  const DgScalarField s = source_update(spec, phi);
  CHECK(s.size() == phi.size());  // a Q1 field on the same mesh
  CHECK(l2_error(s, [](Point x) { return (x.x + 2.0 * x.y) / (4.0 * std::numbers::pi); }) < 1e-14);
}

TEST_CASE("records, limits and the selected norm") {
  const ProblemSpec spec = simple_problem(4, 4, 1.0, 0.9, 1.0);
  OuterConfig outer;
  outer.tol = 1e-8;
  std::vector<IterationRecord> seen;
  outer.history_sink = [&](const IterationRecord& r) { seen.push_back(r); };
  const SmmResult r = solve_smm(spec, ldg_half(), outer);
  REQUIRE(seen.size() == r.records.size());
  REQUIRE(r.iterations == static_cast<int>(r.records.size()));
  for (int k = 0; k < r.iterations; ++k) {
    const auto& rec = r.records[k];
    CHECK(rec.iteration == k + 1);
    CHECK(rec.residual == rec.update_norm);
    CHECK(rec.update_norm >= 0.0);
    CHECK(rec.update_max >= 0.0);
    CHECK(rec.inner_iterations >= 1);
    CHECK(rec.ho_balance < 1e-10);
    CHECK(rec.t_sweep >= 0.0);
  }
  CHECK(r.records.back().update_norm <= 1e-8);
  CHECK(r.records[r.iterations - 2].update_norm > 1e-8);

  outer.norm = OuterNorm::AbsoluteCoefficient;
  const SmmResult a = solve_smm(spec, ldg_half(), outer);
  CHECK(a.records.back().residual == a.records.back().update_coef);
  CHECK(a.records.back().update_coef <= 1e-8);

  SUBCASE("deterministic") {
    outer.history_sink = nullptr;
    const SmmResult b = solve_smm(spec, ldg_half(), outer);
    CHECK(b.iterations == a.iterations);
    CHECK(b.phi.coefficients() == a.phi.coefficients());
  }
  SUBCASE("iteration limit raises with the history attached") {
    outer.max_iters = 2;
    try {
      solve_smm(spec, ldg_half(), outer);
      FAIL("expected OuterConvergenceError");
    } catch (const OuterConvergenceError& ex) {
      CHECK(ex.history.size() == 2);
    }
  }
  SUBCASE("bad settings are rejected") {
    outer.tol = 0.0;
    CHECK_THROWS_AS(solve_smm(spec, ldg_half(), outer), std::invalid_argument);
    outer.tol = 1e-6;
    outer.anderson_depth = -1;
    CHECK_THROWS_AS(solve_smm(spec, ldg_half(), outer), std::invalid_argument);
  }
}

TEST_CASE("Anderson with zero depth is the plain fixed-point map") {
  std::vector<std::pair<std::vector<double>, std::vector<double>>> hist{
      {{1.0, 2.0}, {1.5, 1.0}}, {{1.5, 1.0}, {1.7, 0.8}}};
  CHECK(anderson_step(hist, 0) == std::vector<double>{1.7, 0.8});
  AndersonMixer mixer(0);
  CHECK(mixer.step({0.0, 0.0}, {3.0, 4.0}) == std::vector<double>{3.0, 4.0});
  CHECK(mixer.step({3.0, 4.0}, {5.0, 6.0}) == std::vector<double>{5.0, 6.0});
}

TEST_CASE("Anderson solves an affine map exactly once it has enough history") {
  // For G(x) = a x + b in one dimension, one secant step lands on the fixed point.
  const auto g = [](double x) { return 0.5 * x + 1.0; };
  std::vector<std::pair<std::vector<double>, std::vector<double>>> hist{{{0.0}, {g(0.0)}}, {{1.0}, {g(1.0)}}};
  CHECK(anderson_step(hist, 1)[0] == doctest::Approx(2.0));
}

TEST_CASE("Anderson tolerates a rank-deficient history") {
  std::vector<std::pair<std::vector<double>, std::vector<double>>> hist{
      {{0.0, 0.0}, {1.0, 1.0}}, {{1.0, 1.0}, {1.5, 1.5}}, {{1.5, 1.5}, {1.75, 1.75}}};
  const auto x = anderson_step(hist, 2);
  CHECK(std::isfinite(x[0]));
  CHECK(x[0] == doctest::Approx(2.0));
}

TEST_CASE("Anderson depth 2 beats plain iteration on a linear contraction") {
  const ToyMap g;
  const int plain = iterations_to_converge(g, 0);
  const int aa = iterations_to_converge(g, 2);
  CHECK(plain > 100);
  CHECK(aa < plain);
}

TEST_CASE("Anderson acceleration on a transport problem") {
  const ProblemSpec spec = simple_problem(6, 4, 10.0, 9.9, 1.0);
  OuterConfig outer;
  outer.tol = 1e-8;
  const int plain = solve_smm(spec, ldg_half(), outer).iterations;
  outer.anderson_depth = 5;
  const SmmResult aa = solve_smm(spec, ldg_half(), outer);
  CHECK(aa.iterations < plain);
  CHECK(l2_distance(aa.phi, aa.closures.phi) < 1e-7 * l2_norm(aa.phi));
}
