#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "smm/config.hpp"

using namespace smm;

TEST_CASE("case names") {
  CHECK(parse_case("mms") == CaseName::Mms);
  CHECK(parse_case("diffusion-limit") == CaseName::DiffusionLimit);
  CHECK(parse_case("crooked-pipe") == CaseName::CrookedPipe);
  CHECK_THROWS_AS(parse_case("crooked_pipe"), ConfigError);
  for (CaseName c : {CaseName::Mms, CaseName::DiffusionLimit, CaseName::CrookedPipe})
    CHECK(parse_case(to_string(c)) == c);
}

TEST_CASE("defaults") {
  const RunConfig mms = default_config(CaseName::Mms);
  CHECK(mms.methods.size() == 6);
  CHECK(mms.mms.sizes == std::vector<int>{8, 16, 32, 64});
  CHECK(mms.mms.outer.norm == OuterNorm::AbsoluteCoefficient);

  const RunConfig dl = default_config(CaseName::DiffusionLimit);
  CHECK(dl.methods.size() == 8);
  CHECK(dl.diffusion.eps == std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4});

  RunConfig cp = default_config(CaseName::CrookedPipe);
  CHECK(cp.methods.size() == 7);
  CHECK(cp.crooked.anderson == std::vector<int>{0, 5});
  CHECK(cp.crooked.problem.sn == 12);
  CHECK(&cp.outer() == &cp.crooked.outer);

  CHECK(parse_config("", CaseName::Mms).methods.size() == 6);
}

TEST_CASE("MMS overrides") {
  const RunConfig c = parse_config(R"(
case: mms
sizes: [4, 8]
delta: 0.1
materials: {sigma_t: 3.0, sigma_s: 1.0}
quadrature: {sn: 6}
tolerances: {outer: 1.0e-8, inner: 1.0e-12, max_outer: 50, norm: relative-l2}
solver: {preconditioner: jacobi, anderson: 3}
methods:
  - {lo: ip, variant: independent}
  - {name: mine, lo: ldg, bc: full, ldg_w: [0.5, 0.5]}
)",
                                   CaseName::Mms);
  CHECK(c.mms.sizes == std::vector<int>{4, 8});
  CHECK(c.mms.problem.delta == 0.1);
  CHECK(c.mms.problem.sigma_t == 3.0);
  CHECK(c.mms.problem.sigma_s == 1.0);
  CHECK(c.mms.problem.sn == 6);
  CHECK(c.mms.outer.tol == 1e-8);
  CHECK(c.mms.outer.inner_tol == 1e-12);
  CHECK(c.mms.outer.max_iters == 50);
  CHECK(c.mms.outer.norm == OuterNorm::RelativeL2);
  CHECK(c.mms.outer.preconditioner == "jacobi");
  CHECK(c.mms.outer.anderson_depth == 3);
  REQUIRE(c.methods.size() == 2);
  CHECK(c.methods[0].lo.method == LoMethod::IP);
  CHECK(c.methods[0].lo.variant == LoVariant::Independent);
  CHECK(c.methods[0].lo.bc == LoBoundary::Full);
  CHECK(c.methods[0].name == c.methods[0].lo.label());
  CHECK(c.methods[1].name == "mine");
  CHECK(c.methods[1].lo.bc == LoBoundary::Full);
  CHECK(c.methods[1].lo.ldg_w.x == 0.5);
}

TEST_CASE("crooked pipe overrides") {
  const RunConfig c = parse_config(R"(
mesh: {nx: 28, ny: 8, bbox: [0, 0, 7, 2], refine: 1}
materials:
  wall: {sigma_t: 100, sigma_a: 0.01}
  pipe: {sigma_t: 0.1}
regions:
  default: wall
  boxes:
    - {box: [0, 0, 7, 0.5], material: pipe}
source: 2.0e-7
inflow: {value: 0.25, ymax: 0.25}
samples_per_element: 2
solver: {anderson: [0, 2, 4]}
)",
                                   CaseName::CrookedPipe);
  const auto& p = c.crooked.problem;
  CHECK(p.nx == 28);
  CHECK(p.ny == 8);
  CHECK(p.refine == 1);
  CHECK(p.wall_sigma_t == 100.0);
  CHECK(p.pipe_sigma_t == 0.1);
  CHECK(p.sigma_a == 0.01);
  REQUIRE(p.regions.regions.size() == 1);
  CHECK(p.regions.regions[0].material == 1);
  CHECK(p.regions.regions[0].box.y1 == 0.5);
  CHECK(p.source == 2e-7);
  CHECK(p.inflow == 0.25);
  CHECK(p.inflow_ymax == 0.25);
  CHECK(c.crooked.samples_per_element == 2);
  CHECK(c.crooked.anderson == std::vector<int>{0, 2, 4});
}

TEST_CASE("diffusion-limit overrides") {
  const RunConfig c = parse_config("eps: [0.5]\nmesh: {n: 4}\nlineout_points: 9\n", CaseName::DiffusionLimit);
  CHECK(c.diffusion.eps == std::vector<double>{0.5});
  CHECK(c.diffusion.n == 4);
  CHECK(c.diffusion.lineout_points == 9);
}

TEST_CASE("invalid configurations are rejected") {
  const auto bad = [](const char* text, CaseName c = CaseName::Mms) {
    CHECK_THROWS_AS(parse_config(text, c), ConfigError);
  };
  bad("colour: red\n");
  bad("eps: [0.1]\n");  // key of another case
  bad("case: crooked-pipe\n");
  bad("tolerances: {outer: -1}\n");
  bad("tolerances: {norm: max}\n");
  bad("tolerances: {outer: abc}\n");
  bad("tolerances: {max_outer: 0}\n");
  bad("tolerances: {tol: 1e-6}\n");
  bad("methods: {lo: p1}\n");
  bad("methods:\n  - {lo: p2}\n");
  bad("methods:\n  - {lo: p1, variant: independent}\n");
  bad("methods:\n  - {lo: ldg, ldg_w: [1, 2, 3]}\n");
  bad("methods:\n  - {lo: ip, flavour: x}\n");
  bad("sizes: [8\n");
  bad("regions: {boxes: [{box: [0, 0, 1], material: pipe}]}\n", CaseName::CrookedPipe);
  bad("regions: {boxes: [{box: [1, 0, 0, 1], material: pipe}]}\n", CaseName::CrookedPipe);
  bad("regions: {boxes: [{box: [0, 0, 1, 1], material: lead}]}\n", CaseName::CrookedPipe);
  bad("materials: {glass: {sigma_t: 1}}\n", CaseName::CrookedPipe);
}

TEST_CASE("shipped config files load") {
  const std::filesystem::path dir = SMM_CONFIG_DIR;
  const RunConfig mms = load_config((dir / "mms.yaml").string(), CaseName::Mms);
  CHECK(mms.mms.outer.tol == 1e-10);
  CHECK(mms.methods.size() == 6);
  const RunConfig dl = load_config((dir / "diffusion_limit.yaml").string(), CaseName::DiffusionLimit);
  CHECK(dl.methods.size() == 8);
  const RunConfig cp = load_config((dir / "crooked_pipe.yaml").string(), CaseName::CrookedPipe);
  CHECK(cp.methods.size() == 7);
  CHECK(cp.crooked.problem.nx == 224);
  CHECK(cp.crooked.problem.regions.regions.size() == 5);
  CHECK(cp.crooked.outer.norm == OuterNorm::AbsoluteCoefficient);
  CHECK_THROWS_AS(load_config((dir / "missing.yaml").string(), CaseName::Mms), ConfigError);
}
