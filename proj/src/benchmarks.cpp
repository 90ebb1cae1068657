#include "smm/benchmarks.hpp"

#include <memory>

namespace smm::bench {

namespace {

struct MmsTerms {
  double s1, s2, s3;
  double s1x, s1y, s2x, s2y, s3x, s3y;
};

MmsTerms mms_terms(Point p, double delta) {
  const double pi = std::numbers::pi;
  const double c = 3.0 * pi / (1.0 + 2.0 * delta);
  const double ax = c * (p.x + delta), ay = c * (p.y + delta);
  MmsTerms t;
  t.s1 = std::sin(pi * p.x) * std::sin(pi * p.y);
  t.s1x = pi * std::cos(pi * p.x) * std::sin(pi * p.y);
  t.s1y = pi * std::sin(pi * p.x) * std::cos(pi * p.y);
  t.s2 = std::sin(2 * pi * p.x) * std::sin(2 * pi * p.y);
  t.s2x = 2 * pi * std::cos(2 * pi * p.x) * std::sin(2 * pi * p.y);
  t.s2y = 2 * pi * std::sin(2 * pi * p.x) * std::cos(2 * pi * p.y);
  t.s3 = std::sin(ax) * std::sin(ay);
  t.s3x = c * std::cos(ax) * std::sin(ay);
  t.s3y = c * std::sin(ax) * std::cos(ay);
  return t;
}

}  // namespace

double mms_phi(Point p, double delta) {
  const auto t = mms_terms(p, delta);
  return t.s1 + t.s3 / 6.0 + 2.0;
}

Point mms_current(Point p, double delta) {
  const double v = mms_terms(p, delta).s2 / 6.0;
  return {v, v};
}

double mms_source(Point p, const Direction& om, double sigma_t, double sigma_s, double delta) {
  const auto t = mms_terms(p, delta);
  const double ox = om[0], oy = om[1];
  const double a = ox + oy, b = ox * ox + oy * oy;
  const double inv4pi = 0.25 / std::numbers::pi;
  const double dx = t.s1x + a * t.s2x / 2.0 + b * t.s3x / 4.0;
  const double dy = t.s1y + a * t.s2y / 2.0 + b * t.s3y / 4.0;
  const double psi = (t.s1 + a * t.s2 / 2.0 + b * t.s3 / 4.0 + 2.0) * inv4pi;
  return (ox * dx + oy * dy) * inv4pi + sigma_t * psi - sigma_s * mms_phi(p, delta) * inv4pi;
}

ProblemSpec make_mms_problem(const MmsParams& p) {
  ProblemSpec spec;
  spec.mesh = std::make_shared<const Mesh>(build_cartesian(p.n, p.n, {0.0, 0.0, 1.0, 1.0}));
  spec.quad = level_symmetric(p.sn);
  spec.materials = {{p.sigma_t, p.sigma_s}};
  const double st = p.sigma_t, ss = p.sigma_s, delta = p.delta;
  spec.isotropic_source = false;
  spec.source = [=](Point x, const Direction& om) { return mms_source(x, om, st, ss, delta); };
  spec.inflow = [=](Point x, const Direction& om) { return mms_psi(x.x, x.y, om[0], om[1], delta); };
  return spec;
}

ProblemSpec make_diffusion_limit_problem(const DiffusionLimitParams& p) {
  ProblemSpec spec;
  spec.mesh = std::make_shared<const Mesh>(build_cartesian(p.n, p.n, {0.0, 0.0, 1.0, 1.0}));
  spec.quad = level_symmetric(p.sn);
  spec.materials = {{1.0 / p.eps, 1.0 / p.eps - p.eps}};
  const double q = p.eps;
  spec.source = [q](Point, const Direction&) { return q; };
  return spec;
}

RegionMap default_crooked_pipe_regions() {
  RegionMap r;
  r.default_material = 0;
  r.regions = {{{0.0, 0.0, 2.5, 0.5}, 1},
               {{2.5, 0.0, 3.0, 1.5}, 1},
               {{3.0, 1.0, 4.0, 1.5}, 1},
               {{4.0, 0.0, 4.5, 1.5}, 1},
               {{4.5, 0.0, 7.0, 0.5}, 1}};
  return r;
}

CrookedPipeParams default_crooked_pipe() {
  CrookedPipeParams p;
  p.regions = default_crooked_pipe_regions();
  return p;
}

ProblemSpec make_crooked_pipe_problem(const CrookedPipeParams& p) {
  EdgeTags tags;
  tags.bottom = BoundaryTag::Reflecting;
  Mesh mesh = build_cartesian(p.nx, p.ny, p.bbox, p.regions, tags);
  for (int i = 0; i < p.refine; ++i) mesh = uniform_refine(mesh);

  ProblemSpec spec;
  spec.mesh = std::make_shared<const Mesh>(std::move(mesh));
  spec.quad = level_symmetric(p.sn);
  spec.materials = {{p.wall_sigma_t, p.wall_sigma_t - p.sigma_a}, {p.pipe_sigma_t, p.pipe_sigma_t - p.sigma_a}};
  const double q = p.source;
  spec.source = [q](Point, const Direction&) { return q; };
  const double x0 = p.bbox.x0, ymax = p.inflow_ymax, val = p.inflow;
  spec.inflow = [=](Point x, const Direction&) {
    return (x.x == x0 && x.y <= ymax) ? val : 0.0;
  };
  return spec;
}

}  // namespace smm::bench
