#pragma once

#include <cmath>
#include <numbers>

#include "smm/transport.hpp"

namespace smm::bench {

/// Manufactured angular flux on [0,1]^2:
///   psi = (S1 + (Ox + Oy) S2 / 2 + (Ox^2 + Oy^2) S3 / 4 + 2) / (4 pi)
/// with S1 = sin(pi x) sin(pi y), S2 = sin(2 pi x) sin(2 pi y) and
/// S3 = sin(c (x + delta)) sin(c (y + delta)), c = 3 pi / (1 + 2 delta).
/// Templated so tests can differentiate it with complex steps.
template <class T>
T mms_psi(T x, T y, double ox, double oy, double delta = 0.05) {
  using std::sin;
  const double pi = std::numbers::pi;
  const double c = 3.0 * pi / (1.0 + 2.0 * delta);
  const T s1 = sin(pi * x) * sin(pi * y);
  const T s2 = sin(2.0 * pi * x) * sin(2.0 * pi * y);
  const T s3 = sin(c * (x + delta)) * sin(c * (y + delta));
  return (s1 + (ox + oy) * s2 / 2.0 + (ox * ox + oy * oy) * s3 / 4.0 + 2.0) / (4.0 * pi);
}

double mms_phi(Point p, double delta = 0.05);
Point mms_current(Point p, double delta = 0.05);
/// q = Omega . grad psi + sigma_t psi - sigma_s phi / (4 pi), per steradian.
double mms_source(Point p, const Direction& om, double sigma_t, double sigma_s, double delta = 0.05);

struct MmsParams {
  int n = 8;
  int sn = 4;
  double delta = 0.05;
  double sigma_t = 2.0;
  double sigma_s = 1.9;
};

ProblemSpec make_mms_problem(const MmsParams& p);

struct DiffusionLimitParams {
  double eps = 0.1;
  int n = 8;
  int sn = 4;
};

/// sigma_t = 1/eps, sigma_s = 1/eps - eps, q = eps, vacuum boundaries.
ProblemSpec make_diffusion_limit_problem(const DiffusionLimitParams& p);

struct CrookedPipeParams {
  int nx = 224;
  int ny = 64;
  int refine = 0;
  int sn = 12;
  Box bbox{0.0, 0.0, 7.0, 2.0};
  double wall_sigma_t = 200.0;
  double pipe_sigma_t = 0.2;
  double sigma_a = 1e-3;
  double source = 1e-7;
  double inflow = 0.5 / std::numbers::pi;
  double inflow_ymax = 0.5;
  /// Material 0 is wall, 1 is pipe.
  RegionMap regions;
};

/// Pipe boxes of the half domain (wall everywhere else).
RegionMap default_crooked_pipe_regions();
CrookedPipeParams default_crooked_pipe();
ProblemSpec make_crooked_pipe_problem(const CrookedPipeParams& p);

}  // namespace smm::bench
