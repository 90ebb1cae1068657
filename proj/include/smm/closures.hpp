#pragma once

#include <array>
#include <span>
#include <vector>

#include "smm/angular_quad.hpp"
#include "smm/dg_space.hpp"
#include "smm/transport.hpp"

namespace smm {

/// Half-range moments of one face side at one face quadrature point, taken
/// with respect to a fixed face normal n:
///   jp = sum_{Omega.n>0} w (Omega.n) psi,  jm = sum_{Omega.n<0} w (Omega.n) psi,
///   pp/pm the same with an extra factor Omega, beta = sum w (|Omega.n| - alpha) psi.
struct HalfRange {
  double jp = 0.0;
  double jm = 0.0;
  Point pp;
  Point pm;
  double beta = 0.0;
};

/// Boundary face point: half-range moments of the interior trace (outward
/// normal) plus the incoming moments built from the boundary data.
struct BoundaryPoint {
  HalfRange trace;
  double j_in = 0.0;  // sum_{Omega.n<0} w (Omega.n) psi_in
  Point p_in;         // sum_{Omega.n<0} w Omega (Omega.n) psi_in
};

struct ClosureState {
  DgScalarField phi;
  DgVectorField current;
  DgTensorField pressure;
  /// sum w Omega_z^2 psi; with the in-plane pressure it completes the 3D trace.
  DgScalarField pressure_zz;
  /// T = P - I phi / 3 (in-plane block).
  DgTensorField correction;
  /// [face][side][point], side 0 = elem1, 1 = elem2, both relative to the face normal.
  std::vector<std::array<std::array<HalfRange, 2>, 2>> interior;
  /// [face][point]
  std::vector<std::array<BoundaryPoint, 2>> boundary;
  /// alpha per interior/boundary face normal.
  std::vector<double> interior_alpha;
  std::vector<double> boundary_alpha;
};

/// Discrete moments and face half-range sums of psi. Incoming boundary moments
/// use the stored inflow data, or the mirrored directions on reflecting faces
/// (mirror[d] as returned by TransportSweeper::mirror).
ClosureState compute_closures(const AngularFlux& psi, const SnQuadrature& q,
                              const BoundaryInflow& inflow, std::span<const int> mirror);
ClosureState compute_closures(const AngularFlux& psi, const TransportSweeper& sweeper);

struct MomentFlux {
  double jn = 0.0;  // J-hat . n
  Point pn;         // P-hat n
};

/// Upwind moment fluxes as sums of partial moments (J+_1 + J-_2, P+_1 + P-_2).
MomentFlux upwind_moment_fluxes(const ClosureState& s, int face, int point);
/// The same fluxes written with face averages and jumps of the full moments.
MomentFlux upwind_moment_fluxes_jump_form(const ClosureState& s, int face, int point);
/// Boundary variant: J+ + J_in, P+ n + P_in.
MomentFlux boundary_moment_fluxes(const ClosureState& s, int face, int point);

}  // namespace smm
