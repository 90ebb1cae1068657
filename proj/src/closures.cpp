#include "smm/closures.hpp"

#include <cmath>

namespace smm {

namespace {

void accumulate(HalfRange& h, const Direction& om, double w, Point n, double alpha, double psi) {
  const double on = om[0] * n.x + om[1] * n.y;
  const double f = w * on * psi;
  if (on > 0.0) {
    h.jp += f;
    h.pp = h.pp + Point{f * om[0], f * om[1]};
  } else {
    h.jm += f;
    h.pm = h.pm + Point{f * om[0], f * om[1]};
  }
  h.beta += w * (std::abs(on) - alpha) * psi;
}

}  // namespace

ClosureState compute_closures(const AngularFlux& psi, const SnQuadrature& q,
                              const BoundaryInflow& inflow, std::span<const int> mirror) {
  const auto& mesh_ptr = psi[0].mesh_ptr();
  const Mesh& mesh = *mesh_ptr;
  ClosureState s;
  s.phi = DgScalarField(mesh_ptr);
  s.current = DgVectorField(mesh_ptr);
  s.pressure = DgTensorField(mesh_ptr);
  s.pressure_zz = DgScalarField(mesh_ptr);
  s.correction = DgTensorField(mesh_ptr);

  auto& phi = s.phi.coefficients();
  auto& jx = s.current[0].coefficients();
  auto& jy = s.current[1].coefficients();
  auto& pxx = s.pressure.xx.coefficients();
  auto& pxy = s.pressure.xy.coefficients();
  auto& pyy = s.pressure.yy.coefficients();
  auto& pzz = s.pressure_zz.coefficients();
  for (int d = 0; d < q.size(); ++d) {
    const auto& om = q.direction(d);
    const double w = q.weight(d);
    const auto& c = psi[d].coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double v = w * c[i];
      phi[i] += v;
      jx[i] += om[0] * v;
      jy[i] += om[1] * v;
      pxx[i] += om[0] * om[0] * v;
      pxy[i] += om[0] * om[1] * v;
      pyy[i] += om[1] * om[1] * v;
      pzz[i] += om[2] * om[2] * v;
    }
  }
  for (std::size_t i = 0; i < phi.size(); ++i) {
    s.correction.xx.coefficients()[i] = pxx[i] - phi[i] / 3.0;
    s.correction.xy.coefficients()[i] = pxy[i];
    s.correction.yy.coefficients()[i] = pyy[i] - phi[i] / 3.0;
  }

  const auto& rule = face_rule();
  const auto& ifaces = mesh.interior_faces();
  s.interior.assign(ifaces.size(), {});
  s.interior_alpha.resize(ifaces.size());
  for (std::size_t f = 0; f < ifaces.size(); ++f) {
    const auto& face = ifaces[f];
    const double alpha = q.alpha(face.normal);
    s.interior_alpha[f] = alpha;
    for (int d = 0; d < q.size(); ++d)
      for (int g = 0; g < 2; ++g) {
        const double t = rule.points[g][0];
        accumulate(s.interior[f][0][g], q.direction(d), q.weight(d), face.normal, alpha,
                   psi[d].trace(face.elem1, face.side1, t));
        accumulate(s.interior[f][1][g], q.direction(d), q.weight(d), face.normal, alpha,
                   psi[d].trace(face.elem2, face.side2, t));
      }
  }

  const auto& bfaces = mesh.boundary_faces();
  s.boundary.assign(bfaces.size(), {});
  s.boundary_alpha.resize(bfaces.size());
  for (std::size_t f = 0; f < bfaces.size(); ++f) {
    const auto& face = bfaces[f];
    const double alpha = q.alpha(face.normal);
    s.boundary_alpha[f] = alpha;
    for (int d = 0; d < q.size(); ++d) {
      const auto& om = q.direction(d);
      const double on = om[0] * face.normal.x + om[1] * face.normal.y;
      for (int g = 0; g < 2; ++g) {
        const double t = rule.points[g][0];
        auto& bp = s.boundary[f][g];
        accumulate(bp.trace, om, q.weight(d), face.normal, alpha,
                   psi[d].trace(face.elem, face.side, t));
        if (on >= 0.0) continue;
        const double in = face.tag == BoundaryTag::Reflecting
                              ? psi[mirror[d]].trace(face.elem, face.side, t)
                              : inflow.value(d, static_cast<int>(f), g);
        const double v = q.weight(d) * on * in;
        bp.j_in += v;
        bp.p_in = bp.p_in + Point{v * om[0], v * om[1]};
      }
    }
  }
  return s;
}

ClosureState compute_closures(const AngularFlux& psi, const TransportSweeper& sweeper) {
  std::vector<int> mirror(sweeper.spec().quad.size());
  for (int d = 0; d < static_cast<int>(mirror.size()); ++d) mirror[d] = sweeper.mirror(d);
  return compute_closures(psi, sweeper.spec().quad, sweeper.inflow(), mirror);
}

MomentFlux upwind_moment_fluxes(const ClosureState& s, int face, int point) {
  const auto& h1 = s.interior[face][0][point];
  const auto& h2 = s.interior[face][1][point];
  return {h1.jp + h2.jm, h1.pp + h2.pm};
}

MomentFlux upwind_moment_fluxes_jump_form(const ClosureState& s, int face, int point) {
  const auto& f = s.phi.mesh().interior_faces()[face];
  const double t = face_rule().points[point][0];
  const Point n = f.normal;
  const auto& h1 = s.interior[face][0][point];
  const auto& h2 = s.interior[face][1][point];
  const double alpha = s.interior_alpha[face];

  const auto jn = [&](int e, Side side) {
    return s.current[0].trace(e, side, t) * n.x + s.current[1].trace(e, side, t) * n.y;
  };
  const auto phi = jump_avg(s.phi, f, t);
  const auto cur = jump_avg(jn(f.elem1, f.side1), jn(f.elem2, f.side2));
  const Point p1 = s.pressure.trace_dot(f.elem1, f.side1, t, n);
  const Point p2 = s.pressure.trace_dot(f.elem2, f.side2, t, n);
  const Point dpm1 = h1.pp - h1.pm, dpm2 = h2.pp - h2.pm;

  MomentFlux out;
  // sum w |Omega.n| psi = alpha phi + beta on each side
  out.jn = cur.avg + 0.5 * (alpha * phi.jump + (h1.beta - h2.beta));
  out.pn = 0.5 * (p1 + p2) + 0.5 * (dpm1 - dpm2);
  return out;
}

MomentFlux boundary_moment_fluxes(const ClosureState& s, int face, int point) {
  const auto& bp = s.boundary[face][point];
  return {bp.trace.jp + bp.j_in, bp.trace.pp + bp.p_in};
}

}  // namespace smm
