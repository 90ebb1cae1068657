#include "smm/transport.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace smm {

namespace {

constexpr double kInv4Pi = 0.25 / std::numbers::pi;

Point side_normal(Side s) {
  switch (s) {
    case Side::Left: return {-1.0, 0.0};
    case Side::Right: return {1.0, 0.0};
    case Side::Bottom: return {0.0, -1.0};
    case Side::Top: return {0.0, 1.0};
  }
  return {};
}

Side opposite(Side s) {
  switch (s) {
    case Side::Left: return Side::Right;
    case Side::Right: return Side::Left;
    case Side::Bottom: return Side::Top;
    case Side::Top: return Side::Bottom;
  }
  return s;
}

double side_length(const Box& b, Side s) {
  return (s == Side::Left || s == Side::Right) ? b.height() : b.width();
}

// Gaussian elimination with partial pivoting; false on a (near) zero pivot.
bool solve4(Mat4 A, Vec4& b) {
  const double scale = A.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return false;
  for (int k = 0; k < 4; ++k) {
    int p = k;
    for (int i = k + 1; i < 4; ++i)
      if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
    if (std::abs(A(p, k)) <= 1e-14 * scale) return false;
    if (p != k) {
      A.row(p).swap(A.row(k));
      std::swap(b[p], b[k]);
    }
    for (int i = k + 1; i < 4; ++i) {
      const double f = A(i, k) / A(k, k);
      A.row(i).tail(4 - k) -= f * A.row(k).tail(4 - k);
      b[i] -= f * b[k];
    }
  }
  for (int k = 3; k >= 0; --k) {
    double s = b[k];
    for (int j = k + 1; j < 4; ++j) s -= A(k, j) * b[j];
    b[k] = s / A(k, k);
  }
  return true;
}

}  // namespace

void ProblemSpec::validate() const {
  if (!mesh) throw ConfigurationError("problem has no mesh");
  if (quad.size() == 0) throw ConfigurationError("problem has no angular quadrature");
  for (std::size_t m = 0; m < materials.size(); ++m) {
    const auto& mat = materials[m];
    if (!(mat.sigma_s >= 0.0) || !(mat.sigma_t >= mat.sigma_s))
      throw ConfigurationError("material " + std::to_string(m) +
                               ": need sigma_t >= sigma_s >= 0");
  }
  for (const auto& el : mesh->elements())
    if (el.material < 0 || el.material >= static_cast<int>(materials.size()))
      throw ConfigurationError("element material id " + std::to_string(el.material) +
                               " has no cross sections");
  const auto& tags = mesh->edge_tags();
  if (tags.left == BoundaryTag::Reflecting || tags.right == BoundaryTag::Reflecting ||
      tags.top == BoundaryTag::Reflecting)
    throw ConfigurationError("reflecting boundaries are supported on the bottom edge only");
  if (tags.bottom == BoundaryTag::Reflecting)
    for (int d = 0; d < quad.size(); ++d)
      if (quad.mirror(d, {0.0, -1.0}) < 0)
        throw ConfigurationError("direction " + std::to_string(d) + " has no mirror partner");
}

SourceLoads::SourceLoads(int num_dirs, int num_elements, bool shared)
    : shared_(shared),
      num_dirs_(num_dirs),
      data_(shared ? 1 : num_dirs, std::vector<double>(4 * static_cast<std::size_t>(num_elements))) {}

SourceLoads compute_source_loads(const ProblemSpec& spec) {
  const Mesh& mesh = *spec.mesh;
  const int nd = spec.quad.size();
  SourceLoads loads(nd, mesh.num_elements(), spec.isotropic_source);
  if (!spec.source) return loads;
  const auto rule = gauss_square(3);
  const int passes = spec.isotropic_source ? 1 : nd;
  for (int d = 0; d < passes; ++d) {
    const Direction& omega = spec.quad.direction(d);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const Box& b = mesh.element(e).box;
      auto out = loads.element(d, e);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double xi = rule.points[q][0], eta = rule.points[q][1];
        const double f = spec.source({b.x0 + xi * b.width(), b.y0 + eta * b.height()}, omega);
        const auto bv = basis_values(xi, eta);
        for (int a = 0; a < 4; ++a) out[a] += rule.weights[q] * b.area() * bv[a] * f;
      }
    }
  }
  return loads;
}

const QuadratureRule& face_rule() {
  static const QuadratureRule rule = gauss_line(2);
  return rule;
}

BoundaryInflow::BoundaryInflow(const ProblemSpec& spec)
    : num_faces_(static_cast<int>(spec.mesh->boundary_faces().size())),
      values_(static_cast<std::size_t>(spec.quad.size()) * num_faces_ * 2, 0.0) {
  if (!spec.inflow) return;
  const auto& rule = face_rule();
  const auto& faces = spec.mesh->boundary_faces();
  for (int d = 0; d < spec.quad.size(); ++d) {
    const Point om = spec.quad.planar(d);
    for (int f = 0; f < num_faces_; ++f) {
      const auto& face = faces[f];
      if (face.tag == BoundaryTag::Reflecting || dot(om, face.normal) >= 0.0) continue;
      for (int q = 0; q < 2; ++q)
        values_[(d * num_faces_ + f) * 2 + q] =
            spec.inflow(face.at(rule.points[q][0]), spec.quad.direction(d));
    }
  }
}

std::vector<int> reflecting_order(const SnQuadrature& q, const EdgeTags& tags) {
  std::vector<int> order;
  order.reserve(q.size());
  if (tags.bottom != BoundaryTag::Reflecting) {
    for (int d = 0; d < q.size(); ++d) order.push_back(d);
    return order;
  }
  for (int d = 0; d < q.size(); ++d)
    if (q.direction(d)[1] < 0.0) order.push_back(d);
  for (int d = 0; d < q.size(); ++d) {
    if (q.direction(d)[1] < 0.0) continue;
    if (q.mirror(d, {0.0, -1.0}) < 0)
      throw ConfigurationError("direction " + std::to_string(d) + " has no mirror partner");
    order.push_back(d);
  }
  return order;
}

TransportSweeper::TransportSweeper(const ProblemSpec& spec)
    : TransportSweeper(spec, compute_source_loads(spec)) {}

TransportSweeper::TransportSweeper(const ProblemSpec& spec, SourceLoads loads)
    : spec_(spec), loads_(std::move(loads)), inflow_(spec) {
  spec_.validate();
  order_ = reflecting_order(spec_.quad, spec_.mesh->edge_tags());
  mirror_.assign(spec_.quad.size(), -1);
  if (spec_.mesh->edge_tags().bottom == BoundaryTag::Reflecting)
    for (int d = 0; d < spec_.quad.size(); ++d) mirror_[d] = spec_.quad.mirror(d, {0.0, -1.0});
}

void TransportSweeper::local_system(int d, int e, const DgScalarField& psi_d,
                                    const AngularFlux& psi, const DgScalarField& scalar_flux,
                                    Mat4& A, Vec4& b) const {
  const Mesh& mesh = *spec_.mesh;
  const Box& box = mesh.element(e).box;
  const Material& mat = spec_.material(e);
  const Point om = spec_.quad.planar(d);
  const RectOps ops = rect_ops(box);

  A = mat.sigma_t * ops.mass - om.x * ops.grad_x - om.y * ops.grad_y;
  b = (mat.sigma_s * kInv4Pi) * (ops.mass * scalar_flux.local(e));
  const auto q = loads_.element(d, e);
  for (int a = 0; a < 4; ++a) b[a] += q[a];

  const auto& rule = face_rule();
  for (int si = 0; si < 4; ++si) {
    const Side s = static_cast<Side>(si);
    const double on = dot(om, side_normal(s));
    if (on == 0.0) continue;
    const auto& nodes = kSideNodes[si];
    const double len = side_length(box, s);
    const Mat2 fm = face_mass(len);
    if (on > 0.0) {
      for (int p = 0; p < 2; ++p)
        for (int r = 0; r < 2; ++r) A(nodes[p], nodes[r]) += on * fm(p, r);
      continue;
    }
    const FaceRef ref = mesh.face(e, s);
    if (!ref.boundary) {
      const auto& f = mesh.interior_faces()[ref.index];
      const int nb = f.elem1 == e ? f.elem2 : f.elem1;
      const auto& nn = kSideNodes[static_cast<int>(opposite(s))];
      const auto up = psi_d.element(nb);
      for (int p = 0; p < 2; ++p)
        b[nodes[p]] -= on * (fm(p, 0) * up[nn[0]] + fm(p, 1) * up[nn[1]]);
      continue;
    }
    const auto& bf = mesh.boundary_faces()[ref.index];
    if (bf.tag == BoundaryTag::Reflecting) {
      const auto up = psi[mirror_[d]].element(e);
      for (int p = 0; p < 2; ++p)
        b[nodes[p]] -= on * (fm(p, 0) * up[nodes[0]] + fm(p, 1) * up[nodes[1]]);
    } else {
      for (int g = 0; g < 2; ++g) {
        const double t = rule.points[g][0];
        const double v = inflow_.value(d, ref.index, g);
        b[nodes[0]] -= on * rule.weights[g] * len * (1.0 - t) * v;
        b[nodes[1]] -= on * rule.weights[g] * len * t * v;
      }
    }
  }
}

AngularFlux TransportSweeper::sweep(const DgScalarField& scalar_flux) const {
  const Mesh& mesh = *spec_.mesh;
  AngularFlux psi(spec_.mesh, spec_.quad.size());
  const int nx = mesh.nx(), ny = mesh.ny();
  Mat4 A;
  Vec4 b;
  for (int d : order_) {
    const Point om = spec_.quad.planar(d);
    const bool fx = om.x >= 0.0, fy = om.y >= 0.0;
    DgScalarField& out = psi[d];
    for (int jj = 0; jj < ny; ++jj) {
      const int j = fy ? jj : ny - 1 - jj;
      for (int ii = 0; ii < nx; ++ii) {
        const int i = fx ? ii : nx - 1 - ii;
        const int e = mesh.index(i, j);
        local_system(d, e, out, psi, scalar_flux, A, b);
        if (!solve4(A, b))
          throw SweepError("singular local transport system in element " + std::to_string(e), e);
        auto c = out.element(e);
        for (int a = 0; a < 4; ++a) c[a] = b[a];
      }
    }
  }
  return psi;
}

std::vector<std::vector<double>> TransportSweeper::residual(const AngularFlux& psi,
                                                            const DgScalarField& scalar_flux) const {
  const int ne = spec_.mesh->num_elements();
  std::vector<std::vector<double>> r(spec_.quad.size(), std::vector<double>(4 * ne));
  Mat4 A;
  Vec4 b;
  for (int d = 0; d < spec_.quad.size(); ++d)
    for (int e = 0; e < ne; ++e) {
      local_system(d, e, psi[d], psi, scalar_flux, A, b);
      const Vec4 res = A * psi[d].local(e) - b;
      for (int a = 0; a < 4; ++a) r[d][4 * e + a] = res[a];
    }
  return r;
}

double TransportSweeper::balance_residual(const AngularFlux& psi,
                                          const DgScalarField& scalar_flux) const {
  const Mesh& mesh = *spec_.mesh;
  const auto& quad = spec_.quad;
  const auto& rule = face_rule();
  double sources = 0.0, removal = 0.0, leakage = 0.0;

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double area = mesh.element(e).box.area();
    const Material& mat = spec_.material(e);
    const auto phi = scalar_flux.element(e);
    sources += mat.sigma_s * 0.25 * area * (phi[0] + phi[1] + phi[2] + phi[3]);
    double phi_ho = 0.0;
    for (int d = 0; d < quad.size(); ++d) {
      const auto c = psi[d].element(e);
      phi_ho += quad.weight(d) * (c[0] + c[1] + c[2] + c[3]);
      const auto q = loads_.element(d, e);
      sources += quad.weight(d) * (q[0] + q[1] + q[2] + q[3]);
    }
    removal += mat.sigma_t * 0.25 * area * phi_ho;
  }

  const auto& faces = mesh.boundary_faces();
  for (int d = 0; d < quad.size(); ++d) {
    const Point om = quad.planar(d);
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      const auto& face = faces[f];
      const double on = dot(om, face.normal);
      if (on > 0.0) {
        const double mean = 0.5 * (psi[d].trace(face.elem, face.side, 0.0) +
                                   psi[d].trace(face.elem, face.side, 1.0));
        leakage += quad.weight(d) * on * face.length * mean;
      } else if (on < 0.0) {
        double mean = 0.0;
        if (face.tag == BoundaryTag::Reflecting) {
          const int m = mirror_[d];
          mean = 0.5 * (psi[m].trace(face.elem, face.side, 0.0) + psi[m].trace(face.elem, face.side, 1.0));
        } else {
          for (int g = 0; g < 2; ++g) mean += rule.weights[g] * inflow_.value(d, f, g);
        }
        // incoming flow is negative leakage; counted as a source
        sources += quad.weight(d) * (-on) * face.length * mean;
      }
    }
  }

  const double scale = std::abs(sources) + std::abs(removal) + std::abs(leakage);
  if (scale == 0.0) return 0.0;
  return std::abs(sources - removal - leakage) / std::max(std::abs(sources), 1e-300);
}

AngularFlux sweep(const ProblemSpec& spec, const DgScalarField& scalar_flux) {
  return TransportSweeper(spec).sweep(scalar_flux);
}

DgScalarField scattering_source(const ProblemSpec& spec, const DgScalarField& scalar_flux) {
  DgScalarField out(spec.mesh);
  for (int e = 0; e < spec.mesh->num_elements(); ++e) {
    const double c = spec.material(e).sigma_s * kInv4Pi;
    const auto in = scalar_flux.element(e);
    auto o = out.element(e);
    for (int a = 0; a < 4; ++a) o[a] = c * in[a];
  }
  return out;
}

}  // namespace smm
