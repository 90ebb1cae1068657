#include "smm/lo_diffusion.hpp"

#include <cmath>

namespace smm {

void LoConfig::validate() const {
  if (method == LoMethod::P1 && (variant != LoVariant::Consistent || bc != LoBoundary::Half))
    throw UnsupportedConfiguration("P1 supports only the consistent variant with half-range boundaries");
  if (method == LoMethod::LDG && ldg_w.x == 0.0 && ldg_w.y == 0.0)
    throw UnsupportedConfiguration("LDG switch vector must be non-zero");
  if (method == LoMethod::LDG && ldg_kappa && *ldg_kappa < 0.0)
    throw UnsupportedConfiguration("LDG kappa must be non-negative");
  if (method == LoMethod::IP && !(ip_c > 0.0))
    throw UnsupportedConfiguration("IP penalty constant must be positive");
}

std::string to_string(LoMethod m) {
  switch (m) {
    case LoMethod::P1: return "p1";
    case LoMethod::LDG: return "ldg";
    case LoMethod::IP: return "ip";
  }
  return "?";
}

std::string to_string(LoVariant v) { return v == LoVariant::Consistent ? "consistent" : "independent"; }
std::string to_string(LoBoundary b) { return b == LoBoundary::Half ? "half" : "full"; }

std::string LoConfig::label() const {
  std::string s = to_string(method) + "-" + to_string(variant) + "-" + to_string(bc);
  if (method == LoMethod::IP && ip_mode == PenaltyMode::Plain) s += "-plain";
  return s;
}

LoMethod parse_method(const std::string& s) {
  if (s == "p1") return LoMethod::P1;
  if (s == "ldg") return LoMethod::LDG;
  if (s == "ip") return LoMethod::IP;
  throw std::invalid_argument("unknown LO method '" + s + "' (expected p1, ldg, ip)");
}

LoVariant parse_variant(const std::string& s) {
  if (s == "consistent") return LoVariant::Consistent;
  if (s == "independent") return LoVariant::Independent;
  throw std::invalid_argument("unknown variant '" + s + "' (expected consistent, independent)");
}

LoBoundary parse_boundary(const std::string& s) {
  if (s == "half") return LoBoundary::Half;
  if (s == "full") return LoBoundary::Full;
  throw std::invalid_argument("unknown boundary treatment '" + s + "' (expected half, full)");
}

PenaltyMode parse_penalty_mode(const std::string& s) {
  if (s == "mip") return PenaltyMode::MIP;
  if (s == "plain") return PenaltyMode::Plain;
  throw std::invalid_argument("unknown penalty mode '" + s + "' (expected mip, plain)");
}

SparseMatrix BlockSystem::full() const {
  const int nj = m_j.rows(), np = m_phi.rows();
  std::vector<Triplet> t;
  t.reserve(m_j.nnz() + g.nnz() + d.nnz() + m_phi.nnz());
  const auto add = [&](const SparseMatrix& m, int r0, int c0) {
    for (int r = 0; r < m.rows(); ++r)
      for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
        t.push_back({r0 + r, c0 + m.col_idx()[k], m.values()[k]});
  };
  add(m_j, 0, 0);
  add(g, 0, nj);
  add(d, nj, 0);
  add(m_phi, nj, nj);
  return SparseMatrix::from_triplets(nj + np, nj + np, std::move(t));
}

std::vector<double> BlockSystem::full_rhs() const {
  std::vector<double> b(rhs_j);
  b.insert(b.end(), rhs_phi.begin(), rhs_phi.end());
  return b;
}

double BlockSystem::relative_residual(std::span<const double> j, std::span<const double> phi) const {
  std::vector<double> rj = m_j * j, gphi = g * phi, dj = d * j, mphi = m_phi * phi;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rj.size(); ++i) {
    const double r = rhs_j[i] - rj[i] - gphi[i];
    num += r * r;
    den += rhs_j[i] * rhs_j[i];
  }
  for (std::size_t i = 0; i < dj.size(); ++i) {
    const double r = rhs_phi[i] - dj[i] - mphi[i];
    num += r * r;
    den += rhs_phi[i] * rhs_phi[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

MomentLoads moment_loads(const SourceLoads& loads, const SnQuadrature& q, int num_elements) {
  MomentLoads m;
  m.q0.assign(4 * static_cast<std::size_t>(num_elements), 0.0);
  m.q1.assign(8 * static_cast<std::size_t>(num_elements), 0.0);
  for (int d = 0; d < q.size(); ++d) {
    const double w = q.weight(d);
    const auto& om = q.direction(d);
    for (int e = 0; e < num_elements; ++e) {
      const auto l = loads.element(d, e);
      for (int a = 0; a < 4; ++a) {
        m.q0[phi_dof(e, a)] += w * l[a];
        m.q1[cur_dof(e, 0, a)] += w * om[0] * l[a];
        m.q1[cur_dof(e, 1, a)] += w * om[1] * l[a];
      }
    }
  }
  return m;
}

double ip_penalty(const ProblemSpec& spec, const LoConfig& cfg, int interior_face, double alpha) {
  const Mesh& mesh = *spec.mesh;
  const auto& f = mesh.interior_faces()[interior_face];
  const double s1 = spec.material(f.elem1).sigma_t, s2 = spec.material(f.elem2).sigma_t;
  const double sigma = 2.0 * s1 * s2 / (s1 + s2);
  const Box& b1 = mesh.element(f.elem1).box;
  const Box& b2 = mesh.element(f.elem2).box;
  const bool vertical = f.normal.x != 0.0;
  const double h = 0.5 * (vertical ? b1.width() + b2.width() : b1.height() + b2.height());
  const double k_ip = cfg.ip_c / (3.0 * sigma * h);
  return cfg.ip_mode == PenaltyMode::MIP ? std::max(k_ip, 0.5 * alpha) : k_ip;
}

namespace {

struct SideRef {
  int elem;
  std::array<int, 2> nodes;
  double sign;
};

std::array<SideRef, 2> face_sides(const InteriorFace& f) {
  return {{{f.elem1, kSideNodes[static_cast<int>(f.side1)], 1.0},
           {f.elem2, kSideNodes[static_cast<int>(f.side2)], -1.0}}};
}

double comp(Point p, int k) { return k == 0 ? p.x : p.y; }

double interior_kappa(const ProblemSpec& spec, const LoConfig& cfg, int face, double alpha) {
  switch (cfg.method) {
    case LoMethod::P1: return 0.5 * alpha;
    case LoMethod::LDG: return cfg.ldg_kappa ? *cfg.ldg_kappa : 0.5 * alpha;
    case LoMethod::IP: return ip_penalty(spec, cfg, face, alpha);
  }
  return 0.0;
}

}  // namespace

BlockSystem assemble_operator(const ProblemSpec& spec, const LoConfig& cfg) {
  cfg.validate();
  const Mesh& mesh = *spec.mesh;
  for (const auto& m : spec.materials)
    if (!(m.sigma_t > 0.0)) throw ConfigurationError("LO system requires sigma_t > 0 in every material");
  const int ne = mesh.num_elements();
  const bool ldg = cfg.method == LoMethod::LDG, p1 = cfg.method == LoMethod::P1;

  std::vector<Triplet> tj, tg, td, tp;
  tj.reserve(32 * ne);
  tg.reserve(64 * ne);
  td.reserve(64 * ne);
  tp.reserve(40 * ne);

  for (int e = 0; e < ne; ++e) {
    const RectOps ops = rect_ops(mesh.element(e).box);
    const Material& mat = spec.material(e);
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        tp.push_back({phi_dof(e, a), phi_dof(e, c), mat.sigma_a() * ops.mass(a, c)});
        for (int k = 0; k < 2; ++k) {
          const double gk = k == 0 ? ops.grad_x(a, c) : ops.grad_y(a, c);
          tj.push_back({cur_dof(e, k, a), cur_dof(e, k, c), mat.sigma_t * ops.mass(a, c)});
          td.push_back({phi_dof(e, a), cur_dof(e, k, c), -gk});
          tg.push_back({cur_dof(e, k, a), phi_dof(e, c), -gk / 3.0});
        }
      }
  }

  const auto& ifaces = mesh.interior_faces();
  for (int f = 0; f < static_cast<int>(ifaces.size()); ++f) {
    const auto& face = ifaces[f];
    const Point n = face.normal;
    const double alpha = spec.quad.alpha(n);
    const double kappa = interior_kappa(spec, cfg, f, alpha);
    const double s = ldg ? ldg_switch(cfg.ldg_w, n) : 0.0;
    const Mat2 fm = face_mass(face.length);
    const auto sides = face_sides(face);
    for (const auto& A : sides)
      for (const auto& B : sides) {
        const double sab = A.sign * B.sign;
        for (int p = 0; p < 2; ++p)
          for (int r = 0; r < 2; ++r) {
            const double m = fm(p, r);
            const int ra = A.nodes[p], cb = B.nodes[r];
            tp.push_back({phi_dof(A.elem, ra), phi_dof(B.elem, cb), kappa * sab * m});
            for (int k = 0; k < 2; ++k) {
              const double nk = comp(n, k);
              td.push_back({phi_dof(A.elem, ra), cur_dof(B.elem, k, cb),
                            (0.5 * A.sign + (ldg ? 0.5 * s * sab : 0.0)) * nk * m});
              tg.push_back({cur_dof(A.elem, k, ra), phi_dof(B.elem, cb),
                            (A.sign / 6.0 - (ldg ? s * sab / 6.0 : 0.0)) * nk * m});
              if (p1)
                for (int l = 0; l < 2; ++l)
                  tj.push_back({cur_dof(A.elem, k, ra), cur_dof(B.elem, l, cb),
                                sab * nk * comp(n, l) / (6.0 * alpha) * m});
            }
          }
      }
  }

  for (const auto& face : mesh.boundary_faces()) {
    const Point n = face.normal;
    const double alpha = spec.quad.alpha(n);
    const Mat2 fm = face_mass(face.length);
    const auto& nodes = kSideNodes[static_cast<int>(face.side)];
    const int e = face.elem;
    const bool reflecting = face.tag == BoundaryTag::Reflecting;
    const bool half = cfg.bc == LoBoundary::Half;
    for (int p = 0; p < 2; ++p)
      for (int r = 0; r < 2; ++r) {
        const double m = fm(p, r);
        const int a = nodes[p], c = nodes[r];
        if (reflecting) {
          for (int k = 0; k < 2; ++k)
            tg.push_back({cur_dof(e, k, a), phi_dof(e, c), comp(n, k) / 3.0 * m});
          continue;
        }
        tp.push_back({phi_dof(e, a), phi_dof(e, c), (half ? 0.5 * alpha : alpha) * m});
        for (int k = 0; k < 2; ++k) {
          const double nk = comp(n, k);
          tg.push_back({cur_dof(e, k, a), phi_dof(e, c), (half ? nk / 6.0 : nk / 3.0) * m});
          if (!half) continue;
          td.push_back({phi_dof(e, a), cur_dof(e, k, c), 0.5 * nk * m});
          for (int l = 0; l < 2; ++l)
            tj.push_back({cur_dof(e, k, a), cur_dof(e, l, c), nk * comp(n, l) / (6.0 * alpha) * m});
        }
      }
  }

  BlockSystem sys;
  sys.num_elements = ne;
  sys.m_j = SparseMatrix::from_triplets(8 * ne, 8 * ne, std::move(tj));
  sys.g = SparseMatrix::from_triplets(8 * ne, 4 * ne, std::move(tg));
  sys.d = SparseMatrix::from_triplets(4 * ne, 8 * ne, std::move(td));
  sys.m_phi = SparseMatrix::from_triplets(4 * ne, 4 * ne, std::move(tp));
  sys.rhs_j.assign(8 * ne, 0.0);
  sys.rhs_phi.assign(4 * ne, 0.0);
  sys.current_local = !p1;
  return sys;
}

void assemble_rhs(const ProblemSpec& spec, const LoConfig& cfg, const ClosureState& st,
                  const MomentLoads& loads, BlockSystem& sys) {
  const Mesh& mesh = *spec.mesh;
  const int ne = mesh.num_elements();
  const bool consistent = cfg.variant == LoVariant::Consistent;
  auto& rj = sys.rhs_j;
  auto& rp = sys.rhs_phi;
  rj = loads.q1;
  rp = loads.q0;

  // volume model correction: int grad(v) : T
  for (int e = 0; e < ne; ++e) {
    const RectOps ops = rect_ops(mesh.element(e).box);
    const Vec4 txx = st.correction.xx.local(e), txy = st.correction.xy.local(e),
               tyy = st.correction.yy.local(e);
    const Vec4 gx_xx = ops.grad_x * txx, gy_xy = ops.grad_y * txy;
    const Vec4 gx_xy = ops.grad_x * txy, gy_yy = ops.grad_y * tyy;
    for (int a = 0; a < 4; ++a) {
      rj[cur_dof(e, 0, a)] += gx_xx[a] + gy_xy[a];
      rj[cur_dof(e, 1, a)] += gx_xy[a] + gy_yy[a];
    }
  }

  const auto& rule = face_rule();
  const auto jn_of = [&](int e, Side side, double t, Point n) {
    return st.current[0].trace(e, side, t) * n.x + st.current[1].trace(e, side, t) * n.y;
  };

  const auto& ifaces = mesh.interior_faces();
  for (int f = 0; f < static_cast<int>(ifaces.size()); ++f) {
    const auto& face = ifaces[f];
    const Point n = face.normal;
    const double alpha = st.interior_alpha[f];
    const double s = cfg.method == LoMethod::LDG ? ldg_switch(cfg.ldg_w, n) : 0.0;
    const double kappa = cfg.method == LoMethod::IP ? ip_penalty(spec, cfg, f, alpha) : 0.0;
    const auto sides = face_sides(face);
    for (int g = 0; g < 2; ++g) {
      const double t = rule.points[g][0];
      const double wl = rule.weights[g] * face.length;
      const auto& h1 = st.interior[f][0][g];
      const auto& h2 = st.interior[f][1][g];
      const Point tn1 = st.correction.trace_dot(face.elem1, face.side1, t, n);
      const Point tn2 = st.correction.trace_dot(face.elem2, face.side2, t, n);

      double c0 = 0.0;
      Point c1 = -0.5 * (tn1 + tn2);
      if (consistent) {
        const double jump_phi = st.phi.trace(face.elem1, face.side1, t) - st.phi.trace(face.elem2, face.side2, t);
        const double jump_jn = jn_of(face.elem1, face.side1, t, n) - jn_of(face.elem2, face.side2, t, n);
        c0 = -0.5 * (h1.beta - h2.beta);
        c1 = c1 - 0.5 * ((h1.pp - h1.pm) - (h2.pp - h2.pm));
        switch (cfg.method) {
          case LoMethod::P1:
            c1 = c1 + (jump_jn / (6.0 * alpha)) * n;
            break;
          case LoMethod::LDG:
            c0 += 0.5 * s * jump_jn;
            c1 = c1 - (s * jump_phi / 6.0) * n;
            break;
          case LoMethod::IP:
            c0 += (kappa - 0.5 * alpha) * jump_phi;
            break;
        }
      }
      const double bv[2] = {1.0 - t, t};
      for (const auto& side : sides)
        for (int p = 0; p < 2; ++p) {
          const int a = side.nodes[p];
          const double u = side.sign * bv[p] * wl;
          rp[phi_dof(side.elem, a)] += u * c0;
          rj[cur_dof(side.elem, 0, a)] += u * c1.x;
          rj[cur_dof(side.elem, 1, a)] += u * c1.y;
        }
    }
  }

  const auto& bfaces = mesh.boundary_faces();
  for (int f = 0; f < static_cast<int>(bfaces.size()); ++f) {
    const auto& face = bfaces[f];
    const Point n = face.normal;
    const double alpha = st.boundary_alpha[f];
    const auto& nodes = kSideNodes[static_cast<int>(face.side)];
    for (int g = 0; g < 2; ++g) {
      const double t = rule.points[g][0];
      const double wl = rule.weights[g] * face.length;
      const auto& bp = st.boundary[f][g];
      const double phi_ho = st.phi.trace(face.elem, face.side, t);
      const double jn_ho = jn_of(face.elem, face.side, t, n);
      const Point tn = st.correction.trace_dot(face.elem, face.side, t, n);

      double c0 = 0.0;
      Point c1;
      if (face.tag == BoundaryTag::Reflecting) {
        c1 = consistent ? -1.0 * (bp.trace.pp + bp.p_in - (phi_ho / 3.0) * n) : -1.0 * tn;
      } else if (cfg.bc == LoBoundary::Half) {
        c0 = -bp.j_in - 0.5 * bp.trace.beta;
        c1 = -1.0 * bp.p_in -
             (bp.trace.pp - (jn_ho / (6.0 * alpha)) * n - (phi_ho / 6.0) * n);
      } else if (consistent) {
        c0 = -bp.j_in - bp.trace.jp + alpha * phi_ho;
        c1 = -1.0 * bp.p_in - (bp.trace.pp - (phi_ho / 3.0) * n);
      } else {
        c0 = -2.0 * bp.j_in - bp.trace.beta;
        c1 = -1.0 * tn;
      }
      const double bv[2] = {1.0 - t, t};
      for (int p = 0; p < 2; ++p) {
        const int a = nodes[p];
        const double u = bv[p] * wl;
        rp[phi_dof(face.elem, a)] += u * c0;
        rj[cur_dof(face.elem, 0, a)] += u * c1.x;
        rj[cur_dof(face.elem, 1, a)] += u * c1.y;
      }
    }
  }

  if (sys.j_row_scale != 1.0)
    for (double& v : rj) v *= sys.j_row_scale;
}

BlockSystem assemble(const ProblemSpec& spec, const LoConfig& cfg, const ClosureState& state,
                     const MomentLoads& loads) {
  BlockSystem sys = assemble_operator(spec, cfg);
  assemble_rhs(spec, cfg, state, loads, sys);
  return sys;
}

BlockSystem symmetrize_p1(const BlockSystem& sys) {
  if (sys.current_local)
    throw UnsupportedConfiguration("symmetrize_p1: system is not a P1 system");
  BlockSystem out = sys;
  constexpr double kScale = -3.0;
  for (int r = 0; r < out.m_j.rows(); ++r) {
    out.m_j.scale_row(r, kScale);
    out.g.scale_row(r, kScale);
  }
  for (double& v : out.rhs_j) v *= kScale;
  out.j_row_scale *= kScale;
  return out;
}

SchurData schur_reduce(const BlockSystem& sys) {
  if (!sys.current_local)
    throw UnsupportedConfiguration("schur_reduce: current block couples elements (P1); use a direct solve");
  SchurData out;
  out.mj_inv = block_diag_invert(sys.m_j);

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(64 * out.mj_inv.size());
  for (std::size_t b = 0; b < out.mj_inv.size(); ++b)
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) t.emplace_back(8 * b + i, 8 * b + j, out.mj_inv[b](i, j));
  Eigen::SparseMatrix<double> minv(sys.m_j.rows(), sys.m_j.cols());
  minv.setFromTriplets(t.begin(), t.end());

  const Eigen::SparseMatrix<double> x = minv * sys.g.to_eigen();
  Eigen::SparseMatrix<double> s = sys.m_phi.to_eigen() - sys.d.to_eigen() * x;
  // The exact operator is symmetric; remove round-off asymmetry for CG/Cholesky.
  const Eigen::SparseMatrix<double> st = s.transpose();
  s = 0.5 * (s + st);
  s.prune(0.0);
  out.s = SparseMatrix::from_eigen(s);
  return out;
}

std::vector<double> schur_rhs(const SchurData& schur, const BlockSystem& sys) {
  std::vector<double> y(sys.rhs_j.size());
  for (std::size_t b = 0; b < schur.mj_inv.size(); ++b) {
    const Eigen::Map<const Eigen::Matrix<double, 8, 1>> r(sys.rhs_j.data() + 8 * b);
    Eigen::Map<Eigen::Matrix<double, 8, 1>>(y.data() + 8 * b) = schur.mj_inv[b] * r;
  }
  std::vector<double> out = sys.d * y;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sys.rhs_phi[i] - out[i];
  return out;
}

std::vector<double> back_substitute(const SchurData& schur, const BlockSystem& sys,
                                    std::span<const double> phi) {
  std::vector<double> r = sys.g * phi;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sys.rhs_j[i] - r[i];
  std::vector<double> j(r.size());
  for (std::size_t b = 0; b < schur.mj_inv.size(); ++b) {
    const Eigen::Map<const Eigen::Matrix<double, 8, 1>> rb(r.data() + 8 * b);
    Eigen::Map<Eigen::Matrix<double, 8, 1>>(j.data() + 8 * b) = schur.mj_inv[b] * rb;
  }
  return j;
}

DgScalarField to_scalar_field(std::shared_ptr<const Mesh> mesh, std::span<const double> phi) {
  DgScalarField f(std::move(mesh));
  std::copy(phi.begin(), phi.end(), f.coefficients().begin());
  return f;
}

DgVectorField to_vector_field(std::shared_ptr<const Mesh> mesh, std::span<const double> j) {
  DgVectorField v(mesh);
  const int ne = mesh->num_elements();
  for (int e = 0; e < ne; ++e)
    for (int k = 0; k < 2; ++k)
      for (int a = 0; a < 4; ++a) v[k].coefficients()[4 * e + a] = j[cur_dof(e, k, a)];
  return v;
}

std::vector<double> from_vector_field(const DgVectorField& v) {
  const int ne = v[0].num_elements();
  std::vector<double> j(8 * static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e)
    for (int k = 0; k < 2; ++k)
      for (int a = 0; a < 4; ++a) j[cur_dof(e, k, a)] = v[k].coefficients()[4 * e + a];
  return j;
}

}  // namespace smm
