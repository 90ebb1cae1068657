#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "smm/mesh.hpp"

namespace smm {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

/// Quadrature on the reference segment [0,1] (second coordinate unused) or the
/// reference square [0,1]^2.
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// n-point Gauss-Legendre rule on [0,1].
QuadratureRule gauss_line(int n);
/// n x n tensor Gauss rule on [0,1]^2.
QuadratureRule gauss_square(int n);

/// Bilinear vertex basis on the reference square, b_{a+2b}(xi,eta) = l_a(xi) l_b(eta)
/// with l_0 = 1 - s, l_1 = s. Ordering matches Element::vertices().
std::array<double, 4> basis_values(double xi, double eta);
/// Reference-coordinate gradients of the basis.
std::array<std::array<double, 2>, 4> basis_gradients(double xi, double eta);

/// Q1 discontinuous scalar field: four vertex coefficients per element, element-major.
class DgScalarField {
 public:
  DgScalarField() = default;
  explicit DgScalarField(std::shared_ptr<const Mesh> mesh, double value = 0.0);

  /// Vertex interpolant of f (element by element).
  static DgScalarField interpolate(std::shared_ptr<const Mesh> mesh,
                                   const std::function<double(Point)>& f);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int num_elements() const { return mesh_ ? mesh_->num_elements() : 0; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<double, 4> element(int e) { return std::span<double, 4>(coeffs_.data() + 4 * e, 4); }
  std::span<const double, 4> element(int e) const {
    return std::span<const double, 4>(coeffs_.data() + 4 * e, 4);
  }
  Vec4 local(int e) const { return Vec4(coeffs_.data() + 4 * e); }

  std::vector<double>& coefficients() { return coeffs_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double eval_local(int e, double xi, double eta) const;
  /// Point evaluation; points on shared edges use the upper/right element.
  double eval(Point p) const;
  /// Trace of element e on side s at face parameter t in [0,1].
  double trace(int e, Side s, double t) const {
    const auto& n = kSideNodes[static_cast<int>(s)];
    return (1.0 - t) * coeffs_[4 * e + n[0]] + t * coeffs_[4 * e + n[1]];
  }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<double> coeffs_;
};

struct DgVectorField {
  DgVectorField() = default;
  explicit DgVectorField(std::shared_ptr<const Mesh> mesh)
      : comp{DgScalarField(mesh), DgScalarField(mesh)} {}

  DgScalarField& operator[](int k) { return comp[k]; }
  const DgScalarField& operator[](int k) const { return comp[k]; }

  std::array<DgScalarField, 2> comp;
};

/// Symmetric 2x2 tensor field; only xx, xy, yy are stored.
struct DgTensorField {
  DgTensorField() = default;
  explicit DgTensorField(std::shared_ptr<const Mesh> mesh) : xx(mesh), xy(mesh), yy(mesh) {}

  /// (T n) from element e's trace on side s.
  Point trace_dot(int e, Side s, double t, Point n) const {
    const double txx = xx.trace(e, s, t), txy = xy.trace(e, s, t), tyy = yy.trace(e, s, t);
    return {txx * n.x + txy * n.y, txy * n.x + tyy * n.y};
  }

  DgScalarField xx, xy, yy;
};

struct JumpAvg {
  double jump;
  double avg;
};

inline JumpAvg jump_avg(double u1, double u2) { return {u1 - u2, 0.5 * (u1 + u2)}; }
/// Jump and average across an interior face at face parameter t.
JumpAvg jump_avg(const DgScalarField& field, const InteriorFace& face, double t);

double l2_norm(const DgScalarField& u);
double l2_distance(const DgScalarField& u, const DgScalarField& v);
double l2_distance(const DgVectorField& u, const DgVectorField& v);
double l2_error(const DgScalarField& u, const std::function<double(Point)>& exact);
double l2_error(const DgVectorField& u, const std::function<Point(Point)>& exact);

struct ElementMatrices {
  Mat4 mass;       // integral of sigma b_i b_j
  Mat4 streaming;  // -integral of (Omega . grad b_i) b_j
};

/// Element matrices by 2x2 Gauss quadrature (exact for bilinear products).
ElementMatrices element_matrices(const Element& K, double sigma, Point omega);

/// Unit-coefficient element operators on a rectangle:
/// mass(i,j) = int b_i b_j, grad_x(i,j) = int (d_x b_i) b_j, grad_y likewise.
struct RectOps {
  Mat4 mass;
  Mat4 grad_x;
  Mat4 grad_y;
};

RectOps rect_ops(const Box& box);

/// Face mass matrix of the two side nodes, ordered by face parameter.
inline Mat2 face_mass(double length) {
  Mat2 m;
  m << 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0;
  return length * m;
}

struct LineSample {
  double x;
  double y;
  double value;
};

/// Samples at the midpoints of m equal sub-segments of [a,b].
std::vector<LineSample> sample_line(const DgScalarField& u, Point a, Point b, int m);

}  // namespace smm
