#include "smm/dg_space.hpp"

#include <cmath>
#include <stdexcept>

namespace smm {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] for n = 1..5.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  switch (n) {
    case 1: x = {0.0}; w = {2.0}; break;
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      x = {-a, a};
      w = {1.0, 1.0};
      break;
    }
    case 3: {
      const double a = std::sqrt(3.0 / 5.0);
      x = {-a, 0.0, a};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      x = {-b, -a, a, b};
      w = {wb, wa, wa, wb};
      break;
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      x = {-b, -a, 0.0, a, b};
      w = {wb, wa, 128.0 / 225.0, wa, wb};
      break;
    }
    default: throw std::invalid_argument("gauss rule order must be 1..5");
  }
}

// Error norms use a rule well beyond the bilinear products used in assembly.
constexpr int kErrorRule = 5;

}  // namespace

QuadratureRule gauss_line(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.points.push_back({0.5 * (x[i] + 1.0), 0.0});
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

QuadratureRule gauss_square(int n) {
  const auto line = gauss_line(n);
  QuadratureRule r;
  for (std::size_t j = 0; j < line.size(); ++j)
    for (std::size_t i = 0; i < line.size(); ++i) {
      r.points.push_back({line.points[i][0], line.points[j][0]});
      r.weights.push_back(line.weights[i] * line.weights[j]);
    }
  return r;
}

std::array<double, 4> basis_values(double xi, double eta) {
  return {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta};
}

std::array<std::array<double, 2>, 4> basis_gradients(double xi, double eta) {
  return {{{-(1 - eta), -(1 - xi)}, {(1 - eta), -xi}, {-eta, (1 - xi)}, {eta, xi}}};
}

DgScalarField::DgScalarField(std::shared_ptr<const Mesh> mesh, double value)
    : mesh_(std::move(mesh)), coeffs_(4 * static_cast<std::size_t>(mesh_->num_elements()), value) {}

DgScalarField DgScalarField::interpolate(std::shared_ptr<const Mesh> mesh,
                                         const std::function<double(Point)>& f) {
  DgScalarField u(mesh);
  for (int e = 0; e < mesh->num_elements(); ++e) {
    const auto v = mesh->element(e).vertices();
    for (int a = 0; a < 4; ++a) u.coeffs_[4 * e + a] = f(v[a]);
  }
  return u;
}

double DgScalarField::eval_local(int e, double xi, double eta) const {
  const auto b = basis_values(xi, eta);
  const double* c = coeffs_.data() + 4 * e;
  return b[0] * c[0] + b[1] * c[1] + b[2] * c[2] + b[3] * c[3];
}

double DgScalarField::eval(Point p) const {
  const int e = mesh_->locate(p);
  const Box& b = mesh_->element(e).box;
  return eval_local(e, (p.x - b.x0) / b.width(), (p.y - b.y0) / b.height());
}

JumpAvg jump_avg(const DgScalarField& field, const InteriorFace& face, double t) {
  return jump_avg(field.trace(face.elem1, face.side1, t), field.trace(face.elem2, face.side2, t));
}

namespace {

template <class F>
double integrate_squared(const Mesh& mesh, F&& integrand_sq) {
  const auto rule = gauss_square(kErrorRule);
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Box& b = mesh.element(e).box;
    double local = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.points[q][0], eta = rule.points[q][1];
      local += rule.weights[q] * integrand_sq(e, xi, eta, Point{b.x0 + xi * b.width(), b.y0 + eta * b.height()});
    }
    sum += local * b.area();
  }
  return std::sqrt(sum);
}

}  // namespace

double l2_norm(const DgScalarField& u) {
  return integrate_squared(u.mesh(), [&](int e, double xi, double eta, Point) {
    const double d = u.eval_local(e, xi, eta);
    return d * d;
  });
}

double l2_distance(const DgScalarField& u, const DgScalarField& v) {
  return integrate_squared(u.mesh(), [&](int e, double xi, double eta, Point) {
    const double d = u.eval_local(e, xi, eta) - v.eval_local(e, xi, eta);
    return d * d;
  });
}

double l2_distance(const DgVectorField& u, const DgVectorField& v) {
  const double a = l2_distance(u[0], v[0]), b = l2_distance(u[1], v[1]);
  return std::sqrt(a * a + b * b);
}

double l2_error(const DgScalarField& u, const std::function<double(Point)>& exact) {
  return integrate_squared(u.mesh(), [&](int e, double xi, double eta, Point x) {
    const double d = u.eval_local(e, xi, eta) - exact(x);
    return d * d;
  });
}

double l2_error(const DgVectorField& u, const std::function<Point(Point)>& exact) {
  return integrate_squared(u[0].mesh(), [&](int e, double xi, double eta, Point x) {
    const Point ex = exact(x);
    const double dx = u[0].eval_local(e, xi, eta) - ex.x;
    const double dy = u[1].eval_local(e, xi, eta) - ex.y;
    return dx * dx + dy * dy;
  });
}

ElementMatrices element_matrices(const Element& K, double sigma, Point omega) {
  const auto rule = gauss_square(2);
  const double hx = K.box.width(), hy = K.box.height();
  ElementMatrices m;
  m.mass.setZero();
  m.streaming.setZero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double xi = rule.points[q][0], eta = rule.points[q][1];
    const double jw = rule.weights[q] * hx * hy;
    const auto b = basis_values(xi, eta);
    const auto g = basis_gradients(xi, eta);
    for (int i = 0; i < 4; ++i) {
      const double dir_grad = omega.x * g[i][0] / hx + omega.y * g[i][1] / hy;
      for (int j = 0; j < 4; ++j) {
        m.mass(i, j) += jw * sigma * b[i] * b[j];
        m.streaming(i, j) -= jw * dir_grad * b[j];
      }
    }
  }
  return m;
}

namespace {

RectOps make_reference_ops() {
  const auto rule = gauss_square(2);
  RectOps r;
  r.mass.setZero();
  r.grad_x.setZero();
  r.grad_y.setZero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double xi = rule.points[q][0], eta = rule.points[q][1];
    const auto b = basis_values(xi, eta);
    const auto g = basis_gradients(xi, eta);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        r.mass(i, j) += rule.weights[q] * b[i] * b[j];
        r.grad_x(i, j) += rule.weights[q] * g[i][0] * b[j];
        r.grad_y(i, j) += rule.weights[q] * g[i][1] * b[j];
      }
  }
  return r;
}

}  // namespace

RectOps rect_ops(const Box& box) {
  static const RectOps ref = make_reference_ops();
  const double hx = box.width(), hy = box.height();
  return {hx * hy * ref.mass, hy * ref.grad_x, hx * ref.grad_y};
}

std::vector<LineSample> sample_line(const DgScalarField& u, Point a, Point b, int m) {
  std::vector<LineSample> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    const Point p = a + ((i + 0.5) / m) * (b - a);
    out.push_back({p.x, p.y, u.eval(p)});
  }
  return out;
}

}  // namespace smm
