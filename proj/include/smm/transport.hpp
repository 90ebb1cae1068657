#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "smm/angular_quad.hpp"
#include "smm/dg_space.hpp"
#include "smm/mesh.hpp"

namespace smm {

struct Material {
  double sigma_t = 0.0;
  double sigma_s = 0.0;

  double sigma_a() const { return sigma_t - sigma_s; }
};

/// Function of position and direction, e.g. q(x, Omega) or psi-bar(x, Omega).
using AngularFunction = std::function<double(Point, const Direction&)>;

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, int element) : std::runtime_error(what), element(element) {}
  int element;
};

struct ProblemSpec {
  std::shared_ptr<const Mesh> mesh;
  SnQuadrature quad;
  std::vector<Material> materials;
  /// Fixed source per steradian; empty means zero.
  AngularFunction source;
  /// True when source does not depend on direction (one load vector is shared).
  bool isotropic_source = true;
  /// Inflow on non-reflecting boundary faces; empty means vacuum.
  AngularFunction inflow;

  const Material& material(int e) const { return materials[mesh->element(e).material]; }
  /// Throws ConfigurationError on bad cross sections or unsupported reflecting edges.
  void validate() const;
};

/// Per-direction element load vectors int_K b_i q_d.
class SourceLoads {
 public:
  SourceLoads() = default;
  SourceLoads(int num_dirs, int num_elements, bool shared);

  bool shared() const { return shared_; }
  std::span<double, 4> element(int d, int e) {
    return std::span<double, 4>(data_[shared_ ? 0 : d].data() + 4 * e, 4);
  }
  std::span<const double, 4> element(int d, int e) const {
    return std::span<const double, 4>(data_[shared_ ? 0 : d].data() + 4 * e, 4);
  }
  int num_dirs() const { return num_dirs_; }

 private:
  bool shared_ = true;
  int num_dirs_ = 0;
  std::vector<std::vector<double>> data_;
};

SourceLoads compute_source_loads(const ProblemSpec& spec);

/// Face quadrature used for every boundary/interface integral that involves
/// data not representable in Q1 (2-point Gauss).
const QuadratureRule& face_rule();

/// psi-bar at the face quadrature points of each non-reflecting boundary face,
/// stored for incoming directions (Omega . n < 0) only; zero elsewhere.
class BoundaryInflow {
 public:
  BoundaryInflow() = default;
  BoundaryInflow(const ProblemSpec& spec);

  double value(int d, int bface, int q) const { return values_[(d * num_faces_ + bface) * 2 + q]; }

 private:
  int num_faces_ = 0;
  std::vector<double> values_;
};

class AngularFlux {
 public:
  AngularFlux() = default;
  AngularFlux(std::shared_ptr<const Mesh> mesh, int num_dirs)
      : psi_(num_dirs, DgScalarField(mesh)) {}

  int size() const { return static_cast<int>(psi_.size()); }
  DgScalarField& operator[](int d) { return psi_[d]; }
  const DgScalarField& operator[](int d) const { return psi_[d]; }

 private:
  std::vector<DgScalarField> psi_;
};

/// Upwind numerical flux (Omega.n) psi-hat from the case split.
inline double upwind_flux(double omega_n, double psi1, double psi2) {
  return omega_n > 0.0 ? omega_n * psi1 : omega_n * psi2;
}

/// Direction processing order: with a reflecting bottom edge, all Omega_y < 0
/// directions come first so their mirrors can consume the outgoing traces.
std::vector<int> reflecting_order(const SnQuadrature& q, const EdgeTags& tags);

/// Inverts streaming + collision for every direction against a fixed
/// scattering source built from a scalar flux.
class TransportSweeper {
 public:
  explicit TransportSweeper(const ProblemSpec& spec);
  TransportSweeper(const ProblemSpec& spec, SourceLoads loads);

  const ProblemSpec& spec() const { return spec_; }
  const SourceLoads& source_loads() const { return loads_; }
  const BoundaryInflow& inflow() const { return inflow_; }
  const std::vector<int>& order() const { return order_; }
  /// Mirror partner through the reflecting plane, or -1.
  int mirror(int d) const { return mirror_[d]; }

  AngularFlux sweep(const DgScalarField& scalar_flux) const;

  /// Per-direction weak-form residual (lhs - rhs) of psi with scattering from scalar_flux.
  std::vector<std::vector<double>> residual(const AngularFlux& psi,
                                            const DgScalarField& scalar_flux) const;

  /// Relative global balance |sources - removal - leakage| / sources, where the
  /// sources include the scattering emission of scalar_flux.
  double balance_residual(const AngularFlux& psi, const DgScalarField& scalar_flux) const;

 private:
  void local_system(int d, int e, const DgScalarField& psi_d, const AngularFlux& psi,
                    const DgScalarField& scalar_flux, Mat4& A, Vec4& b) const;

  const ProblemSpec& spec_;
  SourceLoads loads_;
  BoundaryInflow inflow_;
  std::vector<int> order_;
  std::vector<int> mirror_;
};

AngularFlux sweep(const ProblemSpec& spec, const DgScalarField& scalar_flux);

/// Emission density sigma_s phi / (4 pi) per element (a Q1 field).
DgScalarField scattering_source(const ProblemSpec& spec, const DgScalarField& scalar_flux);

}  // namespace smm
