#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smm/closures.hpp"
#include "smm/linalg.hpp"
#include "smm/transport.hpp"

namespace smm {

enum class LoMethod { P1, LDG, IP };
enum class LoVariant { Consistent, Independent };
enum class LoBoundary { Half, Full };
enum class PenaltyMode { MIP, Plain };

class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LoConfig {
  LoMethod method = LoMethod::LDG;
  LoVariant variant = LoVariant::Consistent;
  LoBoundary bc = LoBoundary::Half;
  /// LDG switch s = sign(w . n), +1 on ties.
  Point ldg_w{1.0, 1.0};
  /// LDG jump penalty; alpha/2 when unset.
  std::optional<double> ldg_kappa;
  double ip_c = 4.0;
  PenaltyMode ip_mode = PenaltyMode::MIP;

  /// Throws UnsupportedConfiguration (P1 is consistent + half-range only).
  void validate() const;
  /// Short label such as "ldg-consistent-half".
  std::string label() const;
};

LoMethod parse_method(const std::string& s);
LoVariant parse_variant(const std::string& s);
LoBoundary parse_boundary(const std::string& s);
PenaltyMode parse_penalty_mode(const std::string& s);
std::string to_string(LoMethod m);
std::string to_string(LoVariant v);
std::string to_string(LoBoundary b);

/// Degrees of freedom: phi of element e, vertex a is 4e + a; current
/// component k of element e, vertex a is 8e + 4k + a.
inline int phi_dof(int e, int a) { return 4 * e + a; }
inline int cur_dof(int e, int k, int a) { return 8 * e + 4 * k + a; }

/// The LO system [[M_J, G], [D, M_phi]] (J, phi) = (rhs_J, rhs_phi).
/// For LDG and IP, G = -D^T / 3; after symmetrize_p1 the J rows carry a
/// factor j_row_scale.
struct BlockSystem {
  int num_elements = 0;
  SparseMatrix m_j;    // 8Ne x 8Ne
  SparseMatrix g;      // 8Ne x 4Ne
  SparseMatrix d;      // 4Ne x 8Ne
  SparseMatrix m_phi;  // 4Ne x 4Ne
  std::vector<double> rhs_j;
  std::vector<double> rhs_phi;
  bool current_local = true;
  double j_row_scale = 1.0;

  /// Monolithic matrix with unknowns ordered (J, phi).
  SparseMatrix full() const;
  std::vector<double> full_rhs() const;
  /// ||rhs - A x|| / ||rhs|| for x = (j, phi).
  double relative_residual(std::span<const double> j, std::span<const double> phi) const;
};

/// Zeroth and first moments of the per-direction source loads.
struct MomentLoads {
  std::vector<double> q0;  // 4Ne
  std::vector<double> q1;  // 8Ne, current layout
};

MomentLoads moment_loads(const SourceLoads& loads, const SnQuadrature& q, int num_elements);

/// Left-hand side only (right-hand sides zero). It does not depend on the HO
/// iterate, so it is built once per solve.
BlockSystem assemble_operator(const ProblemSpec& spec, const LoConfig& cfg);
/// Fills rhs_J, rhs_phi from sources, inflow and correction terms.
void assemble_rhs(const ProblemSpec& spec, const LoConfig& cfg, const ClosureState& state,
                  const MomentLoads& loads, BlockSystem& sys);
BlockSystem assemble(const ProblemSpec& spec, const LoConfig& cfg, const ClosureState& state,
                     const MomentLoads& loads);

/// Multiplies the first-moment rows by -3, making the P1 matrix symmetric.
BlockSystem symmetrize_p1(const BlockSystem& sys);

/// Current elimination: S = M_phi - D M_J^{-1} G.
struct SchurData {
  std::vector<Block8> mj_inv;
  SparseMatrix s;
};

SchurData schur_reduce(const BlockSystem& sys);
/// rhs_phi - D M_J^{-1} rhs_J
std::vector<double> schur_rhs(const SchurData& schur, const BlockSystem& sys);
/// J = M_J^{-1} (rhs_J - G phi), in current layout.
std::vector<double> back_substitute(const SchurData& schur, const BlockSystem& sys,
                                    std::span<const double> phi);

/// Penalty for an interior face (kappa_MIP or kappa_IP).
double ip_penalty(const ProblemSpec& spec, const LoConfig& cfg, int interior_face, double alpha);
/// LDG switch for a face normal.
inline double ldg_switch(Point w, Point n) { return dot(w, n) >= 0.0 ? 1.0 : -1.0; }

DgScalarField to_scalar_field(std::shared_ptr<const Mesh> mesh, std::span<const double> phi);
DgVectorField to_vector_field(std::shared_ptr<const Mesh> mesh, std::span<const double> j);
std::vector<double> from_vector_field(const DgVectorField& j);

}  // namespace smm
