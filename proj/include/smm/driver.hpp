#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smm/closures.hpp"
#include "smm/lo_diffusion.hpp"
#include "smm/transport.hpp"

namespace smm {

struct IterationRecord {
  int iteration = 0;
  double update_norm = 0.0;      // relative L2 change of the LO scalar flux
  double update_norm_inf = 0.0;  // relative max-coefficient change
  double update_max = 0.0;       // absolute max-coefficient change
  double update_coef = 0.0;      // absolute Euclidean norm of the coefficient change
  double residual = 0.0;         // the quantity tested against OuterConfig::tol
  int inner_iterations = 0;
  double ho_balance = 0.0;
  double lo_balance = 0.0;
  double t_sweep = 0.0;
  double t_assembly = 0.0;  // closures + right-hand side
  double t_solve = 0.0;
};

/// Stopping test for the outer iteration, applied to G(x) - x.
///   RelativeL2:          ||G(x) - x||_L2 / ||G(x)||_L2 over the mesh
///   AbsoluteCoefficient: Euclidean norm of the raw coefficient vector
///                        (the default test of KINSOL's fixed-point solver)
enum class OuterNorm { RelativeL2, AbsoluteCoefficient };

OuterNorm parse_outer_norm(const std::string& s);
std::string to_string(OuterNorm n);

struct OuterConfig {
  double tol = 1e-6;
  OuterNorm norm = OuterNorm::RelativeL2;
  int max_iters = 500;
  int anderson_depth = 0;
  double inner_tol = 1e-8;
  int max_inner = 20000;
  std::string preconditioner = "jacobi";
  /// Called after every outer iteration.
  std::function<void(const IterationRecord&)> history_sink;
};

struct SmmResult {
  DgScalarField phi;       // LO scalar flux
  DgVectorField current;   // LO current
  AngularFlux psi;         // last HO sweep
  ClosureState closures;   // moments of psi
  std::vector<IterationRecord> records;
  int iterations = 0;
};

class OuterConvergenceError : public std::runtime_error {
 public:
  OuterConvergenceError(const std::string& what, std::vector<IterationRecord> history)
      : std::runtime_error(what), history(std::move(history)) {}
  std::vector<IterationRecord> history;
};

/// Fixed-point iteration phi -> sweep -> closures -> LO solve -> phi, started
/// from a zero scattering source. The iteration count is the number of sweeps.
/// Stops when the selected norm of G(x) - x drops to tol.
SmmResult solve_smm(const ProblemSpec& spec, const LoConfig& lo, const OuterConfig& outer);

/// One Anderson step (mixing 1) from pairs (x_i, G(x_i)), oldest first. Uses
/// the last min(m+1, size) pairs; m = 0 returns G(x_k).
std::vector<double> anderson_step(std::span<const std::pair<std::vector<double>, std::vector<double>>> history,
                                  int m);

class AndersonMixer {
 public:
  explicit AndersonMixer(int depth) : depth_(depth) {}
  /// Records (x, G(x)) and returns the next iterate.
  std::vector<double> step(std::vector<double> x, std::vector<double> gx);

 private:
  int depth_;
  std::vector<std::pair<std::vector<double>, std::vector<double>>> history_;
};

/// Scattering emission sigma_s phi / (4 pi) seen by the next sweep (a Y1 field).
DgScalarField source_update(const ProblemSpec& spec, const DgScalarField& phi_lo);

}  // namespace smm
