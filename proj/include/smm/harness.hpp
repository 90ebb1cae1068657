#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "smm/benchmarks.hpp"
#include "smm/driver.hpp"
#include "smm/lo_diffusion.hpp"

namespace smm::harness {

struct MethodEntry {
  std::string name;
  LoConfig lo;
};

MethodEntry method(const std::string& name, LoMethod m, LoVariant v, LoBoundary bc,
                   PenaltyMode mode = PenaltyMode::MIP);

/// P1, LDG and IP consistent with half-range boundaries, LDG consistent with
/// full-range boundaries, and independent LDG and IP.
std::vector<MethodEntry> mms_methods();
/// The eight columns of the diffusion-limit iteration table.
std::vector<MethodEntry> diffusion_limit_methods();
/// P1, LDG/IP full, half and independent.
std::vector<MethodEntry> crooked_pipe_methods();

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------- MMS

struct MmsOptions {
  bench::MmsParams problem;
  std::vector<int> sizes{8, 16, 32, 64};
  OuterConfig outer;

  MmsOptions();
};

struct MmsRow {
  std::string method;
  LoVariant variant = LoVariant::Consistent;
  int n = 0;
  double h = 0.0;
  double err_phi = kNaN;
  double err_j = kNaN;
  /// ||phi - phi_HO||, ||J - J_HO|| (L2) at the converged state.
  double cons_phi = kNaN;
  double cons_j = kNaN;
  int iterations = 0;
  std::string error;  // empty on success
  DgScalarField phi;
  DgVectorField current;

  bool ok() const { return error.empty(); }
};

std::vector<MmsRow> run_mms(const MmsOptions& opt, const std::vector<MethodEntry>& methods);
/// Same runs; the consistency columns are the ones of interest.
std::vector<MmsRow> run_consistency(const MmsOptions& opt, const std::vector<MethodEntry>& methods);

struct OrderRow {
  std::string method;
  int n_coarse = 0;
  int n_fine = 0;
  double order_phi = kNaN;
  double order_j = kNaN;
};

inline double observed_order(double err_coarse, double err_fine) { return std::log2(err_coarse / err_fine); }
/// Orders from consecutive successful sizes of each method (refinement by 2).
std::vector<OrderRow> observed_orders(const std::vector<MmsRow>& rows);

struct PairwiseRow {
  int n = 0;
  double max_phi = 0.0;
  double max_j = 0.0;
};

/// Largest pairwise L2 difference among the consistent rows on each mesh.
std::vector<PairwiseRow> consistent_pairwise(const std::vector<MmsRow>& rows);

// ---------------------------------------------------- diffusion limit

struct DiffusionLimitOptions {
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
  int n = 8;
  int sn = 4;
  int lineout_points = 64;
  OuterConfig outer;

  DiffusionLimitOptions();
};

struct DiffusionLimitRow {
  std::string method;
  double eps = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;
  std::vector<LineSample> lineout;  // phi along y = 0.5
};

std::vector<DiffusionLimitRow> run_diffusion_limit(const DiffusionLimitOptions& opt,
                                                   const std::vector<MethodEntry>& methods);

// -------------------------------------------------------- crooked pipe

struct CrookedPipeOptions {
  bench::CrookedPipeParams problem = bench::default_crooked_pipe();
  std::vector<int> anderson{0, 5};
  /// Lineout samples per element along y = 0.
  int samples_per_element = 4;
  OuterConfig outer;

  CrookedPipeOptions();
};

struct Lineout {
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> jmag;     // |J_LO|
  std::vector<double> jmag_ho;  // |J_HO|
  double max_current_mismatch = 0.0;  // max |J_LO - J_HO| over samples
};

struct CrookedPipeRow {
  std::string method;
  LoVariant variant = LoVariant::Consistent;
  int anderson = 0;
  int iterations = 0;
  bool converged = false;
  std::string error;
  double ho_balance = kNaN;
  double lo_balance = kNaN;
  double tv_current = kNaN;  // total variation of the |J| lineout
  double seconds = 0.0;
  Lineout lineout;
  std::vector<IterationRecord> records;
};

std::vector<CrookedPipeRow> run_crooked_pipe(const CrookedPipeOptions& opt,
                                             const std::vector<MethodEntry>& methods);

double total_variation(const std::vector<double>& v);
/// phi, |J| (LO and HO) sampled along the segment [a, b].
Lineout sample_lineout(const DgScalarField& phi, const DgVectorField& j_lo, const DgVectorField& j_ho,
                       Point a, Point b, int m);

// ----------------------------------------------------------------- CSV

void write_mms_csv(std::ostream& os, const std::vector<MmsRow>& rows);
void write_orders_csv(std::ostream& os, const std::vector<OrderRow>& rows);
void write_pairwise_csv(std::ostream& os, const std::vector<PairwiseRow>& rows);
/// One row per eps, one column per method (iteration count or "nc").
void write_diffusion_table_csv(std::ostream& os, const std::vector<DiffusionLimitRow>& rows);
void write_diffusion_lineout_csv(std::ostream& os, const std::vector<DiffusionLimitRow>& rows);
void write_crooked_pipe_csv(std::ostream& os, const std::vector<CrookedPipeRow>& rows);
void write_crooked_lineout_csv(std::ostream& os, const CrookedPipeRow& row);
void write_records_csv(std::ostream& os, const std::vector<IterationRecord>& records);

}  // namespace smm::harness
