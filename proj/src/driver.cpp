#include "smm/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

namespace smm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Direct or Schur-complement solve of the LO system with a fixed operator.
class LoSolver {
 public:
  LoSolver(const ProblemSpec& spec, const LoConfig& cfg, const OuterConfig& outer)
      : spec_(spec), cfg_(cfg), outer_(outer) {
    sys_ = assemble_operator(spec, cfg);
    if (sys_.current_local) {
      schur_ = schur_reduce(sys_);
      precond_ = make_preconditioner(outer.preconditioner);
      precond_->setup(schur_.s);
    } else {
      sys_ = symmetrize_p1(sys_);
      lu_.factorize(sys_.full());
    }
  }

  BlockSystem& system() { return sys_; }

  // Solves for the current right-hand side; returns inner iteration count.
  int solve(std::vector<double>& phi, std::vector<double>& j) {
    if (!sys_.current_local) {
      const auto x = lu_.solve(sys_.full_rhs());
      const std::size_t nj = sys_.rhs_j.size();
      j.assign(x.begin(), x.begin() + nj);
      phi.assign(x.begin() + nj, x.end());
      return 0;
    }
    const auto b = schur_rhs(schur_, sys_);
    CgResult r = cg_solve(schur_.s, b, *precond_, outer_.inner_tol,
                          phi.size() == b.size() ? std::span<const double>(phi) : std::span<const double>{},
                          outer_.max_inner);
    phi = std::move(r.x);
    j = back_substitute(schur_, sys_, phi);
    return r.iterations;
  }

  // |sum of zeroth-moment residuals| / sum |rhs_phi|: the LO particle balance.
  double balance(std::span<const double> phi, std::span<const double> j) const {
    const auto dj = sys_.d * j;
    const auto mp = sys_.m_phi * phi;
    double res = 0.0, src = 0.0;
    for (std::size_t i = 0; i < dj.size(); ++i) {
      res += sys_.rhs_phi[i] - dj[i] - mp[i];
      src += std::abs(sys_.rhs_phi[i]);
    }
    return src > 0.0 ? std::abs(res) / src : std::abs(res);
  }

 private:
  const ProblemSpec& spec_;
  const LoConfig& cfg_;
  const OuterConfig& outer_;
  BlockSystem sys_;
  SchurData schur_;
  std::unique_ptr<Preconditioner> precond_;
  SparseLu lu_;
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::vector<double> anderson_step(
    std::span<const std::pair<std::vector<double>, std::vector<double>>> history, int m) {
  if (history.empty()) throw std::invalid_argument("anderson_step: empty history");
  const int count = std::min<int>(static_cast<int>(history.size()), m + 1);
  const auto window = history.subspan(history.size() - count);
  const auto& gk = window.back().second;
  if (count == 1) return gk;

  const Eigen::Index n = static_cast<Eigen::Index>(gk.size());
  const auto f = [&](int i) {
    Eigen::VectorXd v(n);
    for (Eigen::Index r = 0; r < n; ++r) v[r] = window[i].second[r] - window[i].first[r];
    return v;
  };
  const Eigen::VectorXd fk = f(count - 1);
  Eigen::MatrixXd df(n, count - 1), dg(n, count - 1);
  Eigen::VectorXd prev = f(0);
  for (int i = 0; i + 1 < count; ++i) {
    const Eigen::VectorXd next = f(i + 1);
    df.col(i) = next - prev;
    for (Eigen::Index r = 0; r < n; ++r) dg(r, i) = window[i + 1].second[r] - window[i].second[r];
    prev = next;
  }

  for (int first = 0; first < count - 1; ++first) {
    const int cols = count - 1 - first;
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(df.rightCols(cols));
    const Eigen::MatrixXd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    const double rmax = r.diagonal().cwiseAbs().maxCoeff();
    if (!(rmax > 0.0) || r.diagonal().cwiseAbs().minCoeff() <= 1e-12 * rmax) continue;
    const Eigen::VectorXd gamma = qr.solve(fk);
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(gk.data(), n) - dg.rightCols(cols) * gamma;
    return std::vector<double>(x.data(), x.data() + n);
  }
  return gk;
}

std::vector<double> AndersonMixer::step(std::vector<double> x, std::vector<double> gx) {
  history_.emplace_back(std::move(x), std::move(gx));
  if (static_cast<int>(history_.size()) > depth_ + 1) history_.erase(history_.begin());
  return anderson_step(history_, depth_);
}

DgScalarField source_update(const ProblemSpec& spec, const DgScalarField& phi_lo) {
  return scattering_source(spec, phi_lo);
}

OuterNorm parse_outer_norm(const std::string& s) {
  if (s == "relative-l2") return OuterNorm::RelativeL2;
  if (s == "absolute-coefficient") return OuterNorm::AbsoluteCoefficient;
  throw std::invalid_argument("unknown outer norm '" + s + "' (expected relative-l2, absolute-coefficient)");
}

std::string to_string(OuterNorm n) {
  return n == OuterNorm::RelativeL2 ? "relative-l2" : "absolute-coefficient";
}

SmmResult solve_smm(const ProblemSpec& spec, const LoConfig& lo, const OuterConfig& outer) {
  if (!(outer.tol > 0.0)) throw std::invalid_argument("outer tolerance must be positive");
  if (outer.anderson_depth < 0) throw std::invalid_argument("Anderson depth must be >= 0");
  lo.validate();
  spec.validate();

  const TransportSweeper sweeper(spec);
  const int ne = spec.mesh->num_elements();
  const MomentLoads loads = moment_loads(sweeper.source_loads(), spec.quad, ne);
  LoSolver solver(spec, lo, outer);
  AndersonMixer mixer(outer.anderson_depth);

  SmmResult res;
  std::vector<double> x(4 * static_cast<std::size_t>(ne), 0.0);  // scattering flux iterate
  std::vector<double> phi_lo = x, j_lo;

  for (int it = 1; it <= outer.max_iters; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    const DgScalarField scatter = to_scalar_field(spec.mesh, x);

    auto t0 = Clock::now();
    res.psi = sweeper.sweep(scatter);
    rec.t_sweep = seconds_since(t0);
    rec.ho_balance = sweeper.balance_residual(res.psi, scatter);

    t0 = Clock::now();
    res.closures = compute_closures(res.psi, sweeper);
    assemble_rhs(spec, lo, res.closures, loads, solver.system());
    rec.t_assembly = seconds_since(t0);

    t0 = Clock::now();
    rec.inner_iterations = solver.solve(phi_lo, j_lo);
    rec.t_solve = seconds_since(t0);
    rec.lo_balance = solver.balance(phi_lo, j_lo);

    const DgScalarField gx = to_scalar_field(spec.mesh, phi_lo);
    const double denom = l2_norm(gx);
    rec.update_norm = denom > 0.0 ? l2_distance(gx, scatter) / denom : l2_norm(scatter);
    const double dmax = max_abs(phi_lo);
    rec.update_max = max_abs_diff(phi_lo, x);
    double e2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) e2 += (phi_lo[i] - x[i]) * (phi_lo[i] - x[i]);
    rec.update_coef = std::sqrt(e2);
    rec.update_norm_inf = dmax > 0.0 ? rec.update_max / dmax : rec.update_max;
    rec.residual = outer.norm == OuterNorm::RelativeL2 ? rec.update_norm : rec.update_coef;
    res.records.push_back(rec);
    if (outer.history_sink) outer.history_sink(rec);

    if (rec.residual <= outer.tol || (denom == 0.0 && rec.update_norm == 0.0)) {
      res.phi = gx;
      res.current = to_vector_field(spec.mesh, j_lo);
      res.iterations = it;
      return res;
    }
    x = outer.anderson_depth > 0 ? mixer.step(x, phi_lo) : phi_lo;
  }
  throw OuterConvergenceError("outer iteration did not converge in " + std::to_string(outer.max_iters) +
                                  " iterations (last update " +
                                  std::to_string(res.records.back().residual) + ")",
                              res.records);
}

}  // namespace smm
