#include "smm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

namespace smm::harness {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

MethodEntry method(const std::string& name, LoMethod m, LoVariant v, LoBoundary bc, PenaltyMode mode) {
  MethodEntry e;
  e.name = name;
  e.lo.method = m;
  e.lo.variant = v;
  e.lo.bc = bc;
  e.lo.ip_mode = mode;
  return e;
}

std::vector<MethodEntry> mms_methods() {
  using enum LoMethod;
  using enum LoVariant;
  using enum LoBoundary;
  return {method("p1", P1, Consistent, Half),
          method("ldg-consistent-half", LDG, Consistent, Half),
          method("ldg-consistent-full", LDG, Consistent, Full),
          method("ip-consistent-half", IP, Consistent, Half),
          method("ldg-independent", LDG, Independent, Full),
          method("ip-independent", IP, Independent, Full)};
}

std::vector<MethodEntry> diffusion_limit_methods() {
  using enum LoMethod;
  using enum LoVariant;
  using enum LoBoundary;
  return {method("p1", P1, Consistent, Half),
          method("ldg-full", LDG, Consistent, Full),
          method("ldg-half", LDG, Consistent, Half),
          method("ldg-indep", LDG, Independent, Full),
          method("ip-full", IP, Consistent, Full),
          method("ip-half", IP, Consistent, Half),
          method("ip-unmodified", IP, Consistent, Full, PenaltyMode::Plain),
          method("ip-indep", IP, Independent, Full)};
}

std::vector<MethodEntry> crooked_pipe_methods() {
  using enum LoMethod;
  using enum LoVariant;
  using enum LoBoundary;
  return {method("p1", P1, Consistent, Half),
          method("ldg-full", LDG, Consistent, Full),
          method("ldg-half", LDG, Consistent, Half),
          method("ldg-indep", LDG, Independent, Full),
          method("ip-full", IP, Consistent, Full),
          method("ip-half", IP, Consistent, Half),
          method("ip-indep", IP, Independent, Full)};
}

// ---------------------------------------------------------------- MMS

MmsOptions::MmsOptions() {
  outer.norm = OuterNorm::AbsoluteCoefficient;
  outer.tol = 1e-10;
  outer.inner_tol = 1e-13;
  outer.max_iters = 1000;
}

std::vector<MmsRow> run_mms(const MmsOptions& opt, const std::vector<MethodEntry>& methods) {
  std::vector<MmsRow> rows;
  for (const auto& m : methods) {
    for (int n : opt.sizes) {
      MmsRow row;
      row.method = m.name;
      row.variant = m.lo.variant;
      row.n = n;
      row.h = 1.0 / n;
      try {
        bench::MmsParams p = opt.problem;
        p.n = n;
        const ProblemSpec spec = bench::make_mms_problem(p);
        SmmResult r = solve_smm(spec, m.lo, opt.outer);
        const double delta = p.delta;
        row.err_phi = l2_error(r.phi, [delta](Point x) { return bench::mms_phi(x, delta); });
        row.err_j = l2_error(r.current, [delta](Point x) { return bench::mms_current(x, delta); });
        row.cons_phi = l2_distance(r.phi, r.closures.phi);
        row.cons_j = l2_distance(r.current, r.closures.current);
        row.iterations = r.iterations;
        row.phi = std::move(r.phi);
        row.current = std::move(r.current);
      } catch (const std::exception& ex) {
        row.error = ex.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<MmsRow> run_consistency(const MmsOptions& opt, const std::vector<MethodEntry>& methods) {
  return run_mms(opt, methods);
}

std::vector<OrderRow> observed_orders(const std::vector<MmsRow>& rows) {
  std::vector<OrderRow> out;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[i + 1];
    if (a.method != b.method || !a.ok() || !b.ok()) continue;
    OrderRow o;
    o.method = a.method;
    o.n_coarse = a.n;
    o.n_fine = b.n;
    const double ratio = std::log2(static_cast<double>(b.n) / a.n);
    o.order_phi = observed_order(a.err_phi, b.err_phi) / ratio;
    o.order_j = observed_order(a.err_j, b.err_j) / ratio;
    out.push_back(o);
  }
  return out;
}

std::vector<PairwiseRow> consistent_pairwise(const std::vector<MmsRow>& rows) {
  std::map<int, std::vector<const MmsRow*>> by_n;
  for (const auto& r : rows)
    if (r.ok() && r.variant == LoVariant::Consistent) by_n[r.n].push_back(&r);
  std::vector<PairwiseRow> out;
  for (const auto& [n, group] : by_n) {
    PairwiseRow p;
    p.n = n;
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t k = i + 1; k < group.size(); ++k) {
        p.max_phi = std::max(p.max_phi, l2_distance(group[i]->phi, group[k]->phi));
        p.max_j = std::max(p.max_j, l2_distance(group[i]->current, group[k]->current));
      }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------- diffusion limit

DiffusionLimitOptions::DiffusionLimitOptions() {
  outer.norm = OuterNorm::AbsoluteCoefficient;
  outer.tol = 1e-6;
  outer.inner_tol = 1e-12;
  outer.max_iters = 500;
}

std::vector<DiffusionLimitRow> run_diffusion_limit(const DiffusionLimitOptions& opt,
                                                   const std::vector<MethodEntry>& methods) {
  std::vector<DiffusionLimitRow> rows;
  for (double eps : opt.eps) {
    const ProblemSpec spec = bench::make_diffusion_limit_problem({eps, opt.n, opt.sn});
    for (const auto& m : methods) {
      DiffusionLimitRow row;
      row.method = m.name;
      row.eps = eps;
      try {
        const SmmResult r = solve_smm(spec, m.lo, opt.outer);
        row.iterations = r.iterations;
        row.converged = true;
        row.lineout = sample_line(r.phi, {0.0, 0.5}, {1.0, 0.5}, opt.lineout_points);
      } catch (const OuterConvergenceError& ex) {
        row.iterations = static_cast<int>(ex.history.size());
        row.error = ex.what();
      } catch (const std::exception& ex) {
        row.error = ex.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// -------------------------------------------------------- crooked pipe

CrookedPipeOptions::CrookedPipeOptions() {
  outer.norm = OuterNorm::AbsoluteCoefficient;
  outer.tol = 1e-6;
  outer.inner_tol = 1e-10;
  outer.max_iters = 1000;
  outer.preconditioner = "cholesky";
}

double total_variation(const std::vector<double>& v) {
  double tv = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
  return tv;
}

Lineout sample_lineout(const DgScalarField& phi, const DgVectorField& j_lo, const DgVectorField& j_ho,
                       Point a, Point b, int m) {
  Lineout out;
  for (int i = 0; i < m; ++i) {
    const Point p = a + ((i + 0.5) / m) * (b - a);
    const Point jl{j_lo[0].eval(p), j_lo[1].eval(p)};
    const Point jh{j_ho[0].eval(p), j_ho[1].eval(p)};
    out.x.push_back(p.x);
    out.phi.push_back(phi.eval(p));
    out.jmag.push_back(std::sqrt(dot(jl, jl)));
    out.jmag_ho.push_back(std::sqrt(dot(jh, jh)));
    const Point d = jl - jh;
    out.max_current_mismatch = std::max(out.max_current_mismatch, std::sqrt(dot(d, d)));
  }
  return out;
}

std::vector<CrookedPipeRow> run_crooked_pipe(const CrookedPipeOptions& opt,
                                             const std::vector<MethodEntry>& methods) {
  const ProblemSpec spec = bench::make_crooked_pipe_problem(opt.problem);
  const Box& box = spec.mesh->bbox();
  const int m = spec.mesh->nx() * opt.samples_per_element;
  std::vector<CrookedPipeRow> rows;
  for (int depth : opt.anderson) {
    for (const auto& meth : methods) {
      CrookedPipeRow row;
      row.method = meth.name;
      row.variant = meth.lo.variant;
      row.anderson = depth;
      OuterConfig outer = opt.outer;
      outer.anderson_depth = depth;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const SmmResult r = solve_smm(spec, meth.lo, outer);
        row.iterations = r.iterations;
        row.converged = true;
        row.records = r.records;
        row.ho_balance = r.records.back().ho_balance;
        row.lo_balance = r.records.back().lo_balance;
        row.lineout = sample_lineout(r.phi, r.current, r.closures.current, {box.x0, box.y0},
                                     {box.x1, box.y0}, m);
        row.tv_current = total_variation(row.lineout.jmag);
      } catch (const OuterConvergenceError& ex) {
        row.iterations = static_cast<int>(ex.history.size());
        row.records = ex.history;
        row.error = ex.what();
      } catch (const std::exception& ex) {
        row.error = ex.what();
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ----------------------------------------------------------------- CSV

void write_mms_csv(std::ostream& os, const std::vector<MmsRow>& rows) {
  os << "method,variant,n,h,err_phi,err_j,cons_phi,cons_j,iterations,status\n";
  for (const auto& r : rows)
    os << r.method << ',' << to_string(r.variant) << ',' << r.n << ',' << fmt(r.h) << ',' << fmt(r.err_phi)
       << ',' << fmt(r.err_j) << ',' << fmt(r.cons_phi) << ',' << fmt(r.cons_j) << ',' << r.iterations << ','
       << (r.ok() ? "ok" : "failed") << '\n';
}

void write_orders_csv(std::ostream& os, const std::vector<OrderRow>& rows) {
  os << "method,n_coarse,n_fine,order_phi,order_j\n";
  for (const auto& r : rows)
    os << r.method << ',' << r.n_coarse << ',' << r.n_fine << ',' << fmt(r.order_phi) << ','
       << fmt(r.order_j) << '\n';
}

void write_pairwise_csv(std::ostream& os, const std::vector<PairwiseRow>& rows) {
  os << "n,max_diff_phi,max_diff_j\n";
  for (const auto& r : rows) os << r.n << ',' << fmt(r.max_phi) << ',' << fmt(r.max_j) << '\n';
}

void write_diffusion_table_csv(std::ostream& os, const std::vector<DiffusionLimitRow>& rows) {
  std::vector<std::string> methods;
  std::vector<double> eps;
  for (const auto& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    if (std::find(eps.begin(), eps.end(), r.eps) == eps.end()) eps.push_back(r.eps);
  }
  os << "eps";
  for (const auto& m : methods) os << ',' << m;
  os << '\n';
  for (double e : eps) {
    os << fmt_short(e);
    for (const auto& m : methods) {
      os << ',';
      for (const auto& r : rows)
        if (r.eps == e && r.method == m) {
          if (r.converged)
            os << r.iterations;
          else
            os << "nc";
        }
    }
    os << '\n';
  }
}

void write_diffusion_lineout_csv(std::ostream& os, const std::vector<DiffusionLimitRow>& rows) {
  os << "method,eps,x,y,phi\n";
  for (const auto& r : rows)
    for (const auto& s : r.lineout)
      os << r.method << ',' << fmt_short(r.eps) << ',' << fmt(s.x) << ',' << fmt(s.y) << ',' << fmt(s.value)
         << '\n';
}

void write_crooked_pipe_csv(std::ostream& os, const std::vector<CrookedPipeRow>& rows) {
  os << "method,variant,anderson,iterations,converged,ho_balance,lo_balance,tv_current,"
        "max_current_mismatch,seconds\n";
  for (const auto& r : rows)
    os << r.method << ',' << to_string(r.variant) << ',' << r.anderson << ',' << r.iterations << ','
       << (r.converged ? 1 : 0) << ',' << fmt(r.ho_balance) << ',' << fmt(r.lo_balance) << ','
       << fmt(r.tv_current) << ',' << fmt(r.converged ? r.lineout.max_current_mismatch : kNaN) << ','
       << fmt_short(r.seconds) << '\n';
}

void write_crooked_lineout_csv(std::ostream& os, const CrookedPipeRow& row) {
  os << "x,phi,jmag_lo,jmag_ho\n";
  const auto& l = row.lineout;
  for (std::size_t i = 0; i < l.x.size(); ++i)
    os << fmt(l.x[i]) << ',' << fmt(l.phi[i]) << ',' << fmt(l.jmag[i]) << ',' << fmt(l.jmag_ho[i]) << '\n';
}

void write_records_csv(std::ostream& os, const std::vector<IterationRecord>& records) {
  os << "iteration,residual,update_norm,update_norm_inf,update_coef,inner_iterations,ho_balance,lo_balance,"
        "t_sweep,t_assembly,t_solve\n";
  for (const auto& r : records)
    os << r.iteration << ',' << fmt(r.residual) << ',' << fmt(r.update_norm) << ',' << fmt(r.update_norm_inf)
       << ',' << fmt(r.update_coef) << ','
       << r.inner_iterations << ',' << fmt(r.ho_balance) << ',' << fmt(r.lo_balance) << ','
       << fmt_short(r.t_sweep) << ',' << fmt_short(r.t_assembly) << ',' << fmt_short(r.t_solve) << '\n';
}

}  // namespace smm::harness
