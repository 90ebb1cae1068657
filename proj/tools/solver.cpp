// Benchmark runner: solver <case> [options]
//
// Writes CSV tables into --out (default ./results) and prints a short summary.
// Exits with status 1 when any row of the method matrix fails.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "smm/config.hpp"
#include "smm/harness.hpp"

namespace fs = std::filesystem;
using namespace smm;

namespace {

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  std::cout << "  wrote " << (dir / name).string() << '\n';
  return os;
}

int run_mms(RunConfig& cfg, const fs::path& out) {
  const auto rows = harness::run_mms(cfg.mms, cfg.methods);
  const auto orders = harness::observed_orders(rows);
  const auto pairs = harness::consistent_pairwise(rows);

  std::cout << std::left << std::setw(22) << "method" << std::setw(5) << "n" << std::setw(14) << "err_phi"
            << std::setw(14) << "err_J" << std::setw(14) << "cons_phi" << std::setw(14) << "cons_J"
            << "iters\n";
  int failed = 0;
  for (const auto& r : rows) {
    std::cout << std::setw(22) << r.method << std::setw(5) << r.n;
    if (!r.ok()) {
      std::cout << "FAILED: " << r.error << '\n';
      ++failed;
      continue;
    }
    std::cout << std::scientific << std::setprecision(3) << std::setw(14) << r.err_phi << std::setw(14)
              << r.err_j << std::setw(14) << r.cons_phi << std::setw(14) << r.cons_j << std::defaultfloat
              << r.iterations << '\n';
  }
  std::cout << "\nobserved orders\n";
  for (const auto& o : orders)
    std::cout << "  " << std::setw(22) << o.method << o.n_coarse << "->" << o.n_fine << "  phi "
              << std::fixed << std::setprecision(3) << o.order_phi << "  J " << o.order_j << std::defaultfloat
              << '\n';

  auto os = open_csv(out, "mms_errors.csv");
  harness::write_mms_csv(os, rows);
  auto oo = open_csv(out, "mms_orders.csv");
  harness::write_orders_csv(oo, orders);
  auto op = open_csv(out, "mms_consistent_pairwise.csv");
  harness::write_pairwise_csv(op, pairs);
  return failed;
}

int run_diffusion(RunConfig& cfg, const fs::path& out) {
  const auto rows = harness::run_diffusion_limit(cfg.diffusion, cfg.methods);
  int failed = 0;
  for (const auto& r : rows) {
    std::cout << std::setw(16) << std::left << r.method << " eps=" << std::setw(8) << r.eps;
    if (r.converged) {
      std::cout << r.iterations << " iterations\n";
    } else {
      std::cout << "not converged: " << r.error << '\n';
      ++failed;
    }
  }
  auto ot = open_csv(out, "diffusion_limit_iterations.csv");
  harness::write_diffusion_table_csv(ot, rows);
  auto ol = open_csv(out, "diffusion_limit_lineout.csv");
  harness::write_diffusion_lineout_csv(ol, rows);
  return failed;
}

int run_crooked(RunConfig& cfg, const fs::path& out) {
  cfg.crooked.outer.history_sink = [](const IterationRecord& r) {
    if (r.iteration % 10 == 0) std::cerr << "    iteration " << r.iteration << "  residual " << r.residual << '\n';
  };
  int failed = 0;
  std::vector<harness::CrookedPipeRow> all;
  // One method at a time so partial results survive a long campaign.
  for (int depth : cfg.crooked.anderson) {
    harness::CrookedPipeOptions opt = cfg.crooked;
    opt.anderson = {depth};
    for (const auto& m : cfg.methods) {
      std::cout << m.name << " AA(" << depth << ")" << std::flush;
      auto rows = harness::run_crooked_pipe(opt, {m});
      auto& r = rows.front();
      if (r.converged) {
        std::cout << ": " << r.iterations << " iterations, HO balance " << r.ho_balance << ", LO balance "
                  << r.lo_balance << ", TV|J| " << r.tv_current << ", " << r.seconds << " s\n";
        const std::string tag = m.name + "_aa" + std::to_string(depth);
        auto ol = open_csv(out, "crooked_pipe_lineout_" + tag + ".csv");
        harness::write_crooked_lineout_csv(ol, r);
      } else {
        std::cout << ": FAILED: " << r.error << '\n';
        ++failed;
      }
      const std::string tag = m.name + "_aa" + std::to_string(depth);
      auto orec = open_csv(out, "crooked_pipe_records_" + tag + ".csv");
      harness::write_records_csv(orec, r.records);
      all.push_back(std::move(r));
    }
  }
  auto os = open_csv(out, "crooked_pipe_summary.csv");
  harness::write_crooked_pipe_csv(os, all);
  return failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SMM-accelerated S_N transport benchmarks"};
  app.set_help_all_flag("--help-all");

  std::string case_name;
  app.add_option("case", case_name, "mms | diffusion-limit | crooked-pipe")
      ->required()
      ->check(CLI::IsMember({"mms", "diffusion-limit", "crooked-pipe"}));

  std::string config_path;
  std::optional<std::string> lo, variant, bc, ip_mode, precond, outer_norm;
  std::optional<int> sn, refine, anderson, max_outer, max_inner;
  std::optional<double> outer_tol, inner_tol, ip_c;
  std::vector<double> ldg_w;
  std::string out_dir = "results";
  bool quick = false;

  app.add_option("--config", config_path, "YAML configuration file")->check(CLI::ExistingFile);
  app.add_option("--lo", lo, "Run a single LO method instead of the case's method matrix")
      ->check(CLI::IsMember({"p1", "ldg", "ip"}));
  app.add_option("--variant", variant, "consistent | independent")
      ->check(CLI::IsMember({"consistent", "independent"}));
  app.add_option("--bc", bc, "LO boundary closure: half | full")->check(CLI::IsMember({"half", "full"}));
  app.add_option("--ip-mode", ip_mode, "mip | plain")->check(CLI::IsMember({"mip", "plain"}));
  app.add_option("--ip-c", ip_c, "IP penalty constant")->check(CLI::PositiveNumber);
  app.add_option("--ldg-w", ldg_w, "LDG switch vector (two numbers)")->expected(2);
  app.add_option("--sn", sn, "Level-symmetric order")->check(CLI::IsMember({2, 4, 6, 8, 10, 12}));
  app.add_option("--refine", refine, "Uniform refinement level")->check(CLI::NonNegativeNumber);
  app.add_option("--anderson", anderson, "Anderson depth m (0 = plain fixed point)")->check(CLI::NonNegativeNumber);
  app.add_option("--outer-tol", outer_tol, "Outer tolerance")->check(CLI::PositiveNumber);
  app.add_option("--outer-norm", outer_norm, "relative-l2 | absolute-coefficient")
      ->check(CLI::IsMember({"relative-l2", "absolute-coefficient"}));
  app.add_option("--inner-tol", inner_tol, "CG relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-outer", max_outer, "Outer iteration limit")->check(CLI::PositiveNumber);
  app.add_option("--max-inner", max_inner, "CG iteration limit")->check(CLI::PositiveNumber);
  app.add_option("--precond", precond, "none | jacobi | sgs | ichol | cholesky")
      ->check(CLI::IsMember({"none", "jacobi", "sgs", "ichol", "cholesky"}));
  app.add_flag("--quick", quick, "crooked-pipe: S4 on the half-resolution mesh");
  app.add_option("--out", out_dir, "Output directory for CSV files");

  CLI11_PARSE(app, argc, argv);

  try {
    const CaseName c = parse_case(case_name);
    RunConfig cfg = config_path.empty() ? default_config(c) : load_config(config_path, c);

    if (quick) {
      cfg.crooked.problem.nx /= 2;
      cfg.crooked.problem.ny /= 2;
      cfg.crooked.problem.sn = 4;
    }
    if (lo || variant || bc || ip_mode || ip_c || !ldg_w.empty()) {
      harness::MethodEntry m;
      m.lo.method = parse_method(lo.value_or("ldg"));
      m.lo.variant = parse_variant(variant.value_or("consistent"));
      m.lo.bc = parse_boundary(bc.value_or(m.lo.variant == LoVariant::Independent ? "full" : "half"));
      if (ip_mode) m.lo.ip_mode = parse_penalty_mode(*ip_mode);
      if (ip_c) m.lo.ip_c = *ip_c;
      if (!ldg_w.empty()) m.lo.ldg_w = {ldg_w[0], ldg_w[1]};
      m.lo.validate();
      m.name = m.lo.label();
      cfg.methods = {m};
    }
    if (sn) {
      cfg.mms.problem.sn = *sn;
      cfg.diffusion.sn = *sn;
      cfg.crooked.problem.sn = *sn;
    }
    if (refine) {
      cfg.crooked.problem.refine = *refine;
      cfg.diffusion.n = 8 << *refine;
      cfg.mms.sizes.clear();
      for (int l = 0; l <= *refine; ++l) cfg.mms.sizes.push_back(8 << l);
    }
    OuterConfig& outer = cfg.outer();
    if (anderson) {
      outer.anderson_depth = *anderson;
      cfg.crooked.anderson = {*anderson};
    }
    if (outer_tol) outer.tol = *outer_tol;
    if (outer_norm) outer.norm = parse_outer_norm(*outer_norm);
    if (inner_tol) outer.inner_tol = *inner_tol;
    if (max_outer) outer.max_iters = *max_outer;
    if (max_inner) outer.max_inner = *max_inner;
    if (precond) outer.preconditioner = *precond;

    const fs::path out(out_dir);
    fs::create_directories(out);
    int failed = 0;
    switch (c) {
      case CaseName::Mms: failed = run_mms(cfg, out); break;
      case CaseName::DiffusionLimit: failed = run_diffusion(cfg, out); break;
      case CaseName::CrookedPipe: failed = run_crooked(cfg, out); break;
    }
    if (failed > 0) {
      std::cerr << failed << " row(s) failed\n";
      return 1;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
