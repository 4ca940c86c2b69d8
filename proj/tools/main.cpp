#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sentsim/analysis.hpp"
#include "sentsim/dynamics.hpp"
#include "sentsim/io.hpp"
#include "sentsim/kernel.hpp"

namespace fs = std::filesystem;
using namespace sentsim;

namespace {

std::string snapshot_stem(long iteration) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "phi%05ld", iteration);
  return buf;
}

Matrix load_square_grid(const fs::path& path) {
  Matrix g = read_csv(path);
  if (g.rows() != g.cols()) {
    throw IoError(path.string() + ": sentiment grid must be square, got " +
                  std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  }
  return g;
}

// Config-file values overridden by whichever flags were actually given.
struct SimFlags {
  std::string config_path;
  std::string dt;  // "auto" or a number
  double eps = 0.0;
  long max_iters = 0;
  std::string sign;
  long snapshot_every = 0;
  bool symmetrize = false;
  int threads = 0;

  CLI::Option* dt_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* max_iters_opt = nullptr;
  CLI::Option* sign_opt = nullptr;
  CLI::Option* snapshot_opt = nullptr;
  CLI::Option* symmetrize_opt = nullptr;

  void attach(CLI::App* cmd, bool with_snapshots) {
    cmd->add_option("--config", config_path, "Config file (key = value lines)")
        ->check(CLI::ExistingFile);
    dt_opt = cmd->add_option("--dt", dt, "Time step, a number or \"auto\"");
    eps_opt = cmd->add_option("--eps", eps, "Stopping tolerance")
                  ->check(CLI::PositiveNumber);
    max_iters_opt = cmd->add_option("--max-iters", max_iters, "Iteration cap")
                        ->check(CLI::PositiveNumber);
    sign_opt = cmd->add_option("--sign", sign, "Sign convention")
                   ->check(CLI::IsMember({"diffusive", "paper_literal"}));
    if (with_snapshots) {
      snapshot_opt = cmd->add_option("--snapshot-every", snapshot_every,
                                     "Snapshot cadence in iterations (0 disables)")
                         ->check(CLI::NonNegativeNumber);
    }
    symmetrize_opt = cmd->add_flag("--symmetrize-offsets", symmetrize,
                                   "Use (W(d) + W(-d)) / 2 as the effective kernel");
    cmd->add_option("--threads", threads,
                    "Worker thread cap (0 = library default); never changes output bytes")
        ->check(CLI::NonNegativeNumber);
  }

  SimConfig resolve() const {
    SimConfig cfg;
    if (!config_path.empty()) cfg = parse_config(config_path);
    if (dt_opt && dt_opt->count() > 0) {
      if (dt == "auto") {
        cfg.dt.reset();
      } else {
        char* end = nullptr;
        const double v = std::strtod(dt.c_str(), &end);
        if (end != dt.c_str() + dt.size() || !(v > 0.0)) {
          throw CLI::ValidationError("--dt", "expected a positive number or \"auto\"");
        }
        cfg.dt = v;
      }
    }
    if (eps_opt && eps_opt->count() > 0) cfg.eps = eps;
    if (max_iters_opt && max_iters_opt->count() > 0) cfg.max_iters = max_iters;
    if (sign_opt && sign_opt->count() > 0) {
      cfg.sign = sign == "diffusive" ? SignConvention::Diffusive
                                     : SignConvention::PaperLiteral;
    }
    if (snapshot_opt && snapshot_opt->count() > 0) cfg.snapshot_every = snapshot_every;
    if (symmetrize_opt && symmetrize_opt->count() > 0) cfg.symmetrize_offsets = symmetrize;
    set_thread_count(threads);
    return cfg;
  }
};

std::string manifest_text(const SimConfig& cfg, int n, int t, int block_start,
                          double dt_resolved, const RunResult& rr,
                          const PolarityReport& report,
                          const std::vector<std::string>& outputs) {
  std::string m;
  m += "sentsim run manifest\n";
  m += "n: " + std::to_string(n) + "\n";
  m += "t: " + std::to_string(t) + "\n";
  m += "block_start: " + std::to_string(block_start) + "\n";
  m += "sign: " + to_string(cfg.sign) + "\n";
  m += "dt: " + format_double(dt_resolved) + "\n";
  m += "eps: " + format_double(cfg.eps) + "\n";
  m += "max_iters: " + std::to_string(cfg.max_iters) + "\n";
  m += "snapshot_every: " + std::to_string(cfg.snapshot_every) + "\n";
  m += "symmetrize_offsets: " + std::string(cfg.symmetrize_offsets ? "true" : "false") + "\n";
  m += "mu: " + format_double(cfg.mu) + "\n";
  m += "sigma: " + format_double(cfg.sigma) + "\n";
  m += "seed_kernel: " + std::to_string(cfg.seed_kernel) + "\n";
  m += "seed_init: " + std::to_string(cfg.seed_init) + "\n";
  m += "iterations: " + std::to_string(rr.iterations) + "\n";
  m += "converged: " + std::string(rr.converged ? "true" : "false") + "\n";
  m += "initial_sum: " + format_double(rr.initial_sum) + "\n";
  m += "final_sum: " + format_double(rr.final_sum) + "\n";
  m += "classification: " + to_string(report.classification) + "\n";
  m += "outputs:\n";
  for (const auto& f : outputs) m += "  " + f + "\n";
  return m;
}

int cmd_gen_kernel(int n, int extra, double mu, double sigma, std::uint64_t seed,
                   const fs::path& out) {
  RngStream rng(seed);
  const ExtendedKernel k = gen_kernel(n, extra, mu, sigma, rng);
  fs::create_directories(out);
  write_csv(k.values, out / "kernel.csv");
  write_pgm(k.values, PixelMapping::Kernel, out / "kernel.pgm");
  std::cout << "wrote " << (out / "kernel.csv").string() << " and kernel.pgm (t = "
            << k.t << ", block_start = " << k.block_start << ")\n";
  return 0;
}

int cmd_gen_init(int n, std::uint64_t seed, const fs::path& out) {
  RngStream rng(seed);
  const Matrix g = gen_initial_grid(n, rng);
  fs::create_directories(out);
  write_csv(g, out / "phi00000.csv");
  write_pgm(g, PixelMapping::Sentiment, out / "phi00000.pgm");
  std::cout << "wrote " << (out / "phi00000.csv").string() << " and phi00000.pgm (n = "
            << n << ")\n";
  return 0;
}

int cmd_simulate(const fs::path& kernel_path, const fs::path& init_path,
                 const SimFlags& flags, const fs::path& outdir) {
  SimConfig cfg = flags.resolve();
  const Matrix init = load_square_grid(init_path);
  const int n = init.cols();
  cfg.n = n;

  const ExtendedKernel kernel = wrap_kernel(read_csv(kernel_path), n);
  cfg.extra = kernel.t - n;
  const OffsetWeights w = kernel_offsets(kernel, cfg.symmetrize_offsets);
  const double dt_resolved = cfg.dt ? *cfg.dt : stable_dt(w);

  const RunResult rr = run_to_equilibrium(init, w, cfg);

  fs::create_directories(outdir);
  std::vector<std::string> outputs;
  const auto emit = [&](const Matrix& m, PixelMapping mapping, const std::string& stem) {
    write_csv(m, outdir / (stem + ".csv"));
    write_pgm(m, mapping, outdir / (stem + ".pgm"));
    outputs.push_back(stem + ".csv");
    outputs.push_back(stem + ".pgm");
  };

  emit(init, PixelMapping::Sentiment, "phi00000");
  for (const Snapshot& snap : rr.snapshots) {
    emit(snap.grid, PixelMapping::Sentiment, snapshot_stem(snap.iteration));
  }
  emit(rr.final_grid, PixelMapping::Sentiment, "final");
  emit(baseline_no_interaction(init), PixelMapping::Sentiment, "baseline");

  const DiffGrid diff = difference_map(init, rr.final_grid);
  emit(diff.as_matrix(), PixelMapping::DiffMap, "diff");

  const PolarityReport report = polarity_report(init, rr.final_grid);
  write_text(outdir / "manifest.txt",
             manifest_text(cfg, n, kernel.t, kernel.block_start, dt_resolved, rr, report,
                           outputs));

  std::cout << "iterations: " << rr.iterations << "\n"
            << "converged: " << (rr.converged ? "true" : "false") << "\n"
            << "initial_sum: " << format_double(rr.initial_sum) << "\n"
            << "final_sum: " << format_double(rr.final_sum) << "\n"
            << "classification: " << to_string(report.classification) << "\n";

  if (!rr.converged) {
    std::cerr << "error: no equilibrium within " << cfg.max_iters
              << " iterations (outputs written anyway)\n";
    return 1;
  }
  return 0;
}

int cmd_baseline(const fs::path& grid_path, const fs::path& out) {
  const Matrix g = read_csv(grid_path);
  const Matrix b = baseline_no_interaction(g);
  fs::create_directories(out);
  write_csv(b, out / "baseline.csv");
  write_pgm(b, PixelMapping::Sentiment, out / "baseline.pgm");
  std::cout << "wrote " << (out / "baseline.csv").string() << " and baseline.pgm\n";
  return 0;
}

int cmd_diffmap(const fs::path& init_path, const fs::path& final_path, const fs::path& out) {
  const Matrix init = read_csv(init_path);
  const Matrix fin = read_csv(final_path);
  const DiffGrid diff = difference_map(init, fin);
  const PolarityReport report = polarity_report(init, fin);
  fs::create_directories(out);
  write_csv(diff.as_matrix(), out / "diff.csv");
  write_pgm(diff.as_matrix(), PixelMapping::DiffMap, out / "diff.pgm");
  std::cout << "classification: " << to_string(report.classification) << "\n";
  return 0;
}

std::string report_text(const PolarityReport& r) {
  std::string s;
  s += "initial_sum: " + format_double(r.initial_sum) + "\n";
  s += "final_sum: " + format_double(r.final_sum) + "\n";
  s += "count_pos_flip: " + std::to_string(r.count_pos_flip) + "\n";
  s += "count_neg_flip: " + std::to_string(r.count_neg_flip) + "\n";
  s += "count_unchanged: " + std::to_string(r.count_unchanged) + "\n";
  s += "classification: " + to_string(r.classification) + "\n";
  return s;
}

int cmd_report(const fs::path& init_path, const fs::path& final_path,
               const std::string& out_file) {
  const Matrix init = read_csv(init_path);
  const Matrix fin = read_csv(final_path);
  const std::string text = report_text(polarity_report(init, fin));
  std::cout << text;
  if (!out_file.empty()) write_text(out_file, text);
  return 0;
}

int cmd_sensitivity(const fs::path& kernel_path, const fs::path& init_path,
                    const SimFlags& flags, const fs::path& out) {
  SimConfig cfg = flags.resolve();
  cfg.snapshot_every = 0;
  const Matrix init = load_square_grid(init_path);
  const int n = init.cols();
  cfg.n = n;
  const ExtendedKernel kernel = wrap_kernel(read_csv(kernel_path), n);
  const OffsetWeights w = kernel_offsets(kernel, cfg.symmetrize_offsets);

  const SensitivityResult res = sensitivity_scan(init, w, cfg);

  fs::create_directories(out);
  write_csv(res.table, out / "sensitivity.csv");
  std::string summary;
  summary += "pixel: " + std::to_string(res.row) + " " + std::to_string(res.col) + "\n";
  summary += "deviation: " + format_double(res.deviation) + "\n";
  write_text(out / "sensitivity.txt", summary);
  std::cout << summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal bistable sentiment dynamics: seeded generation, "
               "equilibrium runs, difference maps, sensitivity scans"};
  app.require_subcommand(1);

  // gen-kernel
  auto* gk = app.add_subcommand("gen-kernel", "Generate a seeded extended interaction kernel");
  int gk_n = 16, gk_extra = -1;
  double gk_mu = 1.0, gk_sigma = 1.7;
  std::uint64_t gk_seed = 0;
  std::string gk_out;
  gk->add_option("--n", gk_n, "Surveyed block size")->check(CLI::PositiveNumber);
  auto* gk_extra_opt =
      gk->add_option("--extra", gk_extra, "Outside individuals (default n - 1)")
          ->check(CLI::NonNegativeNumber);
  gk->add_option("--mu", gk_mu, "Log-mean of the lognormal interaction scores");
  gk->add_option("--sigma", gk_sigma, "Log-std of the lognormal interaction scores")
      ->check(CLI::PositiveNumber);
  gk->add_option("--seed", gk_seed, "Kernel seed");
  gk->add_option("--out", gk_out, "Output directory")->required();

  // gen-init
  auto* gi = app.add_subcommand("gen-init", "Generate a seeded uniform initial grid");
  int gi_n = 16;
  std::uint64_t gi_seed = 0;
  std::string gi_out;
  gi->add_option("--n", gi_n, "Grid side")->check(CLI::PositiveNumber);
  gi->add_option("--seed", gi_seed, "Initial-grid seed");
  gi->add_option("--out", gi_out, "Output directory")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a grid to equilibrium and report");
  std::string sim_kernel, sim_init, sim_outdir;
  SimFlags sim_flags;
  sim->add_option("--kernel", sim_kernel, "Kernel CSV")->required()->check(CLI::ExistingFile);
  sim->add_option("--init", sim_init, "Initial grid CSV")->required()->check(CLI::ExistingFile);
  sim->add_option("--outdir", sim_outdir, "Output directory")->required();
  sim_flags.attach(sim, /*with_snapshots=*/true);

  // baseline
  auto* base = app.add_subcommand("baseline", "Interaction-free end state (sign map)");
  std::string base_grid, base_out;
  base->add_option("--grid", base_grid, "Grid CSV")->required()->check(CLI::ExistingFile);
  base->add_option("--out", base_out, "Output directory")->required();

  // diffmap
  auto* dm = app.add_subcommand("diffmap", "Difference map sign(final) - sign(initial)");
  std::string dm_init, dm_final, dm_out;
  dm->add_option("--init", dm_init, "Initial grid CSV")->required()->check(CLI::ExistingFile);
  dm->add_option("--final", dm_final, "Final grid CSV")->required()->check(CLI::ExistingFile);
  dm->add_option("--out", dm_out, "Output directory")->required();

  // report
  auto* rep = app.add_subcommand("report", "Polarity report for an initial/final pair");
  std::string rep_init, rep_final, rep_out;
  rep->add_option("--init", rep_init, "Initial grid CSV")->required()->check(CLI::ExistingFile);
  rep->add_option("--final", rep_final, "Final grid CSV")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", rep_out, "Also write the report to this file");

  // sensitivity
  auto* sens = app.add_subcommand("sensitivity",
                                  "Scan for the single flip with the largest effect");
  std::string sens_kernel, sens_init, sens_out;
  SimFlags sens_flags;
  sens->add_option("--kernel", sens_kernel, "Kernel CSV")->required()->check(CLI::ExistingFile);
  sens->add_option("--init", sens_init, "Initial grid CSV")->required()->check(CLI::ExistingFile);
  sens->add_option("--out", sens_out, "Output directory")->required();
  sens_flags.attach(sens, /*with_snapshots=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gk->parsed()) {
      const int extra = gk_extra_opt->count() > 0 ? gk_extra : gk_n - 1;
      return cmd_gen_kernel(gk_n, extra, gk_mu, gk_sigma, gk_seed, gk_out);
    }
    if (gi->parsed()) return cmd_gen_init(gi_n, gi_seed, gi_out);
    if (sim->parsed()) return cmd_simulate(sim_kernel, sim_init, sim_flags, sim_outdir);
    if (base->parsed()) return cmd_baseline(base_grid, base_out);
    if (dm->parsed()) return cmd_diffmap(dm_init, dm_final, dm_out);
    if (rep->parsed()) return cmd_report(rep_init, rep_final, rep_out);
    if (sens->parsed()) return cmd_sensitivity(sens_kernel, sens_init, sens_flags, sens_out);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
