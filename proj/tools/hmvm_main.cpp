#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hmvm/dvm.hpp"
#include "hmvm/simulation.hpp"

namespace {

void add_run_options(CLI::App* cmd, hmvm::ScenarioConfig& cfg, std::string& positional) {
  cmd->add_option("SCENARIO", positional, "Scenario name (landau, two-stream, weibel, orszag-tang, bump)");
  cmd->add_option("--scenario", cfg.scenario, "Scenario name (alternative to the positional form)");
  cmd->add_option("--scheme", cfg.scheme,
                  "Field integrator: 1 (implicit midpoint), 2 (leapfrog magnetic), va "
                  "(electrostatic), none (streaming only)");
  cmd->add_option("--N,--Nx", cfg.Nx, "Cells along x");
  cmd->add_option("--Ny", cfg.Ny, "Cells along y (2-D scenarios)");
  cmd->add_option("--M", cfg.M, "Expansion order");
  cmd->add_option("--cfl", cfg.cfl, "CFL number");
  cmd->add_option("--t-end", cfg.t_end, "Final time");
  cmd->add_option("--A", cfg.A, "Perturbation amplitude");
  cmd->add_option("--k", cfg.k, "Perturbation wavenumber (domain length 2*pi/k)");
  cmd->add_option("--diag-every", cfg.diag_every, "Time between diagnostic rows (0 = every step)");
  cmd->add_option("--snapshot-every", cfg.snapshot_every,
                  "Time between binary snapshots (0 = final only)");
  cmd->add_option("--out-dir", cfg.out_dir, "Output directory (empty = no files)");
  cmd->add_option("--threads", cfg.threads, "Worker threads");
  cmd->add_flag("--adaptive-dt", cfg.adaptive_dt, "Re-evaluate the CFL bound every step");
  cmd->add_option("--dvm-nv", cfg.dvm_nv, "Velocity nodes per axis for the reference solver");
  cmd->add_option("--dvm-vmax", cfg.dvm_vmax, "Velocity cutoff for the reference solver");
  cmd->set_config("--config", "", "Read options from a key=value file");
}

int resolve_scenario(hmvm::ScenarioConfig& cfg, const std::string& positional) {
  if (!positional.empty()) cfg.scenario = positional;
  const std::string canon = hmvm::canonical_scenario_name(cfg.scenario);
  if (canon.empty()) {
    std::fprintf(stderr,
                 "unknown scenario '%s' (expected landau, two-stream, weibel, "
                 "orszag-tang, or bump)\n",
                 cfg.scenario.c_str());
    return 1;
  }
  cfg.scenario = canon;
  return 0;
}

void print_summary(const hmvm::ScenarioSetup& setup, const hmvm::RunSummary& s) {
  std::printf("scenario=%s scheme=%s order=%d steps=%lld dt=%.6e\n", setup.name.c_str(),
              setup.scheme.empty() ? "none" : setup.scheme.c_str(), setup.basis->order(),
              s.steps, s.dt);
  std::printf("final: t=%.6g mass_drift=%.3e energy_drift=%.3e\n", s.t_final, s.v_mass,
              s.v_energy);
  if (s.fit.ok)
    std::printf("electric-energy fit: slope=%.6g peaks=%d\n", s.fit.slope, s.fit.n_peaks);
  if (s.exit_status != 0)
    std::fprintf(stderr, "physics abort: %s\n", s.abort_reason.c_str());
}

struct Channel {
  const char* name;
  double hmvm::EnergyBreakdown::* field;
};

constexpr Channel kChannels[] = {
    {"kinetic", &hmvm::EnergyBreakdown::kinetic_total},
    {"electric", &hmvm::EnergyBreakdown::electric},
    {"electric_1", &hmvm::EnergyBreakdown::electric_1},
    {"electric_2", &hmvm::EnergyBreakdown::electric_2},
    {"magnetic", &hmvm::EnergyBreakdown::magnetic_exact},
};

/// Runs the velocity-grid reference on the same scenario and reports the
/// relative L2 distance of the log energy histories per channel.
int run_dvm_comparison(const hmvm::ScenarioConfig& cfg, const hmvm::ScenarioSetup& setup,
                       const std::vector<hmvm::EnergyBreakdown>& moment_history) {
  if (!setup.f0 || setup.grid.sdim != 1 || setup.species.size() != 1) {
    std::fprintf(stderr, "scenario '%s' is not supported by the velocity-grid reference\n",
                 setup.name.c_str());
    return 1;
  }
  hmvm::ScenarioConfig fresh = cfg; // re-create the unevolved initial state
  hmvm::ScenarioSetup init = hmvm::make_scenario(fresh);
  hmvm::DvmRunParams params;
  params.nv = cfg.dvm_nv;
  params.vmax = cfg.dvm_vmax;
  params.t_end = init.t_end;
  params.diag_every = cfg.diag_every;
  const hmvm::DvmResult ref = hmvm::dvm_run(init, params);

  std::vector<double> tm, tr;
  for (const auto& e : moment_history) tm.push_back(e.time);
  for (const auto& e : ref.history) tr.push_back(e.time);
  const double t1 = init.t_end;
  const int nsamp = 401;

  std::printf("reference: nv=%d vmax=%g steps=%lld dt=%.6e\n", params.nv, params.vmax,
              ref.steps, ref.dt);
  for (const Channel& ch : kChannels) {
    std::vector<double> ym, yr;
    for (const auto& e : moment_history) ym.push_back(e.*ch.field);
    for (const auto& e : ref.history) yr.push_back(e.*ch.field);
    const double d = hmvm::log_series_distance(tm, ym, tr, yr, 0.0, t1, nsamp);
    std::printf("channel %-10s rel-L2(log) = %.4f\n", ch.name, d);
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / "compare.csv";
    std::ofstream out(path);
    out.precision(17);
    out << "t";
    for (const Channel& ch : kChannels) out << "," << ch.name << "_moment," << ch.name << "_ref";
    out << "\n";
    const std::size_t n = std::min(moment_history.size(), ref.history.size());
    for (std::size_t i = 0; i < n; ++i) {
      out << moment_history[i].time;
      for (const Channel& ch : kChannels)
        out << "," << moment_history[i].*ch.field << "," << ref.history[i].*ch.field;
      out << "\n";
    }
    std::printf("joint series written to %s\n", path.string().c_str());
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive spectral moment solver for collisionless plasma kinetics"};
  app.require_subcommand(1);

  hmvm::ScenarioConfig run_cfg, cmp_cfg;
  std::string run_pos, cmp_pos;
  bool compare_dvm = false;

  CLI::App* run = app.add_subcommand("run", "Run one scenario and report conservation drifts");
  add_run_options(run, run_cfg, run_pos);
  run->add_flag("--compare-dvm", compare_dvm,
                "Also run the velocity-grid reference and report distances");

  CLI::App* cmp = app.add_subcommand(
      "compare", "Run the moment solver and the velocity-grid reference side by side");
  add_run_options(cmp, cmp_cfg, cmp_pos);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      if (int rc = resolve_scenario(run_cfg, run_pos)) return rc;
      hmvm::Simulation sim(hmvm::make_scenario(run_cfg), run_cfg);
      const hmvm::RunSummary summary = sim.run();
      print_summary(sim.setup(), summary);
      if (summary.exit_status == 0 && compare_dvm) {
        if (int rc = run_dvm_comparison(run_cfg, sim.setup(), sim.history())) return rc;
      }
      return summary.exit_status;
    }
    if (int rc = resolve_scenario(cmp_cfg, cmp_pos)) return rc;
    hmvm::Simulation sim(hmvm::make_scenario(cmp_cfg), cmp_cfg);
    const hmvm::RunSummary summary = sim.run();
    print_summary(sim.setup(), summary);
    if (summary.exit_status != 0) return summary.exit_status;
    return run_dvm_comparison(cmp_cfg, sim.setup(), sim.history());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
