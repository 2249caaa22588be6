#include "hmvm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hmvm/convection.hpp"
#include "hmvm/em_solver.hpp"
#include "hmvm/errors.hpp"
#include "hmvm/snapshot.hpp"

namespace hmvm {

Simulation::Simulation(ScenarioSetup setup, const ScenarioConfig& cfg)
    : setup_(std::move(setup)), cfg_(cfg) {}

void Simulation::record(long long step, double t) {
  EnergyBreakdown e = audit(setup_.grid, *setup_.basis, setup_.species, setup_.field,
                            setup_.phys, dt_, setup_.scheme == "2");
  e.step = step;
  e.time = t;
  const double energy = setup_.scheme == "2" ? e.total_product : e.total_exact;
  if (!have_ref_) {
    mass0_ = e.mass_total;
    energy0_ = energy;
    have_ref_ = true;
  } else {
    const double ms = mass0_ == 0.0 ? 1.0 : std::abs(mass0_);
    const double es = energy0_ == 0.0 ? 1.0 : std::abs(energy0_);
    v_mass_ = std::max(v_mass_, std::abs(e.mass_total - mass0_) / ms);
    v_energy_ = std::max(v_energy_, std::abs(energy - energy0_) / es);
  }
  history_.push_back(e);
  if (csv_.is_open()) csv_.row(e, v_mass_, v_energy_);
}

void Simulation::write_snapshots(long long step) const {
  const std::filesystem::path dir(cfg_.out_dir);
  for (const SpeciesState& s : setup_.species) {
    const std::string name =
        "moments_" + s.params.name + "_step" + std::to_string(step) + ".bin";
    write_moment_snapshot((dir / name).string(), *setup_.basis, s.cells);
  }
  write_field_snapshot((dir / ("field_step" + std::to_string(step) + ".bin")).string(),
                       setup_.grid, setup_.field);
}

void Simulation::advance_fields(double dt) {
  if (setup_.scheme == "2") {
    scheme2_step(setup_.grid, *setup_.basis, dt, setup_.phys, setup_.species, setup_.field);
  } else if (setup_.scheme == "1") {
    scheme1_step(setup_.grid, *setup_.basis, dt, setup_.phys, setup_.species, setup_.field);
  } else if (setup_.scheme == "va") {
    va_step(setup_.grid, *setup_.basis, dt, setup_.phys, setup_.species, setup_.field);
  } // "none": streaming only
}

RunSummary Simulation::run() {
#ifdef _OPENMP
  if (cfg_.threads > 0) omp_set_num_threads(cfg_.threads);
#endif
  RunSummary summary;
  const double t_end = setup_.t_end;
  dt_ = cfl_dt(setup_.grid, *setup_.basis, setup_.species, setup_.cfl);
  nsteps_ = std::max<long long>(1, static_cast<long long>(std::ceil(t_end / dt_ - 1e-9)));
  dt_ = t_end / static_cast<double>(nsteps_);
  summary.dt = dt_;

  if (setup_.scheme == "2") {
    // Seed the staggered level half a step before t = 0 so that the
    // product-form energy is well defined from the first audit onward.
    std::vector<Vec3> curlE;
    curl(setup_.grid, setup_.field.E, curlE);
    setup_.field.B_half_prev.resize(setup_.grid.ncell());
    for (std::size_t c = 0; c < setup_.grid.ncell(); ++c)
      for (int d = 0; d < 3; ++d)
        setup_.field.B_half_prev[c][d] = setup_.field.B[c][d] + 0.5 * dt_ * curlE[c][d];
  }

  if (!cfg_.out_dir.empty()) {
    std::filesystem::create_directories(cfg_.out_dir);
    std::vector<std::string> names;
    for (const SpeciesState& s : setup_.species) names.push_back(s.params.name);
    csv_.open((std::filesystem::path(cfg_.out_dir) / "diag.csv").string(), names);
  }

  history_.clear();
  have_ref_ = false;
  v_mass_ = v_energy_ = 0.0;
  record(0, 0.0);

  const long long diag_stride =
      cfg_.diag_every > 0.0 ? std::max<long long>(1, std::llround(cfg_.diag_every / dt_)) : 1;
  double next_snap = cfg_.snapshot_every > 0.0 ? cfg_.snapshot_every : t_end * 2.0;

  double t = 0.0;
  long long step = 0;
  try {
    if (!cfg_.adaptive_dt) {
      for (step = 1; step <= nsteps_; ++step) {
        convection_step(setup_.grid, *setup_.basis, dt_, setup_.species);
        advance_fields(dt_);
        t = static_cast<double>(step) * dt_;
        if (step % diag_stride == 0 || step == nsteps_) record(step, t);
        if (!cfg_.out_dir.empty() && t + 1e-12 >= next_snap && step != nsteps_) {
          write_snapshots(step);
          next_snap += cfg_.snapshot_every;
        }
      }
      step = nsteps_;
    } else {
      double next_diag = cfg_.diag_every > 0.0 ? cfg_.diag_every : 0.0;
      while (t < t_end * (1.0 - 1e-12)) {
        double dt = cfl_dt(setup_.grid, *setup_.basis, setup_.species, setup_.cfl);
        dt = std::min(dt, t_end - t);
        convection_step(setup_.grid, *setup_.basis, dt, setup_.species);
        advance_fields(dt);
        t += dt;
        ++step;
        const bool last = t >= t_end * (1.0 - 1e-12);
        if (cfg_.diag_every <= 0.0 || t + 1e-12 >= next_diag || last) {
          record(step, t);
          next_diag += cfg_.diag_every;
        }
        if (!cfg_.out_dir.empty() && t + 1e-12 >= next_snap && !last) {
          write_snapshots(step);
          next_snap += cfg_.snapshot_every;
        }
      }
    }
  } catch (const PositivityError& err) {
    summary.exit_status = 2;
    summary.abort_reason = err.what();
  } catch (const ConvergenceError& err) {
    summary.exit_status = 2;
    summary.abort_reason = err.what();
  }

  summary.steps = step;
  summary.t_final = t;
  summary.v_mass = v_mass_;
  summary.v_energy = v_energy_;
  if (summary.exit_status == 0 && !cfg_.out_dir.empty()) write_snapshots(step);
  csv_.close(); // output must be durable once the run returns

  std::vector<double> times, electric;
  times.reserve(history_.size());
  electric.reserve(history_.size());
  for (const EnergyBreakdown& e : history_) {
    times.push_back(e.time);
    electric.push_back(e.electric);
  }
  summary.fit = damping_fit(times, electric, 0.0, t_end);
  return summary;
}

RunSummary run_scenario(const ScenarioConfig& cfg, std::vector<EnergyBreakdown>* history) {
  Simulation sim(make_scenario(cfg), cfg);
  RunSummary summary = sim.run();
  if (history) *history = sim.history();
  return summary;
}

} // namespace hmvm
