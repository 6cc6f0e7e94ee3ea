// Exact stochastic simulation of the switched process and escape-fraction sweeps.
#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "switchcrn/linalg.hpp"
#include "switchcrn/model.hpp"

namespace switchcrn {

/// Direct: every reaction and environment jump is an event.
/// Thinning: candidate reactions at the largest total propensity over environments, with the
/// environment at each candidate drawn from exp(kappa Q dt). Same law, cost independent of kappa.
/// Auto: Thinning when the fastest switching rate exceeds 4 times the largest total propensity at x0.
enum class SimMethod { Direct, Thinning, Auto };
std::string to_string(SimMethod m);
SimMethod parse_sim_method(const std::string& s);

struct SimConfig {
    double kappa = 1.0;
    State x0;
    std::size_t i0 = 0;
    double t_max = 1e3;
    std::int64_t escape_norm = 1000;  ///< escape when ||x||_1 >= escape_norm
    std::uint64_t max_events = 10'000'000;
    std::uint64_t seed = 0;
    bool record = false;  ///< keep every event in the trajectory
    SimMethod method = SimMethod::Direct;
};

void validate(const SimConfig& cfg, const SwitchedModel& model);

enum class Termination { TimeLimit, Escape, EventCap, Absorbed };
std::string to_string(Termination t);

struct Trajectory {
    std::vector<double> times;  ///< recorded events only, starting with t = 0
    std::vector<State> states;
    std::vector<std::size_t> envs;
    Termination end = Termination::TimeLimit;
    double t_end = 0.0;
    State final_state;
    std::size_t final_env = 0;
    std::uint64_t n_events = 0;  ///< candidate reactions under Thinning
};

Trajectory simulate(const SwitchedModel& model, const SimConfig& cfg);

/// exp(a) for a small square matrix by scaling and squaring.
Matrix expm(const Matrix& a);

/// 64-bit mixer used for every derived seed.
std::uint64_t splitmix64(std::uint64_t x);
/// Seed of trajectory `traj` at grid point `kappa_index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t kappa_index, std::uint64_t traj);

/// 95% Wilson score interval for `successes` out of `n`; (0, 1) when n == 0.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n);

struct EscapeStats {
    double fraction = 0.0;  ///< escaped / (n_traj - n_event_capped); NaN when no run finished
    double wilson_low = 0.0;
    double wilson_high = 1.0;
    double mean_final_l1 = 0.0;
    std::size_t n_traj = 0;
    std::size_t n_escaped = 0;
    std::size_t n_event_capped = 0;
};

/// Runs n_traj trajectories with seeds cfg.seed + index.
EscapeStats escape_fraction(const SwitchedModel& model, const SimConfig& cfg, std::size_t n_traj,
                            std::size_t threads = 1);

struct SweepRow {
    double kappa;
    EscapeStats stats;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Escape fractions over an ascending kappa grid. Trajectory t at grid point k uses
/// derive_seed(base.seed, k, t), so the result does not depend on `threads`.
SweepResult sweep_kappa(const SwitchedModel& model, const std::vector<double>& kappas,
                        const SimConfig& base, std::size_t n_traj, std::size_t threads = 1);

void write_sweep_csv(std::ostream& os, const SweepResult& result);
/// One line per recorded event: t, species counts, 1-based environment.
void write_trajectory_csv(std::ostream& os, const SwitchedModel& model, const Trajectory& traj);

}  // namespace switchcrn
