#include "switchcrn/sim.hpp"

#include "switchcrn/mixing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace switchcrn {

namespace {

struct CompiledReaction {
    double rate;
    std::vector<std::pair<std::size_t, std::uint32_t>> inputs;
    std::vector<std::pair<std::size_t, std::int64_t>> delta;  // nonzero entries only
};

struct CompiledEnv {
    std::vector<CompiledReaction> reactions;
    std::vector<std::pair<std::size_t, double>> jumps;  // (target, kappa q_ij)
    double jump_total = 0.0;
};

std::vector<CompiledEnv> compile(const SwitchedModel& model, double kappa) {
    std::vector<CompiledEnv> envs(model.n_env());
    const std::size_t d = model.n_species();
    for (std::size_t i = 0; i < model.n_env(); ++i) {
        for (const Reaction& r : model.environment(i).reactions) {
            CompiledReaction cr{r.rate, {}, {}};
            for (const auto& [m, c] : r.source.counts) cr.inputs.emplace_back(m, c);
            auto delta = reaction_delta(r, d);
            for (std::size_t m = 0; m < d; ++m)
                if (delta[m] != 0) cr.delta.emplace_back(m, delta[m]);
            envs[i].reactions.push_back(std::move(cr));
        }
        for (std::size_t j = 0; j < model.n_env(); ++j) {
            double rate = j == i ? 0.0 : kappa * model.q()(i, j);
            if (rate > 0.0) {
                envs[i].jumps.emplace_back(j, rate);
                envs[i].jump_total += rate;
            }
        }
    }
    return envs;
}

double compiled_propensity(const CompiledReaction& r, const State& x) {
    double p = r.rate;
    for (const auto& [m, c] : r.inputs) {
        std::int64_t avail = x[m];
        if (avail < std::int64_t(c)) return 0.0;
        for (std::uint32_t k = 0; k < c; ++k) p *= double(avail - std::int64_t(k));
    }
    return p;
}

// uniform on [0, 1) from the top 53 bits
double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

std::int64_t l1(const State& x) {
    std::int64_t s = 0;
    for (auto v : x) s += v;
    return s;
}

template <typename Task>
void run_parallel(std::size_t n_tasks, std::size_t threads, Task task) {
    threads = std::max<std::size_t>(1, std::min(threads, n_tasks));
    if (threads == 1) {
        for (std::size_t k = 0; k < n_tasks; ++k) task(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n_tasks; k = next++) task(k);
        });
    for (auto& th : pool) th.join();
}

EscapeStats summarize(const std::vector<Trajectory>& runs) {
    EscapeStats s;
    s.n_traj = runs.size();
    double l1_sum = 0.0;
    for (const Trajectory& t : runs) {
        if (t.end == Termination::Escape) ++s.n_escaped;
        if (t.end == Termination::EventCap) ++s.n_event_capped;
        l1_sum += double(l1(t.final_state));
    }
    std::size_t finished = s.n_traj - s.n_event_capped;
    s.fraction = finished == 0 ? std::numeric_limits<double>::quiet_NaN()
                               : double(s.n_escaped) / double(finished);
    std::tie(s.wilson_low, s.wilson_high) = wilson_interval(s.n_escaped, finished);
    s.mean_final_l1 = s.n_traj == 0 ? std::numeric_limits<double>::quiet_NaN() : l1_sum / double(s.n_traj);
    return s;
}

}  // namespace

void validate(const SimConfig& cfg, const SwitchedModel& model) {
    if (!(cfg.kappa > 0.0) || !std::isfinite(cfg.kappa)) throw std::invalid_argument("kappa must be positive and finite");
    if (!(cfg.t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (cfg.escape_norm < 1) throw std::invalid_argument("escape norm must be a positive integer");
    if (cfg.max_events < 1) throw std::invalid_argument("max_events must be positive");
    if (cfg.i0 >= model.n_env()) throw std::invalid_argument("initial environment out of range");
    if (cfg.x0.size() != model.n_species()) throw std::invalid_argument("initial state has wrong dimension");
    for (auto v : cfg.x0)
        if (v < 0) throw std::invalid_argument("initial state must be non-negative");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::TimeLimit: return "TimeLimit";
        case Termination::Escape: return "Escape";
        case Termination::EventCap: return "EventCap";
        case Termination::Absorbed: return "Absorbed";
    }
    return "?";
}

std::string to_string(SimMethod m) {
    switch (m) {
        case SimMethod::Direct: return "direct";
        case SimMethod::Thinning: return "thinning";
        case SimMethod::Auto: return "auto";
    }
    return "?";
}

SimMethod parse_sim_method(const std::string& s) {
    if (s == "direct") return SimMethod::Direct;
    if (s == "thinning") return SimMethod::Thinning;
    if (s == "auto") return SimMethod::Auto;
    throw std::invalid_argument("unknown simulation method: " + s);
}

Matrix expm(const Matrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("expm needs a square matrix");
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(a(i, j));
        norm = std::max(norm, row);
    }
    int squarings = 0;
    if (norm > 0.5) squarings = int(std::ceil(std::log2(norm / 0.5)));
    Matrix scaled = std::ldexp(1.0, -squarings) * a;
    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 14; ++k) {
        term = (1.0 / k) * (term * scaled);
        result = result + term;
    }
    for (int k = 0; k < squarings; ++k) result = result * result;
    return result;
}

namespace {

// Row of exp(gen t). Reversible generators use sqrt(w_j / w_i) sum_k U_ik U_jk e^{lambda_k t}
// from the symmetrized matrix; any other generator falls back to expm.
class EnvSampler {
public:
    explicit EnvSampler(const Matrix& gen) : gen_(gen), n_(gen.rows()) {
        Vec w;
        try {
            w = stationary_distribution(gen);
        } catch (const std::invalid_argument&) {
            return;
        }
        const double tol = 1e-12 * std::max(1.0, gen.max_abs());
        Matrix sym(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::fabs(w[i] * gen(i, j) - w[j] * gen(j, i)) > tol) return;
                sym(i, j) = std::sqrt(w[i]) * gen(i, j) / std::sqrt(w[j]);
            }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) sym(i, j) = sym(j, i) = 0.5 * (sym(i, j) + sym(j, i));
        eig_ = symmetric_eigen(sym);
        sqrt_w_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) sqrt_w_[i] = std::sqrt(w[i]);
        reversible_ = true;
        row_.resize(n_);
        decay_.resize(n_);
    }

    const Vec& row(std::size_t i, double t) {
        if (!reversible_) {
            Matrix p = expm(t * gen_);
            row_.assign(n_, 0.0);
            for (std::size_t j = 0; j < n_; ++j) row_[j] = p(i, j);
            return row_;
        }
        for (std::size_t k = 0; k < n_; ++k) decay_[k] = eig_.vectors(i, k) * std::exp(eig_.values[k] * t);
        for (std::size_t j = 0; j < n_; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n_; ++k) s += decay_[k] * eig_.vectors(j, k);
            row_[j] = s * sqrt_w_[j] / sqrt_w_[i];
        }
        return row_;
    }

private:
    Matrix gen_;
    std::size_t n_;
    bool reversible_ = false;
    SymmetricEigen eig_;
    Vec sqrt_w_, row_, decay_;
};

Trajectory simulate_direct(const SwitchedModel& model, const SimConfig& cfg) {
    const auto envs = compile(model, cfg.kappa);
    std::mt19937_64 rng(splitmix64(cfg.seed));

    Trajectory tr;
    State x = cfg.x0;
    std::size_t env = cfg.i0;
    double t = 0.0;
    auto record = [&] {
        if (!cfg.record) return;
        tr.times.push_back(t);
        tr.states.push_back(x);
        tr.envs.push_back(env);
    };
    auto finish = [&](Termination why, double t_end) {
        tr.end = why;
        tr.t_end = t_end;
        tr.final_state = x;
        tr.final_env = env;
        return tr;
    };
    record();
    std::int64_t norm = l1(x);
    if (norm >= cfg.escape_norm) return finish(Termination::Escape, 0.0);

    // propensities cached per environment and invalidated by every reaction event
    std::vector<std::vector<double>> cache(envs.size());
    std::vector<double> cache_total(envs.size(), 0.0);
    std::vector<std::uint64_t> stamp(envs.size(), 0);
    std::uint64_t version = 1;
    while (true) {
        const CompiledEnv& ce = envs[env];
        std::vector<double>& props = cache[env];
        if (stamp[env] != version) {
            props.resize(ce.reactions.size());
            double sum = 0.0;
            for (std::size_t r = 0; r < ce.reactions.size(); ++r) {
                props[r] = compiled_propensity(ce.reactions[r], x);
                sum += props[r];
            }
            cache_total[env] = sum;
            stamp[env] = version;
        }
        const double react_total = cache_total[env];
        const double total = react_total + ce.jump_total;
        if (total <= 0.0) return finish(Termination::Absorbed, cfg.t_max);
        if (tr.n_events >= cfg.max_events) return finish(Termination::EventCap, t);
        t += -std::log(1.0 - uniform01(rng)) / total;
        if (t > cfg.t_max) return finish(Termination::TimeLimit, cfg.t_max);
        double pick = uniform01(rng) * total;
        ++tr.n_events;
        if (pick < react_total) {
            std::size_t r = 0;
            for (; r + 1 < props.size(); ++r) {
                if (pick < props[r]) break;
                pick -= props[r];
            }
            while (props[r] == 0.0) --r;  // guard against rounding past the last live channel
            for (const auto& [m, dm] : ce.reactions[r].delta) {
                x[m] += dm;
                norm += dm;
            }
            ++version;
            record();
            if (norm >= cfg.escape_norm) return finish(Termination::Escape, t);
        } else {
            pick -= react_total;
            std::size_t k = 0;
            for (; k + 1 < ce.jumps.size(); ++k) {
                if (pick < ce.jumps[k].second) break;
                pick -= ce.jumps[k].second;
            }
            env = ce.jumps[k].first;
            record();
        }
    }
}

Trajectory simulate_thinning(const SwitchedModel& model, const SimConfig& cfg) {
    const auto envs = compile(model, cfg.kappa);
    const std::size_t n = envs.size();
    EnvSampler sampler(cfg.kappa * model.q());
    std::mt19937_64 rng(splitmix64(cfg.seed));

    Trajectory tr;
    State x = cfg.x0;
    std::size_t env = cfg.i0;
    double t = 0.0;
    auto record = [&] {
        if (!cfg.record) return;
        tr.times.push_back(t);
        tr.states.push_back(x);
        tr.envs.push_back(env);
    };
    auto advance_env = [&](double dt) {
        const Vec& p = sampler.row(env, dt);
        double pick = uniform01(rng);
        std::size_t j = 0;
        for (; j + 1 < n; ++j) {
            double pj = std::max(0.0, p[j]);
            if (pick < pj) break;
            pick -= pj;
        }
        env = j;
    };
    auto finish = [&](Termination why, double t_end) {
        tr.end = why;
        tr.t_end = t_end;
        tr.final_state = x;
        tr.final_env = env;
        return tr;
    };
    record();
    std::int64_t norm = l1(x);
    if (norm >= cfg.escape_norm) return finish(Termination::Escape, 0.0);

    // reactions to refresh when species m changes
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> readers(x.size());
    std::vector<std::vector<double>> props(n);
    for (std::size_t i = 0; i < n; ++i) {
        props[i].resize(envs[i].reactions.size());
        for (std::size_t r = 0; r < props[i].size(); ++r) {
            props[i][r] = compiled_propensity(envs[i].reactions[r], x);
            for (const auto& in : envs[i].reactions[r].inputs) readers[in.first].emplace_back(i, r);
        }
    }
    std::vector<double> totals(n);
    while (true) {
        double bound = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (double a : props[i]) sum += a;
            totals[i] = sum;
            bound = std::max(bound, sum);
        }
        // no reaction can fire in any environment: the state is frozen
        if (bound <= 0.0) {
            if (envs[env].jump_total <= 0.0) return finish(Termination::Absorbed, cfg.t_max);
            advance_env(cfg.t_max - t);
            return finish(Termination::TimeLimit, cfg.t_max);
        }
        while (true) {
            if (tr.n_events >= cfg.max_events) return finish(Termination::EventCap, t);
            double dt = -std::log(1.0 - uniform01(rng)) / bound;
            if (t + dt > cfg.t_max) {
                advance_env(cfg.t_max - t);
                return finish(Termination::TimeLimit, cfg.t_max);
            }
            t += dt;
            ++tr.n_events;
            if (envs[env].jump_total > 0.0) advance_env(dt);
            double pick = uniform01(rng) * bound;
            if (pick >= totals[env]) continue;
            const std::vector<double>& pr = props[env];
            std::size_t r = 0;
            for (; r + 1 < pr.size(); ++r) {
                if (pick < pr[r]) break;
                pick -= pr[r];
            }
            while (pr[r] == 0.0) --r;
            for (const auto& [m, dm] : envs[env].reactions[r].delta) {
                x[m] += dm;
                norm += dm;
            }
            for (const auto& [m, dm] : envs[env].reactions[r].delta)
                for (const auto& [i, k] : readers[m]) props[i][k] = compiled_propensity(envs[i].reactions[k], x);
            record();
            if (norm >= cfg.escape_norm) return finish(Termination::Escape, t);
            break;
        }
    }
}

}  // namespace

Trajectory simulate(const SwitchedModel& model, const SimConfig& cfg) {
    validate(cfg, model);
    SimMethod method = cfg.method;
    if (method == SimMethod::Auto) {
        const auto envs = compile(model, cfg.kappa);
        double switching = 0.0, reacting = 0.0;
        for (const CompiledEnv& ce : envs) {
            switching = std::max(switching, ce.jump_total);
            double sum = 0.0;
            for (const CompiledReaction& r : ce.reactions) sum += compiled_propensity(r, cfg.x0);
            reacting = std::max(reacting, sum);
        }
        method = switching > 4.0 * reacting ? SimMethod::Thinning : SimMethod::Direct;
    }
    return method == SimMethod::Direct ? simulate_direct(model, cfg) : simulate_thinning(model, cfg);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t kappa_index, std::uint64_t traj) {
    return splitmix64(splitmix64(splitmix64(master) ^ kappa_index) ^ traj);
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n) {
    if (n == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double nn = double(n);
    const double p = double(successes) / nn;
    const double denom = 1.0 + z * z / nn;
    const double centre = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

EscapeStats escape_fraction(const SwitchedModel& model, const SimConfig& cfg, std::size_t n_traj,
                            std::size_t threads) {
    validate(cfg, model);
    std::vector<Trajectory> runs(n_traj);
    run_parallel(n_traj, threads, [&](std::size_t k) {
        SimConfig c = cfg;
        c.seed = cfg.seed + k;
        c.record = false;
        runs[k] = simulate(model, c);
    });
    return summarize(runs);
}

SweepResult sweep_kappa(const SwitchedModel& model, const std::vector<double>& kappas,
                        const SimConfig& base, std::size_t n_traj, std::size_t threads) {
    if (!std::is_sorted(kappas.begin(), kappas.end())) throw std::invalid_argument("kappa grid must be ascending");
    SweepResult out;
    if (kappas.empty()) return out;
    for (double k : kappas) {
        SimConfig c = base;
        c.kappa = k;
        validate(c, model);
    }
    std::vector<Trajectory> runs(kappas.size() * n_traj);
    run_parallel(runs.size(), threads, [&](std::size_t cell) {
        std::size_t k = cell / n_traj, t = cell % n_traj;
        SimConfig c = base;
        c.kappa = kappas[k];
        c.seed = derive_seed(base.seed, k, t);
        c.record = false;
        runs[cell] = simulate(model, c);
    });
    for (std::size_t k = 0; k < kappas.size(); ++k) {
        std::vector<Trajectory> slice(std::make_move_iterator(runs.begin() + k * n_traj),
                                      std::make_move_iterator(runs.begin() + (k + 1) * n_traj));
        out.rows.push_back({kappas[k], summarize(slice)});
    }
    return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "kappa,escape_fraction,wilson_low,wilson_high,mean_final_l1,n_traj,n_event_capped\n";
    for (const SweepRow& r : result.rows)
        os << format_double(r.kappa) << ',' << format_double(r.stats.fraction) << ','
           << format_double(r.stats.wilson_low) << ',' << format_double(r.stats.wilson_high) << ','
           << format_double(r.stats.mean_final_l1) << ',' << r.stats.n_traj << ','
           << r.stats.n_event_capped << '\n';
}

void write_trajectory_csv(std::ostream& os, const SwitchedModel& model, const Trajectory& traj) {
    os << 't';
    for (const auto& s : model.species()) os << ',' << s;
    os << ",env\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << format_double(traj.times[k]);
        for (auto v : traj.states[k]) os << ',' << v;
        os << ',' << traj.envs[k] + 1 << '\n';
    }
}

}  // namespace switchcrn
