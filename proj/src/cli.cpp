#include "switchcrn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "switchcrn/classify.hpp"
#include "switchcrn/drift.hpp"
#include "switchcrn/gallery.hpp"
#include "switchcrn/json_io.hpp"
#include "switchcrn/mixing.hpp"
#include "switchcrn/sim.hpp"

namespace switchcrn {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + s + "'");
    return x;
}

Vec parse_vec(const std::string& s) {
    Vec v;
    for (const auto& part : split(s, ',')) v.push_back(to_double(part));
    return v;
}

State parse_state(const std::string& s) {
    State x;
    for (const auto& part : split(s, ',')) {
        double v = to_double(part);
        if (v < 0 || std::floor(v) != v) throw UsageError("state entries must be non-negative integers");
        x.push_back(std::int64_t(v));
    }
    return x;
}

Params parse_params(const std::vector<std::string>& kvs) {
    Params p;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("parameter must look like name=value: " + kv);
        p[kv.substr(0, eq)] = to_double(kv.substr(eq + 1));
    }
    return p;
}

struct ModelSource {
    std::string path;
    std::string gallery;
    std::vector<std::string> params;

    void attach(CLI::App* app) {
        app->add_option("model", path, "model file (.crn text or .json)");
        app->add_option("--gallery", gallery, "built-in model id instead of a file");
        app->add_option("--param", params, "gallery parameter name=value (repeatable)");
    }

    SwitchedModel load() const {
        if (path.empty() == gallery.empty()) throw UsageError("give exactly one of a model file or --gallery");
        if (!gallery.empty()) {
            try {
                return build(gallery, parse_params(params));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
        if (!params.empty()) throw UsageError("--param only applies to --gallery models");
        if (!std::filesystem::exists(path)) throw UsageError("cannot read model file: " + path);
        return load_model_file(path);
    }
};

struct SimOptions {
    std::string x0;
    std::size_t env = 1;
    double t_max = 1e3;
    std::int64_t escape_norm = 1000;
    std::uint64_t max_events = 10'000'000;
    std::uint64_t seed = 0;
    std::string method = "direct";

    void attach(CLI::App* app) {
        app->add_option("--x0", x0, "initial state, comma separated (default all ones)");
        app->add_option("--env", env, "initial environment, 1-based")->check(CLI::PositiveNumber);
        app->add_option("--t-max", t_max, "time horizon");
        app->add_option("--escape-norm", escape_norm, "escape threshold on the l1 norm");
        app->add_option("--max-events", max_events, "event cap per trajectory");
        app->add_option("--seed", seed, "master seed");
        app->add_option("--method", method, "direct, thinning or auto")->check(CLI::IsMember({"direct", "thinning", "auto"}));
    }

    SimConfig config(const SwitchedModel& m) const {
        SimConfig c;
        c.x0 = x0.empty() ? State(m.n_species(), 1) : parse_state(x0);
        if (c.x0.size() != m.n_species()) throw UsageError("--x0 needs one entry per species");
        if (env < 1 || env > m.n_env()) throw UsageError("--env out of range");
        c.i0 = env - 1;
        c.t_max = t_max;
        c.escape_norm = escape_norm;
        c.max_events = max_events;
        c.seed = seed;
        c.method = parse_sim_method(method);
        return c;
    }
};

std::size_t default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::ostream& open_out(const std::string& path, std::ofstream& file, std::ostream& fallback) {
    if (path.empty() || path == "-") return fallback;
    file.open(path);
    if (!file) throw UsageError("cannot write " + path);
    return file;
}

std::vector<Vec> parse_coeff_rows(const std::string& body) {
    std::vector<Vec> rows;
    for (const auto& part : split(body, ';')) rows.push_back(parse_vec(part));
    return rows;
}

DirectionCertificate single_cert(const Conclusion& c, const char* what) {
    if (c.certificates.size() != 1) throw UsageError(std::string(what) + " needs a fast-regime certificate, classifier says " + to_string(c.outcome));
    return c.certificates.front();
}

std::vector<Vec> cert_vectors(const Conclusion& c) {
    std::vector<Vec> vs;
    for (const auto& cert : c.certificates) vs.push_back(cert.v);
    return vs;
}

std::vector<Vec> fast_transient_coeffs(const SwitchedModel& m, double kappa, const Vec& v) {
    ZVectors z = solve_z(m, stationary_distribution(m.q()), v, support_of(v));
    std::vector<Vec> coeffs;
    for (std::size_t i = 0; i < m.n_env(); ++i) {
        Vec c(v.size(), 0.0);
        Vec u = z.u(i);
        for (std::size_t k : z.support) c[k] = v[k] + u[k] / kappa;
        coeffs.push_back(c);
    }
    return coeffs;
}

LyapunovFn parse_h(const std::string& text, const SwitchedModel& m, double kappa) {
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "linear") return LyapunovFn::linear(parse_coeff_rows(body));
    if (kind == "reciprocal") return LyapunovFn::reciprocal(parse_coeff_rows(body));
    if (kind == "power") {
        auto parts = split(body, ':');
        if (parts.size() != 2) throw UsageError("power form is power:<s1,s2,...>:<exponent>");
        return LyapunovFn::power(parse_vec(parts[0]), to_double(parts[1]));
    }
    if (kind == "fast-ergodic") {
        DirectionCertificate cert = single_cert(classify_fast(m), "fast-ergodic");
        if (cert.kind != CertKind::Decreasing) throw UsageError("fast-ergodic: mixed matrix has no decreasing direction");
        ZVectors z = solve_z(m, stationary_distribution(m.q()), cert.v, full_set(m.n_species()));
        return fast_ergodic_function(cert.v, z, m.n_env(), kappa);
    }
    if (kind == "slow-ergodic") {
        Conclusion c = classify_slow(m);
        if (c.outcome != Outcome::ErgodicEventually) throw UsageError("slow-ergodic: some network matrix is not stable");
        return LyapunovFn::linear(cert_vectors(c));
    }
    if (kind == "fast-transient") {
        Conclusion c = classify_fast(m);
        if (c.outcome != Outcome::EvanescentEventually) throw UsageError("fast-transient: mixed matrix has no unstable support");
        return LyapunovFn::reciprocal(fast_transient_coeffs(m, kappa, single_cert(c, "fast-transient").v));
    }
    if (kind == "slow-transient") {
        Conclusion c = classify_slow(m);
        if (c.outcome != Outcome::EvanescentEventually) throw UsageError("slow-transient: no common unstable support");
        return LyapunovFn::reciprocal(cert_vectors(c));
    }
    throw UsageError("unknown function: " + text);
}

Json threshold_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// Threshold search for both regimes of a classified model.
Json regime_drift(const SwitchedModel& m, const RegimeVerdict& v) {
    Json out;
    auto guarded = [](auto fn) -> Json {
        try {
            return fn();
        } catch (const std::exception& e) {
            return Json{{"error", e.what()}};
        }
    };
    out["fast"] = guarded([&]() -> Json {
        if (v.fast.outcome == Outcome::ErgodicEventually) {
            ErgodicBuild b = build_fast_ergodic(m, v.fast.certificates.front());
            return Json{{"check", "fast-ergodic"}, {"kappa_threshold", b.kappa_threshold}, {"report", to_json(b.report)}};
        }
        if (v.fast.outcome == Outcome::EvanescentEventually) {
            const Vec& vv = v.fast.certificates.front().v;
            double t = fast_transience_threshold(m, vv);
            Json j{{"check", "fast-transience"}, {"kappa_threshold", threshold_json(t)}};
            if (std::isfinite(t)) j["report"] = to_json(check_fast_transience(m, t, vv));
            return j;
        }
        return Json{{"check", "none"}};
    });
    out["slow"] = guarded([&]() -> Json {
        if (v.slow.outcome == Outcome::ErgodicEventually) {
            ErgodicBuild b = build_slow_ergodic(m, v.slow.certificates);
            return Json{{"check", "slow-ergodic"}, {"kappa_threshold", b.kappa_threshold}, {"report", to_json(b.report)}};
        }
        if (v.slow.outcome == Outcome::EvanescentEventually) {
            auto vs = cert_vectors(v.slow);
            double t = slow_transience_threshold(m, v.slow.support, vs);
            Json j{{"check", "slow-transience"}, {"kappa_threshold", threshold_json(t)}};
            if (t > 0.0) j["report"] = to_json(check_slow_transience(m, t, v.slow.support, vs));
            return j;
        }
        return Json{{"check", "none"}};
    });
    return out;
}

Json expected_json(const ExpectedVerdict& e, const RegimeVerdict& got) {
    auto one = [](const ExpectedConclusion& c, const Conclusion& g) {
        return Json{{"outcome", to_string(c.outcome)}, {"reason", to_string(c.reason)},
                    {"support", c.support}, {"matches", matches(g, c)}};
    };
    return Json{{"fast", one(e.fast, got.fast)}, {"slow", one(e.slow, got.slow)}, {"note", e.note}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability analysis and simulation of reaction networks in switching environments"};
    app.name("switchcrn");
    app.require_subcommand(1);

    // analyze
    ModelSource analyze_src;
    auto* analyze = app.add_subcommand("analyze", "linearization, stationary weights and mixed matrix as JSON");
    analyze_src.attach(analyze);
    analyze->add_flag("--json", "JSON output (the only format)");

    // classify
    ModelSource classify_src;
    auto* classify_cmd = app.add_subcommand("classify", "fast and slow regime verdicts as JSON");
    classify_src.attach(classify_cmd);
    classify_cmd->add_flag("--json", "JSON output (the only format)");

    // generator
    ModelSource gen_src;
    std::string gen_h, gen_state;
    double gen_kappa = 1.0;
    std::size_t gen_env = 1;
    auto* gen = app.add_subcommand("generator", "exact generator of a Lyapunov function at one state");
    gen_src.attach(gen);
    gen->add_option("--fn", gen_h,
                    "linear:<c;c>, reciprocal:<c;c>, power:<s,s>:<p>, fast-ergodic, slow-ergodic, fast-transient, slow-transient")
        ->required();
    gen->add_option("--state", gen_state, "species counts, comma separated")->required();
    gen->add_option("--env", gen_env, "environment, 1-based")->check(CLI::PositiveNumber);
    gen->add_option("--kappa", gen_kappa, "switching speed")->check(CLI::PositiveNumber);

    // drift
    ModelSource drift_src;
    std::string drift_check, drift_h;
    double drift_kappa = std::numeric_limits<double>::quiet_NaN();
    double drift_eps = std::numeric_limits<double>::quiet_NaN();
    std::int64_t drift_box = 20;
    bool drift_samples = false;
    auto* drift = app.add_subcommand("drift", "drift inequality checks and kappa thresholds");
    drift_src.attach(drift);
    drift->add_option("--check", drift_check, "auto, fast-ergodic, slow-ergodic, fast-transience, slow-transience, grouped, foster")
        ->default_val("auto");
    drift->add_option("--kappa", drift_kappa, "kappa to check at (default: the threshold found)");
    drift->add_option("--eps", drift_eps, "cross-group rate for the grouped check");
    drift->add_option("--fn", drift_h, "Lyapunov function for the foster check (see generator)");
    drift->add_option("--box", drift_box, "box radius for the foster check");
    drift->add_flag("--samples", drift_samples, "include every sampled state");

    // simulate
    ModelSource sim_src;
    SimOptions sim_opts;
    double sim_kappa = 1.0;
    std::string sim_out;
    auto* simulate_cmd = app.add_subcommand("simulate", "one exact trajectory as CSV");
    sim_src.attach(simulate_cmd);
    sim_opts.attach(simulate_cmd);
    simulate_cmd->add_option("--kappa", sim_kappa, "switching speed")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--out", sim_out, "trajectory CSV path (default stdout)");

    // sweep
    ModelSource sweep_src;
    SimOptions sweep_opts;
    std::string sweep_grid, sweep_out, sweep_format = "csv";
    std::size_t sweep_trials = 200, sweep_threads = default_threads();
    auto* sweep = app.add_subcommand("sweep", "escape fractions over a kappa grid");
    sweep_src.attach(sweep);
    sweep_opts.attach(sweep);
    sweep->add_option("--kappa", sweep_grid, "log:<lo>:<hi>:<count>, lin:<lo>:<hi>:<count> or a list")->required();
    sweep->add_option("--trials", sweep_trials, "trajectories per kappa");
    sweep->add_option("--threads", sweep_threads, "worker cap")->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_out, "output path (default stdout)");
    sweep->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // reproduce
    std::string repro_id, repro_out = "reproduce_out", repro_grid;
    std::vector<std::string> repro_params;
    std::size_t repro_trials = 0, repro_threads = default_threads();
    std::uint64_t repro_seed = 0;
    auto* repro = app.add_subcommand("reproduce", "full pipeline for a gallery entry");
    repro->add_option("id", repro_id, "gallery id")->required();
    repro->add_option("--param", repro_params, "gallery parameter name=value (repeatable)");
    repro->add_option("--out", repro_out, "output directory");
    repro->add_option("--kappa", repro_grid, "override the sweep grid");
    repro->add_option("--trials", repro_trials, "override trajectories per kappa");
    repro->add_option("--seed", repro_seed, "master seed");
    repro->add_option("--threads", repro_threads, "worker cap")->check(CLI::PositiveNumber);

    // gallery-list
    std::string list_format = "text";
    auto* list = app.add_subcommand("gallery-list", "built-in models");
    list->add_option("--format", list_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    if (*analyze) {
        out << analysis_to_json(analyze_src.load()).dump(2) << '\n';
    } else if (*classify_cmd) {
        SwitchedModel m = classify_src.load();
        out << to_json(classify(m), m.species()).dump(2) << '\n';
    } else if (*gen) {
        SwitchedModel m = gen_src.load();
        State x = parse_state(gen_state);
        if (x.size() != m.n_species()) throw UsageError("--state needs one entry per species");
        if (gen_env > m.n_env()) throw UsageError("--env out of range");
        LyapunovFn h = parse_h(gen_h, m, gen_kappa);
        if (h.n_env() != m.n_env()) throw UsageError("h needs one coefficient row per environment");
        double g = generator_apply(m, gen_kappa, h, x, gen_env - 1);
        out << Json{{"kappa", gen_kappa}, {"state", x}, {"env", gen_env}, {"h_form", to_string(h.form())},
                    {"h", h.value(x, gen_env - 1)}, {"generator", g}}
                   .dump(2)
            << '\n';
    } else if (*drift) {
        SwitchedModel m = drift_src.load();
        RegimeVerdict v = classify(m);
        Json j;
        const bool have_kappa = !std::isnan(drift_kappa);
        if (have_kappa && !(drift_kappa > 0.0)) throw UsageError("--kappa must be positive");
        if (drift_check == "auto") {
            j = regime_drift(m, v);
        } else if (drift_check == "fast-ergodic") {
            if (v.fast.outcome != Outcome::ErgodicEventually) throw UsageError("mixed matrix has no decreasing direction");
            ErgodicBuild b = build_fast_ergodic(m, v.fast.certificates.front());
            j = {{"check", drift_check}, {"kappa_threshold", b.kappa_threshold}};
            if (have_kappa) {
                ZVectors z = solve_z(m, stationary_distribution(m.q()), v.fast.certificates.front().v, full_set(m.n_species()));
                DriftReport r;
                r.kappa = drift_kappa;
                r.leading = fast_ergodic_leading(m, v.fast.certificates.front().v, z, drift_kappa);
                r.algebraic_pass = std::all_of(r.leading.begin(), r.leading.end(), [](const Vec& row) {
                    return std::all_of(row.begin(), row.end(), [](double x) { return x < 0.0; });
                });
                j["report"] = to_json(r);
            } else {
                j["report"] = to_json(b.report);
            }
        } else if (drift_check == "slow-ergodic") {
            if (v.slow.outcome != Outcome::ErgodicEventually) throw UsageError("some network matrix is not stable");
            ErgodicBuild b = build_slow_ergodic(m, v.slow.certificates);
            j = {{"check", drift_check}, {"kappa_threshold", b.kappa_threshold}};
            DriftReport r = b.report;
            if (have_kappa) {
                r.kappa = drift_kappa;
                r.leading = slow_ergodic_leading(m, cert_vectors(v.slow), drift_kappa);
                r.algebraic_pass = std::all_of(r.leading.begin(), r.leading.end(), [](const Vec& row) {
                    return std::all_of(row.begin(), row.end(), [](double x) { return x < 0.0; });
                });
            }
            j["report"] = to_json(r);
        } else if (drift_check == "fast-transience") {
            if (v.fast.outcome != Outcome::EvanescentEventually) throw UsageError("mixed matrix has no unstable support");
            const Vec& vv = v.fast.certificates.front().v;
            double t = fast_transience_threshold(m, vv);
            j = {{"check", drift_check}, {"kappa_threshold", threshold_json(t)}};
            double k = have_kappa ? drift_kappa : t;
            if (std::isfinite(k)) j["report"] = to_json(check_fast_transience(m, k, vv), drift_samples);
        } else if (drift_check == "slow-transience") {
            if (v.slow.outcome != Outcome::EvanescentEventually) throw UsageError("no common unstable support");
            auto vs = cert_vectors(v.slow);
            double t = slow_transience_threshold(m, v.slow.support, vs);
            j = {{"check", drift_check}, {"kappa_threshold", threshold_json(t)}};
            double k = have_kappa ? drift_kappa : t;
            if (k > 0.0) j["report"] = to_json(check_slow_transience(m, k, v.slow.support, vs), drift_samples);
        } else if (drift_check == "grouped") {
            if (m.n_env() != 4) throw UsageError("grouped check needs four environments");
            if (std::isnan(drift_eps)) drift_eps = m.q()(0, 2);
            auto ms = linearize_all(m);
            auto inc1 = increasing_direction(0.5 * (ms[0].matrix + ms[1].matrix));
            auto inc2 = increasing_direction(0.5 * (ms[2].matrix + ms[3].matrix));
            if (!inc1 || !inc2) throw UsageError("pair averages need increasing directions");
            SwitchedModel g = with_grouped_q(m, drift_eps);
            std::vector<double> ks;
            for (int e = -4; e <= 16; ++e) ks.push_back(std::ldexp(1.0, e));
            std::vector<double> es;
            for (int e = -20; e <= 0; ++e) es.push_back(std::ldexp(1.0, e));
            GroupedScan scan = grouped_scan(g, ks, es, inc1->v, inc2->v);
            Json pass = Json::array();
            for (auto [k, e] : scan.passing()) pass.push_back({k, e});
            j = {{"check", drift_check}, {"v1", inc1->v}, {"v2", inc2->v}, {"passing", pass}};
            if (have_kappa) j["report"] = to_json(check_grouped_transience(g, drift_kappa, drift_eps, inc1->v, inc2->v), drift_samples);
        } else if (drift_check == "foster") {
            if (drift_h.empty()) throw UsageError("foster check needs --fn");
            double k = have_kappa ? drift_kappa : 1.0;
            LyapunovFn h = parse_h(drift_h, m, k);
            j = {{"check", drift_check}, {"report", to_json(verify_foster_lyapunov(m, k, h, drift_box), drift_samples)}};
        } else {
            throw UsageError("unknown check: " + drift_check);
        }
        out << j.dump(2) << '\n';
    } else if (*simulate_cmd) {
        SwitchedModel m = sim_src.load();
        SimConfig c = sim_opts.config(m);
        c.kappa = sim_kappa;
        c.record = true;
        Trajectory t = simulate(m, c);
        std::ofstream file;
        std::ostream& os = open_out(sim_out, file, out);
        write_trajectory_csv(os, m, t);
        if (&os != &out)
            out << Json{{"termination", to_string(t.end)}, {"t_end", t.t_end}, {"n_events", t.n_events},
                        {"final_state", t.final_state}, {"final_env", t.final_env + 1}}
                       .dump(2)
                << '\n';
    } else if (*sweep) {
        SwitchedModel m = sweep_src.load();
        SimConfig c = sweep_opts.config(m);
        std::vector<double> grid;
        try {
            grid = parse_kappa_grid(sweep_grid);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        SweepResult r = sweep_kappa(m, grid, c, sweep_trials, sweep_threads);
        std::ofstream file;
        std::ostream& os = open_out(sweep_out, file, out);
        if (sweep_format == "csv") {
            write_sweep_csv(os, r);
        } else {
            Json rows = Json::array();
            for (const auto& row : r.rows)
                rows.push_back({{"kappa", row.kappa}, {"escape_fraction", threshold_json(row.stats.fraction)},
                                {"wilson_low", row.stats.wilson_low}, {"wilson_high", row.stats.wilson_high},
                                {"mean_final_l1", threshold_json(row.stats.mean_final_l1)},
                                {"n_traj", row.stats.n_traj}, {"n_event_capped", row.stats.n_event_capped}});
            os << rows.dump(2) << '\n';
        }
    } else if (*repro) {
        Params p;
        SwitchedModel m = [&] {
            try {
                p = resolve_params(repro_id, parse_params(repro_params));
                return build(repro_id, p);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }();
        SweepPlan plan = default_sweep(repro_id, p);
        if (!repro_grid.empty()) plan.kappas = parse_kappa_grid(repro_grid);
        if (repro_trials > 0) plan.n_traj = repro_trials;
        std::filesystem::create_directories(repro_out);
        const std::filesystem::path dir(repro_out);

        RegimeVerdict v = classify(m);
        Json verdict = to_json(v, m.species());
        verdict["id"] = gallery_entry(repro_id).id;
        Json pj = Json::object();
        for (const auto& [k, val] : p) pj[k] = val;
        verdict["params"] = pj;
        verdict["expected"] = expected_json(expected_verdict(repro_id, p), v);
        std::ofstream(dir / "verdict.json") << verdict.dump(2) << '\n';
        std::ofstream(dir / "model.json") << analysis_to_json(m).dump(2) << '\n';
        std::ofstream(dir / "drift.json") << regime_drift(m, v).dump(2) << '\n';

        SimConfig c;
        c.x0 = State(m.n_species(), 1);
        c.t_max = plan.t_max;
        c.escape_norm = plan.escape_norm;
        c.method = plan.method;
        c.max_events = plan.max_events;
        c.seed = repro_seed;
        SweepResult r = sweep_kappa(m, plan.kappas, c, plan.n_traj, repro_threads);
        std::ofstream csv(dir / "sweep.csv");
        write_sweep_csv(csv, r);
        out << "wrote " << (dir / "verdict.json").string() << ", model.json, drift.json, sweep.csv\n";
    } else if (*list) {
        if (list_format == "json") {
            Json arr = Json::array();
            for (const auto& e : gallery_entries()) {
                Json ps = Json::array();
                for (const auto& s : e.params)
                    ps.push_back({{"name", s.name}, {"default", threshold_json(s.default_value)}, {"domain", s.domain}});
                arr.push_back({{"id", e.id}, {"params", ps}, {"description", e.description}});
            }
            out << arr.dump(2) << '\n';
        } else {
            for (const auto& e : gallery_entries()) {
                out << e.id;
                for (const auto& s : e.params)
                    out << "  " << s.name << '=' << (std::isnan(s.default_value) ? std::string("auto") : format_double(s.default_value))
                        << " in " << s.domain;
                out << "\n    " << e.description << '\n';
            }
        }
    }
    return 0;
}

}  // namespace

std::vector<double> parse_kappa_grid(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
        double lo = to_double(parts[1]), hi = to_double(parts[2]);
        double cnt = to_double(parts[3]);
        if (cnt < 0 || std::floor(cnt) != cnt) throw std::invalid_argument("grid count must be a non-negative integer");
        if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("grid needs 0 < lo <= hi");
        std::size_t n = std::size_t(cnt);
        std::vector<double> g;
        for (std::size_t k = 0; k < n; ++k) {
            double t = n == 1 ? 0.0 : double(k) / double(n - 1);
            g.push_back(parts[0] == "log" ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                          : lo + t * (hi - lo));
        }
        if (n > 0) {
            g.front() = lo;
            g.back() = n == 1 ? lo : hi;
        }
        return g;
    }
    std::vector<double> g;
    for (const auto& part : split(text, ',')) {
        double k = to_double(part);
        if (!(k > 0.0)) throw std::invalid_argument("kappa values must be positive");
        g.push_back(k);
    }
    if (!std::is_sorted(g.begin(), g.end())) throw std::invalid_argument("kappa list must be ascending");
    return g;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run(args, out, err);
    } catch (const ModelError& e) {
        err << "model error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace switchcrn
