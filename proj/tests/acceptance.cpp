// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "switchcrn/classify.hpp"
#include "switchcrn/drift.hpp"
#include "switchcrn/gallery.hpp"
#include "switchcrn/metzler.hpp"
#include "switchcrn/mixing.hpp"
#include "switchcrn/sim.hpp"

using namespace switchcrn;

namespace {

struct Result {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

bool all_negative(const std::vector<Vec>& rows) {
    for (const Vec& r : rows)
        for (double x : r)
            if (!(x < 0.0)) return false;
    return true;
}

// 1. classifier conclusions on the gallery
void gallery_verdicts(Result& o) {
    auto t0 = Clock::now();
    auto check = [&](const std::string& id, const Params& p, bool fast, Conclusion want) {
        SwitchedModel m = build(id, p);
        Conclusion got = fast ? classify_fast(m) : classify_slow(m);
        bool ok = got.outcome == want.outcome && (want.outcome == Outcome::Unknown
                                                      ? got.reason == want.reason
                                                      : got.support == want.support);
        ok = ok && verify_conclusion(m, got, fast);
        o.require(ok, id + (fast ? " fast" : " slow"));
    };
    auto make = [](Outcome out, IndexSet s, UnknownReason r = UnknownReason::None) {
        Conclusion c;
        c.outcome = out;
        c.support = std::move(s);
        c.reason = r;
        return c;
    };
    using Outcome::ErgodicEventually;
    using Outcome::EvanescentEventually;
    for (double eps : {0.1, 0.5, 0.9}) {
        check("ex4.1", {{"eps", eps}}, false, make(EvanescentEventually, {0, 1}));
        check("ex4.1", {{"eps", eps}}, true, make(ErgodicEventually, {0, 1}));
    }
    check("ex4.2", {}, true, make(ErgodicEventually, {0, 1}));
    check("ex4.2", {}, false, make(Outcome::Unknown, {}, UnknownReason::NotMonomolecular));
    check("ex4.3", {{"eps", 0.05}}, false, make(ErgodicEventually, {0, 1}));
    check("ex4.3", {{"eps", 0.05}}, true, make(EvanescentEventually, {0, 1}));
    check("ex4.5", {}, true, make(EvanescentEventually, {1}));
    check("ex4.5", {}, false, make(EvanescentEventually, {1}));
    check("ex_disjoint", {}, false, make(Outcome::Unknown, {}, UnknownReason::NoCommonSupport));
    check("ex4.7", {}, true, make(ErgodicEventually, {0}));
    check("ex4.7", {}, false, make(Outcome::Unknown, {}, UnknownReason::MixedStability));
    check("ex6.2", {}, false, make(Outcome::Unknown, {}, UnknownReason::NoCommonSupport));
    const double secs = seconds_since(t0);
    o.require(secs < 1.0, "runtime under 1 s");
    o.detail << " time=" << secs << "s";
}

// 2. spectral arithmetic
void spectral(Result& o) {
    for (double eps : {0.1, 0.25, 0.5, 0.9}) {
        Matrix m1 = linearize(build("ex4.1", {{"eps", eps}}).environment(0)).matrix;
        double want = -2.0 + 2.0 * std::sqrt(1.0 + eps - eps * eps);
        o.require(std::fabs(spectral_abscissa(m1) - want) <= 1e-9, "ex4.1 abscissa");
    }
    Matrix mixed = mix(build("ex4.3", {{"eps", 0.05}})).mixed_matrix;
    PerronPair pp = perron_pair(mixed);
    o.require(std::fabs(spectral_abscissa(mixed) - 1.0) <= 1e-9, "ex4.3 abscissa 1");
    o.require(std::fabs(pp.left[0] - pp.left[1]) <= 1e-9, "Perron direction parallel to (1,1)");
}

// 3. catalyst mixing
void catalyst(Result& o) {
    for (int n = 1; n <= 10; ++n) {
        const double alpha = 0.75, beta = 1.25;
        SwitchedModel m = build("ex4.4", {{"n", double(n)}, {"alpha", alpha}, {"beta", beta}});
        MixData md = mix(m);
        double binom = 1.0;
        for (int i = 0; i <= n; ++i) {
            if (i > 0) binom = binom * double(n - i + 1) / double(i);
            o.require(std::fabs(md.w[i] - std::ldexp(binom, -n)) <= 1e-12, "binomial weights");
        }
        o.require(std::fabs(md.mixed_matrix(0, 0) - (double(n) * alpha / 2.0 - beta)) <= 1e-12, "mixed scalar n alpha/2 - beta");
        // verdict flips at n alpha = 2 beta
        for (double b : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0}) {
            const double s = double(n) * 1.0 - 2.0 * b;
            Conclusion c = classify_fast(build("ex4.4", {{"n", double(n)}, {"alpha", 1.0}, {"beta", b}}));
            auto want = s > 0 ? Outcome::EvanescentEventually
                              : (s < 0 ? Outcome::ErgodicEventually : Outcome::Unknown);
            o.require(c.outcome == want, "verdict flip at n alpha = 2 beta");
        }
    }
}

// 4. z identity
void z_identity(Result& o) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> rate(0.1, 3.0), ent(-2.0, 2.0), pos(0.1, 2.0);
    auto metzler = [&](std::size_t d) {
        Matrix m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m(i, j) = i == j ? ent(rng) : std::fabs(ent(rng));
        return m;
    };
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 6, d = 1 + trial % 3;
        Matrix q(n, n);
        for (std::size_t i = 0; i < n && n > 1; ++i) q(i, (i + 1) % n) = rate(rng);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && rng() % 3 == 0) q(i, j) += rate(rng);
        q = complete_diagonal(q);
        std::vector<Matrix> ms;
        for (std::size_t i = 0; i < n; ++i) ms.push_back(metzler(d));
        Vec v(d);
        for (auto& x : v) x = pos(rng);
        IndexSet all;
        for (std::size_t k = 0; k < d; ++k) all.push_back(k);
        Vec w = stationary_distribution(q);
        ZVectors zv = solve_z(ms, q, w, v, all);
        worst = std::max(worst, z_identity_residual(zv, ms, q, w, v));
    }
    o.require(worst <= 1e-10, "identity residual");
    // two environments with total switching rate one
    double worst2 = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double a = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        Matrix q{{-a, a}, {1.0 - a, -(1.0 - a)}};
        std::vector<Matrix> ms{metzler(2), metzler(2)};
        Vec v{pos(rng), pos(rng)};
        Vec w = stationary_distribution(q);
        ZVectors zv = solve_z(ms, q, w, v, IndexSet{0, 1});
        Vec g1 = row_times(v, ms[0]), g2 = row_times(v, ms[1]);
        for (std::size_t m = 0; m < 2; ++m) {
            double lhs = 2.0 * w[0] * w[1] * (zv.z[m][1] - zv.z[m][0]);
            worst2 = std::max(worst2, std::fabs(lhs - (w[1] * g2[m] - w[0] * g1[m])));
        }
    }
    o.require(worst2 <= 1e-10, "two-environment closed form");
    o.detail << " residual=" << worst << " closed_form=" << worst2;
}

// 5. exact generator formulas
void generator_formulas(Result& o) {
    SwitchedModel m = build("ex4.6");
    double worst = 0.0;
    for (double kappa : {0.1, 1.0, 10.0}) {
        const double s = 1.0 + 2.0 / kappa;
        LyapunovFn h = LyapunovFn::linear({{1.0, s}, {s, 1.0}});
        for (std::int64_t a = 0; a <= 50; ++a)
            for (std::int64_t b = 0; b <= 50; ++b) {
                double got = generator_apply(m, kappa, h, {a, b}, 0);
                double want = -4.0 / kappa * double(a) - double(b) + 1.0;
                worst = std::max(worst, std::fabs(got - want) / std::max(1.0, std::fabs(want)));
            }
    }
    o.require(worst <= 1e-12, "disjoint-species closed form");
    o.detail << " disjoint_rel_err=" << worst;

    SwitchedModel m62 = build("ex6.2");
    LyapunovFn h = LyapunovFn::reciprocal({{2, 1, 0}, {0, 1, 2}});
    for (double kappa : {0.1, 1.0, 10.0}) {
        std::int64_t hit = -1;
        for (std::int64_t x1 = 1; x1 <= 100000 && hit < 0; ++x1)
            if (generator_apply(m62, kappa, h, {x1, 0, 0}, 0) < 0.0) hit = x1;
        o.require(hit > 0, "negative generator for large x1");
        o.detail << " neg_x1(kappa=" << kappa << ")=" << hit;
    }
}

// 6. Metzler property suite
void metzler_suite(Result& o) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::bernoulli_distribution zero(0.3);
    int mismatches = 0, bad_certs = 0, dominance = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 1 + trial % 5;
        Matrix m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m(i, j) = i == j ? u(rng) : (zero(rng) ? 0.0 : std::fabs(u(rng)));
        const double a = spectral_abscissa(m);
        auto dec = decreasing_direction(m);
        auto uns = unstable_support_vector(m);
        if (std::fabs(a) > 1e-6) {
            if (dec.has_value() != (a < 0)) ++mismatches;
            if (uns.has_value() != (a > 0)) ++mismatches;
        }
        auto inc = increasing_direction(m);
        for (const auto* c : {&dec, &uns, &inc}) {
            if (!c->has_value()) continue;
            if (!((*c)->margin > 0.0) || !verify_certificate(**c, m)) ++bad_certs;
        }
        for (unsigned mask = 1; mask + 1 < (1u << d); ++mask) {
            IndexSet idx;
            for (std::size_t k = 0; k < d; ++k)
                if (mask & (1u << k)) idx.push_back(k);
            if (spectral_abscissa(m.submatrix(idx)) > a + 1e-9) ++dominance;
        }
    }
    const double secs = seconds_since(t0);
    o.require(mismatches == 0, "certificate presence matches abscissa sign");
    o.require(bad_certs == 0, "certificates re-verify");
    o.require(dominance == 0, "principal submatrix dominance");
    o.require(secs < 30.0, "runtime under 30 s");
    o.detail << " time=" << secs << "s";
}

// 7. drift thresholds
void drift_thresholds(Result& o) {
    {
        SwitchedModel m = build("ex4.1", {{"eps", 0.25}});
        Conclusion fast = classify_fast(m);
        ErgodicBuild b = build_fast_ergodic(m, fast.certificates.front());
        const double k = b.kappa_threshold;
        const Vec& v = fast.certificates.front().v;
        ZVectors z = solve_z(m, stationary_distribution(m.q()), v, IndexSet{0, 1});
        o.require(std::isfinite(k), "fast ergodic threshold finite");
        o.require(all_negative(fast_ergodic_leading(m, v, z, k)), "fast ergodic holds at threshold");
        o.require(!all_negative(fast_ergodic_leading(m, v, z, k / 1024.0)), "fast ergodic fails 2^10 below");
        o.detail << " ex4.1 fast_ergodic=" << k;

        Conclusion slow = classify_slow(m);
        std::vector<Vec> vs{slow.certificates[0].v, slow.certificates[1].v};
        const double ks = slow_transience_threshold(m, slow.support, vs);
        o.require(ks > 0.0 && std::isfinite(ks), "slow transience threshold finite");
        o.require(check_slow_transience(m, ks, slow.support, vs).algebraic_pass, "slow transience holds");
        o.require(!check_slow_transience(m, 1024.0 * ks, slow.support, vs).algebraic_pass,
                  "slow transience fails 2^10 above");
        o.detail << " slow_transience=" << ks;
    }
    {
        SwitchedModel m = build("ex4.3", {{"eps", 0.05}});
        Conclusion slow = classify_slow(m);
        ErgodicBuild b = build_slow_ergodic(m, slow.certificates);
        const double k = b.kappa_threshold;
        std::vector<Vec> vs{slow.certificates[0].v, slow.certificates[1].v};
        o.require(k > 0.0 && std::isfinite(k), "slow ergodic threshold finite");
        o.require(all_negative(slow_ergodic_leading(m, vs, k)), "slow ergodic holds at threshold");
        o.require(!all_negative(slow_ergodic_leading(m, vs, 1024.0 * k)), "slow ergodic fails 2^10 above");
        o.detail << " ex4.3 slow_ergodic=" << k;

        Conclusion fast = classify_fast(m);
        const Vec& v = fast.certificates.front().v;
        const double kf = fast_transience_threshold(m, v);
        o.require(std::isfinite(kf), "fast transience threshold finite");
        o.require(check_fast_transience(m, kf, v).algebraic_pass, "fast transience holds");
        o.require(!check_fast_transience(m, kf / 1024.0, v).algebraic_pass, "fast transience fails 2^10 below");
        o.detail << " fast_transience=" << kf;
    }
}

// 8. empirical phase transitions
void phase_transitions(Result& o) {
    auto t0 = Clock::now();
    const std::size_t threads = worker_count();
    auto fractions = [&](const SwitchedModel& m, const std::vector<double>& ks, const SweepPlan& plan) {
        SimConfig c;
        c.x0 = State(m.n_species(), 1);
        c.t_max = plan.t_max;
        c.escape_norm = plan.escape_norm;
        c.max_events = plan.max_events;
        c.method = plan.method;
        c.seed = 2024;
        SweepResult r = sweep_kappa(m, ks, c, plan.n_traj, threads);
        std::vector<double> f;
        for (const auto& row : r.rows) f.push_back(row.stats.fraction);
        return f;
    };
    auto show = [&](const std::string& name, const std::vector<double>& f) {
        o.detail << ' ' << name << "=[";
        for (std::size_t k = 0; k < f.size(); ++k) o.detail << (k ? "," : "") << f[k];
        o.detail << ']';
    };

    SweepPlan basic;
    basic.method = SimMethod::Auto;
    auto f43 = fractions(build("ex4.3", {{"eps", 0.05}}), {1e-2, 1e3}, basic);
    show("ex4.3", f43);
    o.require(f43[0] <= 0.05 && f43[1] >= 0.95, "ex4.3 low then high");
    auto f41 = fractions(build("ex4.1", {{"eps", 0.5}}), {1e-2, 1e3}, basic);
    show("ex4.1", f41);
    o.require(f41[0] >= 0.95 && f41[1] <= 0.05, "ex4.1 high then low");

    SweepPlan p54 = default_sweep("ex5.4");
    auto f54 = fractions(build("ex5.4"), p54.kappas, p54);
    show("ex5.4", f54);
    const double interior = *std::max_element(f54.begin() + 1, f54.end() - 1);
    o.require(f54.front() <= 0.1 && f54.back() <= 0.1 && interior >= 0.5, "ex5.4 low-high-low");

    Params p56{{"N", 2}, {"window_low", 2.0}, {"window_high", 400.0}};
    SweepPlan plan56 = default_sweep("ex5.6", p56);
    auto f56 = fractions(build("ex5.6", p56), plan56.kappas, plan56);
    show("ex5.6", f56);
    int windows = 0;
    bool inside = false;
    for (std::size_t k = 1; k + 1 < f56.size(); ++k) {
        bool high = f56[k] >= 0.5;
        if (high && !inside) ++windows;
        inside = high;
    }
    o.require(f56.front() <= 0.1 && f56.back() <= 0.1 && windows >= 2, "ex5.6 two windows");
    const double secs = seconds_since(t0);
    o.require(secs <= 600.0, "runtime under 10 minutes");
    o.detail << " windows=" << windows << " time=" << secs << "s";
}

// 9. grouped certificate
void grouped(Result& o) {
    SwitchedModel m = build("ex5.4");
    auto lin = linearize_all(m);
    Matrix a1 = 0.5 * (lin[0].matrix + lin[1].matrix);
    Matrix a2 = 0.5 * (lin[2].matrix + lin[3].matrix);
    const double det1 = a1(0, 0) * a1(1, 1) - a1(0, 1) * a1(1, 0);
    const double det2 = a2(0, 0) * a2(1, 1) - a2(0, 1) * a2(1, 0);
    o.require(det1 < 0.0 && det2 < 0.0, "pair averages have negative determinant");
    auto i1 = increasing_direction(a1), i2 = increasing_direction(a2);
    o.require(i1.has_value() && i2.has_value(), "pair averages have increasing directions");
    if (!i1 || !i2) return;
    std::vector<double> ks, es;
    for (int e = 0; e <= 20; ++e) {
        ks.push_back(std::ldexp(1.0, e));
        es.push_back(std::ldexp(1.0, -e));
    }
    auto passing = grouped_scan(m, ks, es, i1->v, i2->v).passing();
    o.require(!passing.empty(), "nonempty passing region");
    o.detail << " passing=" << passing.size();
    if (!passing.empty()) o.detail << " first=(" << passing.front().first << "," << passing.front().second << ")";

    auto targets = grouped_limit_targets(m, i1->v, i2->v);
    double prev = INFINITY;
    bool shrinking = true;
    for (int e : {10, 16, 22, 28}) {
        const double kappa = std::ldexp(1.0, e), eps = std::ldexp(1.0, -2 * e);
        DriftReport r = check_grouped_transience(with_grouped_q(m, eps), kappa, eps, i1->v, i2->v);
        double gap = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t s = 0; s < 2; ++s) gap = std::max(gap, std::fabs(r.leading[i][s] - targets[i][s]));
        shrinking = shrinking && gap < prev;
        prev = gap;
    }
    o.require(shrinking && prev < 1e-6, "leading terms converge to the pair-averaged targets");
    o.detail << " det=(" << det1 << "," << det2 << ") limit_gap=" << prev;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Result&)>>> criteria = {
        {"gallery verdict table", gallery_verdicts},
        {"spectral arithmetic", spectral},
        {"catalyst mixing", catalyst},
        {"z-vector identity", z_identity},
        {"exact generator formulas", generator_formulas},
        {"Metzler equivalence suite", metzler_suite},
        {"drift thresholds", drift_thresholds},
        {"empirical phase transitions", phase_transitions},
        {"grouped certificate", grouped},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Result o;
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        if (!o.pass) ++failed;
        std::printf("criterion %zu %s: %s%s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
