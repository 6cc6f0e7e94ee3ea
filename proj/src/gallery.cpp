#include "switchcrn/gallery.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "switchcrn/drift.hpp"
#include "switchcrn/metzler.hpp"

namespace switchcrn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// defaults picked from the drift and simulation scans
constexpr double kWindowEps = 0.001;
constexpr double kBasicEps = 0.05;

Complex mol(std::size_t s, std::uint32_t count = 1) {
    Complex c;
    c.counts[s] = count;
    return c;
}

Complex zero() { return Complex{}; }

Complex plus(Complex a, const Complex& b) {
    for (const auto& [s, c] : b.counts) a.counts[s] += c;
    return a;
}

void rx(CrnSpec& e, Complex src, Complex prod, double rate) {
    e.reactions.push_back(Reaction{std::move(src), std::move(prod), rate});
}

Matrix two_env_q() { return Matrix{{-1.0, 1.0}, {1.0, -1.0}}; }

// Two-species network, evanescent alone, ergodic under fast averaging. `mirror` picks the second environment.
void add_evanescent_pair(CrnSpec& e, std::size_t a, std::size_t b, double eps, bool mirror, double scale) {
    if (mirror) std::swap(a, b);
    rx(e, zero(), mol(a), scale);
    rx(e, zero(), mol(b), scale);
    rx(e, mol(a), zero(), (4.0 - eps) * scale);
    rx(e, mol(a), mol(b, 2), eps * scale);
    rx(e, mol(b), zero(), (1.0 + eps) * scale);
    rx(e, mol(b), mol(b, 2), 2.0 * scale);
    rx(e, mol(b), mol(a, 2), (1.0 - eps) * scale);
}

// Two-species network, ergodic alone for small eps, unstable under fast averaging.
void add_ergodic_pair(CrnSpec& e, std::size_t a, std::size_t b, double eps, bool mirror, double scale) {
    double lo = mirror ? eps : 1.0 - eps;
    double hi = mirror ? 1.0 - eps : eps;
    rx(e, mol(a), zero(), lo * scale);
    rx(e, zero(), mol(a), scale);
    rx(e, mol(a), mol(b, 4), hi * scale);
    rx(e, mol(b), zero(), hi * scale);
    rx(e, zero(), mol(b), scale);
    rx(e, mol(b), mol(a, 4), lo * scale);
}

// One of the four networks whose pairwise averages are unstable while each network and the
// full average are stable. `k` in 0..3.
void add_window_block(CrnSpec& e, std::size_t a, std::size_t b, int k, double scale) {
    const double a_death = k < 2 ? 15.0 : 1.0;
    const double b_death = k < 2 ? 1.0 : 15.0;
    const double a_makes_b = (k % 2 == 0) ? 2.0 : 6.0;
    const double b_makes_a = (k % 2 == 0) ? 6.0 : 2.0;
    rx(e, zero(), mol(a), scale);
    rx(e, zero(), mol(b), scale);
    rx(e, mol(a), zero(), a_death * scale);
    rx(e, mol(a), plus(mol(a), mol(b)), a_makes_b * scale);
    rx(e, mol(b), zero(), b_death * scale);
    rx(e, mol(b), plus(mol(a), mol(b)), b_makes_a * scale);
}

void add_birth_death(CrnSpec& e, std::size_t s) {
    rx(e, zero(), mol(s), 1.0);
    rx(e, mol(s), zero(), 1.0);
}

std::vector<CrnSpec> blank_envs(std::size_t n, std::size_t d) {
    std::vector<CrnSpec> envs(n);
    for (auto& e : envs) e.n_species = d;
    return envs;
}

SwitchedModel build_evanescent_pair(double eps) {
    auto envs = blank_envs(2, 2);
    add_evanescent_pair(envs[0], 0, 1, eps, false, 1.0);
    add_evanescent_pair(envs[1], 0, 1, eps, true, 1.0);
    return SwitchedModel({"S1", "S2"}, envs, two_env_q());
}

SwitchedModel build_ergodic_pair(double eps) {
    auto envs = blank_envs(2, 2);
    add_ergodic_pair(envs[0], 0, 1, eps, false, 1.0);
    add_ergodic_pair(envs[1], 0, 1, eps, true, 1.0);
    return SwitchedModel({"S1", "S2"}, envs, two_env_q());
}

SwitchedModel build_window(double eps, double scale = 1.0) {
    auto envs = blank_envs(4, 2);
    for (int k = 0; k < 4; ++k) add_window_block(envs[k], 0, 1, k, scale);
    return SwitchedModel({"S1", "S2"}, envs, grouped_q(eps));
}

// Four-environment versions of the two-environment pairs: environments {1,2} use the first
// network and {3,4} the second, so the pair switches at rate 2 kappa eps.
SwitchedModel build_grouped_pair(bool evanescent, double pair_eps, double eps) {
    auto envs = blank_envs(4, 2);
    for (int k = 0; k < 4; ++k) {
        if (evanescent) add_evanescent_pair(envs[k], 0, 1, pair_eps, k >= 2, 1.0);
        else add_ergodic_pair(envs[k], 0, 1, pair_eps, k >= 2, 1.0);
    }
    return SwitchedModel({"S1", "S2"}, envs, grouped_q(eps));
}

double fast_threshold(const SwitchedModel& m) {
    Conclusion c = classify_fast(m);
    if (c.outcome != Outcome::ErgodicEventually) throw std::logic_error("block is not ergodic under fast switching");
    return build_fast_ergodic(m, c.certificates.front()).kappa_threshold;
}

double slow_threshold(const SwitchedModel& m) {
    Conclusion c = classify_slow(m);
    if (c.outcome != Outcome::ErgodicEventually) throw std::logic_error("block is not ergodic under slow switching");
    return build_slow_ergodic(m, c.certificates).kappa_threshold;
}

double auto_trans_beta(double eps) {
    // ergodic overlap needs the evanescent pair's fast threshold below beta times the
    // ergodic pair's slow threshold; doubled as slack
    return 2.0 * fast_threshold(build_evanescent_pair(eps)) / slow_threshold(build_ergodic_pair(eps));
}

bool flag(double x) { return x != 0.0; }

std::vector<GalleryEntry> make_entries() {
    const std::string eps01 = "(0, 1)";
    return {
        {"ex4.1", {{"eps", 0.5, eps01}},
         "two networks, each evanescent; evanescent for slow switching, ergodic for fast"},
        {"ex4.2", {{"eps", 0.5, eps01}},
         "ex4.1 plus cancelling bimolecular reactions; ergodic for fast switching"},
        {"ex4.3", {{"eps", kBasicEps, eps01}},
         "two ergodic networks; ergodic for slow switching when eps is small, evanescent for fast"},
        {"fig1", {},
         "ex4.3 with eps = 0.01"},
        {"ex4.4", {{"n", 4, "integer >= 1"}, {"alpha", 1, "(0, inf)"}, {"beta", 1, "(0, inf)"}, {"gamma", 1, "(0, inf)"}},
         "catalyst X <-> X' viewed as n+1 environments for Y; fast verdict flips at n alpha = 2 beta"},
        {"ex4.5", {},
         "0 <-> X, Y -> 2Y in one environment; evanescent exactly when Y > 0"},
        {"ex_trans", {},
         "0 -> S -> 2S <- 3S -> 4S; unstable matrix yet positive recurrent"},
        {"ex4.6", {},
         "two networks with disjoint unstable species; positive recurrent for every kappa"},
        {"ex4.7", {},
         "one stable and one unstable single-species network; ergodic for every kappa"},
        {"ex5.1", {{"eps", kBasicEps, "(0, (2 - sqrt 3)/4)"}, {"beta", kNaN, "(0, inf); omitted: chosen from drift thresholds"}},
         "ex4.1 and a beta-scaled ex4.3 side by side; evanescent at both ends, ergodic in between"},
        {"ex5.4", {{"eps", kWindowEps, eps01}},
         "four networks with grouped switching; ergodic at both ends, evanescent in between"},
        {"ex5.6", {{"N", 2, "integer >= 1"}, {"eps", kWindowEps, eps01},
                   {"small_evanescent", 0, "0 or 1"}, {"large_evanescent", 0, "0 or 1"},
                   {"eps_low", 0.5, eps01}, {"eps_high", kBasicEps, "(0, (2 - sqrt 3)/4)"},
                   {"window_low", kNaN, "(0, inf); omitted: slow ergodic threshold of ex5.4"},
                   {"window_high", kNaN, "(window_low, inf); omitted: fast ergodic threshold of ex5.4"}},
         "block-diagonal composite with N scaled copies of ex5.4; at least N ergodic-evanescent-ergodic windows"},
        {"ex6.2", {{"alpha", 1, "(0, inf)"}},
         "three species, unstable networks whose unstable supports overlap only partly"},
    };
}

double param(const Params& p, const std::string& name) { return p.at(name); }

void check_open_unit(const std::string& id, const std::string& name, double x, double hi = 1.0) {
    if (!(x > 0.0 && x < hi))
        throw std::invalid_argument(id + ": parameter " + name + " out of range");
}

void check_positive(const std::string& id, const std::string& name, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(id + ": parameter " + name + " must be positive");
}

void check_integer(const std::string& id, const std::string& name, double x, double lo) {
    if (!(x >= lo) || std::floor(x) != x || x > 1e6)
        throw std::invalid_argument(id + ": parameter " + name + " must be an integer >= " + format_double(lo));
}

void check_flag(const std::string& id, const std::string& name, double x) {
    if (x != 0.0 && x != 1.0) throw std::invalid_argument(id + ": parameter " + name + " must be 0 or 1");
}

const double kBasicEpsMax = (2.0 - std::sqrt(3.0)) / 4.0;

std::string canonical(const std::string& id) { return id == "ex_disjoint" ? "ex4.6" : id; }

IndexSet range(std::size_t lo, std::size_t hi) {
    IndexSet s;
    for (std::size_t k = lo; k < hi; ++k) s.push_back(k);
    return s;
}

ExpectedConclusion ergodic(std::size_t d) { return {Outcome::ErgodicEventually, UnknownReason::None, full_set(d)}; }
ExpectedConclusion evanescent(IndexSet s) { return {Outcome::EvanescentEventually, UnknownReason::None, std::move(s)}; }
ExpectedConclusion unknown(UnknownReason r) { return {Outcome::Unknown, r, {}}; }

// sign-based verdict with the classifier's critical band
ExpectedConclusion by_sign(double s, std::size_t d, IndexSet unstable) {
    if (s < -kStabilityTol) return ergodic(d);
    if (s > kStabilityTol) return evanescent(std::move(unstable));
    return unknown(UnknownReason::NearCritical);
}

}  // namespace

const std::vector<GalleryEntry>& gallery_entries() {
    static const std::vector<GalleryEntry> entries = make_entries();
    return entries;
}

const GalleryEntry& gallery_entry(const std::string& id) {
    const std::string key = canonical(id);
    for (const GalleryEntry& e : gallery_entries())
        if (e.id == key) return e;
    throw std::invalid_argument("unknown gallery id: " + id);
}

Params resolve_params(const std::string& id, const Params& params) {
    const GalleryEntry& entry = gallery_entry(id);
    Params p;
    for (const auto& [name, value] : params) {
        bool known = false;
        for (const ParamSpec& ps : entry.params) known = known || ps.name == name;
        if (!known) throw std::invalid_argument(entry.id + ": unknown parameter " + name);
        p[name] = value;
    }
    for (const ParamSpec& ps : entry.params)
        if (!p.count(ps.name)) p[ps.name] = ps.default_value;

    const std::string& k = entry.id;
    if (k == "ex4.1" || k == "ex4.2" || k == "ex4.3" || k == "ex5.4") check_open_unit(k, "eps", p["eps"]);
    if (k == "ex4.4") {
        check_integer(k, "n", p["n"], 1);
        for (const char* name : {"alpha", "beta", "gamma"}) check_positive(k, name, p[name]);
    }
    if (k == "ex5.1") {
        check_open_unit(k, "eps", p["eps"], kBasicEpsMax);
        if (std::isnan(p["beta"])) p["beta"] = auto_trans_beta(p["eps"]);
        check_positive(k, "beta", p["beta"]);
    }
    if (k == "ex5.6") {
        check_integer(k, "N", p["N"], 1);
        if (p["N"] > 8) throw std::invalid_argument("ex5.6: N above 8 is not supported");
        check_open_unit(k, "eps", p["eps"]);
        check_flag(k, "small_evanescent", p["small_evanescent"]);
        check_flag(k, "large_evanescent", p["large_evanescent"]);
        check_open_unit(k, "eps_low", p["eps_low"]);
        check_open_unit(k, "eps_high", p["eps_high"], kBasicEpsMax);
        if (std::isnan(p["window_low"]) || std::isnan(p["window_high"])) {
            SwitchedModel window = build_window(p["eps"]);
            if (std::isnan(p["window_low"])) p["window_low"] = slow_threshold(window);
            if (std::isnan(p["window_high"])) p["window_high"] = fast_threshold(window);
        }
        check_positive(k, "window_low", p["window_low"]);
        if (!(p["window_high"] > p["window_low"]))
            throw std::invalid_argument("ex5.6: window_high must exceed window_low");
    }
    if (k == "ex6.2") check_positive(k, "alpha", p["alpha"]);
    return p;
}

CompositeDesign composite_design(const Params& params) {
    Params p = resolve_params("ex5.6", params);
    const std::size_t n_windows = std::size_t(p["N"]);
    const double eps = p["eps"];
    CompositeDesign des;

    // block 0
    if (flag(p["small_evanescent"])) {
        des.kappa_max.push_back(0.0);
        des.kappa_min.push_back(fast_threshold(build_grouped_pair(true, p["eps_low"], eps)));
    } else {
        des.kappa_max.push_back(kInf);
        des.kappa_min.push_back(0.0);
    }
    // windows
    const double wmax = p["window_low"];
    const double wmin = p["window_high"];
    for (std::size_t j = 0; j < n_windows; ++j) {
        des.kappa_max.push_back(wmax);
        des.kappa_min.push_back(wmin);
    }
    // block N+1
    if (flag(p["large_evanescent"])) {
        des.kappa_max.push_back(slow_threshold(build_grouped_pair(false, p["eps_high"], eps)));
        des.kappa_min.push_back(kInf);
    } else {
        des.kappa_max.push_back(kInf);
        des.kappa_min.push_back(0.0);
    }

    // beta_{j-1} kappa_min^{j-1} < beta_j kappa_max^j, doubled once for slack
    des.betas.push_back(1.0);
    for (std::size_t j = 1; j < des.kappa_max.size(); ++j) {
        double prev = des.betas[j - 1] * des.kappa_min[j - 1];
        double beta = 1.0;
        if (prev > 0.0 && std::isfinite(des.kappa_max[j])) beta = 2.0 * prev / des.kappa_max[j];
        des.betas.push_back(beta);
    }

    std::size_t next = 0;
    des.block_species.push_back(range(next, next + (flag(p["small_evanescent"]) ? 2 : 1)));
    next = des.block_species.back().back() + 1;
    for (std::size_t j = 0; j < n_windows; ++j) {
        des.block_species.push_back(range(next, next + 2));
        next += 2;
    }
    des.block_species.push_back(range(next, next + (flag(p["large_evanescent"]) ? 2 : 1)));
    return des;
}

namespace {

SwitchedModel build_composite(const Params& p) {
    CompositeDesign des = composite_design(p);
    const std::size_t n_windows = std::size_t(param(p, "N"));
    const bool small_ev = flag(param(p, "small_evanescent"));
    const bool large_ev = flag(param(p, "large_evanescent"));
    std::vector<std::string> names;
    if (small_ev) names.insert(names.end(), {"L1", "L2"});
    else names.push_back("L0");
    for (std::size_t j = 1; j <= n_windows; ++j) {
        names.push_back("W" + std::to_string(j) + "a");
        names.push_back("W" + std::to_string(j) + "b");
    }
    if (large_ev) names.insert(names.end(), {"H1", "H2"});
    else names.push_back("H0");

    auto envs = blank_envs(4, names.size());
    for (int k = 0; k < 4; ++k) {
        const IndexSet& lo = des.block_species.front();
        if (small_ev) add_evanescent_pair(envs[k], lo[0], lo[1], param(p, "eps_low"), k >= 2, des.betas[0]);
        else add_birth_death(envs[k], lo[0]);
        for (std::size_t j = 1; j <= n_windows; ++j) {
            const IndexSet& s = des.block_species[j];
            add_window_block(envs[k], s[0], s[1], k, des.betas[j]);
        }
        const IndexSet& hi = des.block_species.back();
        if (large_ev) add_ergodic_pair(envs[k], hi[0], hi[1], param(p, "eps_high"), k >= 2, des.betas.back());
        else add_birth_death(envs[k], hi[0]);
    }
    return SwitchedModel(names, envs, grouped_q(param(p, "eps")));
}

}  // namespace

SwitchedModel build(const std::string& id, const Params& params) {
    const Params p = resolve_params(id, params);
    const std::string k = canonical(id);
    if (k == "ex4.1") return build_evanescent_pair(param(p, "eps"));
    if (k == "ex4.2") {
        SwitchedModel base = build_evanescent_pair(param(p, "eps"));
        auto envs = base.environments();
        for (std::size_t s = 0; s < 2; ++s) {
            rx(envs[s], mol(s, 2), mol(s, 1), 1.0);
            rx(envs[s], mol(s, 2), mol(s, 3), 1.0);
        }
        return SwitchedModel(base.species(), envs, base.q());
    }
    if (k == "ex4.3") return build_ergodic_pair(param(p, "eps"));
    if (k == "fig1") return build_ergodic_pair(0.01);
    if (k == "ex4.4") {
        const std::size_t n = std::size_t(param(p, "n"));
        auto envs = blank_envs(n + 1, 1);
        Matrix q(n + 1, n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            rx(envs[i], mol(0), zero(), param(p, "beta"));
            rx(envs[i], zero(), mol(0), param(p, "gamma"));
            if (i > 0) rx(envs[i], mol(0), mol(0, 2), double(i) * param(p, "alpha"));
            if (i < n) q(i, i + 1) = double(n - i);
            if (i > 0) q(i, i - 1) = double(i);
        }
        return SwitchedModel({"Y"}, envs, complete_diagonal(q));
    }
    if (k == "ex4.5") {
        auto envs = blank_envs(1, 2);
        rx(envs[0], zero(), mol(0), 1.0);
        rx(envs[0], mol(0), zero(), 1.0);
        rx(envs[0], mol(1), mol(1, 2), 1.0);
        return SwitchedModel({"X", "Y"}, envs, Matrix(1, 1));
    }
    if (k == "ex_trans") {
        auto envs = blank_envs(1, 1);
        rx(envs[0], zero(), mol(0), 1.0);
        rx(envs[0], mol(0), mol(0, 2), 1.0);
        rx(envs[0], mol(0, 3), mol(0, 2), 1.0);
        rx(envs[0], mol(0, 3), mol(0, 4), 1.0);
        return SwitchedModel({"S"}, envs, Matrix(1, 1));
    }
    if (k == "ex4.6") {
        auto envs = blank_envs(2, 2);
        rx(envs[0], zero(), mol(1), 1.0);
        rx(envs[0], mol(1), mol(1, 2), 1.0);
        rx(envs[0], mol(0), zero(), 2.0);
        rx(envs[1], mol(1), zero(), 2.0);
        rx(envs[1], zero(), mol(0), 1.0);
        rx(envs[1], mol(0), mol(0, 2), 1.0);
        return SwitchedModel({"A", "B"}, envs, two_env_q());
    }
    if (k == "ex4.7") {
        auto envs = blank_envs(2, 1);
        rx(envs[0], zero(), mol(0), 1.0);
        rx(envs[0], mol(0), zero(), 1.0);
        rx(envs[0], mol(0), mol(0, 2), 2.0);
        rx(envs[1], zero(), mol(0), 1.0);
        rx(envs[1], mol(0), zero(), 3.0);
        rx(envs[1], mol(0), mol(0, 2), 1.0);
        return SwitchedModel({"S"}, envs, two_env_q());
    }
    if (k == "ex5.1") {
        auto envs = blank_envs(2, 4);
        for (int e = 0; e < 2; ++e) {
            add_evanescent_pair(envs[e], 0, 1, param(p, "eps"), e == 1, 1.0);
            add_ergodic_pair(envs[e], 2, 3, param(p, "eps"), e == 1, param(p, "beta"));
        }
        return SwitchedModel({"S1", "S2", "S3", "S4"}, envs, two_env_q());
    }
    if (k == "ex5.4") return build_window(param(p, "eps"));
    if (k == "ex5.6") return build_composite(p);
    if (k == "ex6.2") {
        const double alpha = param(p, "alpha");
        auto envs = blank_envs(2, 3);
        rx(envs[0], mol(0), plus(mol(0, 4), mol(1)), 1.0);
        rx(envs[0], mol(1), mol(0), 1.0);
        rx(envs[0], mol(2), zero(), alpha);
        rx(envs[0], zero(), mol(2), 1.0);
        rx(envs[1], mol(0), zero(), alpha);
        rx(envs[1], zero(), mol(0), 1.0);
        rx(envs[1], mol(1), mol(2), 1.0);
        rx(envs[1], mol(2), plus(mol(2, 4), mol(1)), 1.0);
        return SwitchedModel({"S1", "S2", "S3"}, envs, two_env_q());
    }
    throw std::invalid_argument("unknown gallery id: " + id);
}

ExpectedVerdict expected_verdict(const std::string& id, const Params& params) {
    const Params p = resolve_params(id, params);
    const std::string k = canonical(id);
    ExpectedVerdict v;
    if (k == "ex4.1") {
        v.fast = ergodic(2);
        v.slow = evanescent({0, 1});
    } else if (k == "ex4.2") {
        v.fast = ergodic(2);
        v.slow = unknown(UnknownReason::NotMonomolecular);
    } else if (k == "ex4.3" || k == "fig1") {
        const double eps = k == "fig1" ? 0.01 : param(p, "eps");
        v.fast = evanescent({0, 1});
        v.slow = by_sign(-(1.0 - 16.0 * eps + 16.0 * eps * eps), 2, {0, 1});
    } else if (k == "ex4.4") {
        const double n = param(p, "n"), a = param(p, "alpha"), b = param(p, "beta");
        v.fast = by_sign(n * a / 2.0 - b, 1, {0});
        const double top = n * a - b;
        if (top < -kStabilityTol) v.slow = ergodic(1);
        else if (top > kStabilityTol) v.slow = unknown(UnknownReason::MixedStability);
        else v.slow = unknown(UnknownReason::NearCritical);
    } else if (k == "ex4.5") {
        v.fast = evanescent({1});
        v.slow = evanescent({1});
    } else if (k == "ex_trans") {
        v.fast = unknown(UnknownReason::NotMonomolecular);
        v.slow = unknown(UnknownReason::NotMonomolecular);
        v.note = "positive recurrent although its matrix is unstable";
    } else if (k == "ex4.6") {
        v.fast = ergodic(2);
        v.slow = unknown(UnknownReason::NoCommonSupport);
        v.note = "a bespoke linear Lyapunov function shows positive recurrence for every kappa";
    } else if (k == "ex4.7") {
        v.fast = ergodic(1);
        v.slow = unknown(UnknownReason::MixedStability);
        v.note = "a power Lyapunov function shows exponential ergodicity for every kappa";
    } else if (k == "ex5.1") {
        v.fast = evanescent({2, 3});
        v.slow = evanescent({0, 1});
        v.note = "ergodic for intermediate kappa";
    } else if (k == "ex5.4") {
        v.fast = ergodic(2);
        v.slow = ergodic(2);
        v.note = "evanescent for some intermediate kappa when eps is small";
    } else if (k == "ex5.6") {
        CompositeDesign des = composite_design(p);
        std::size_t d = des.block_species.back().back() + 1;
        v.fast = flag(param(p, "large_evanescent")) ? evanescent(des.block_species.back()) : ergodic(d);
        v.slow = flag(param(p, "small_evanescent")) ? evanescent(des.block_species.front()) : ergodic(d);
        v.note = "at least N ergodic-evanescent-ergodic windows in between";
    } else if (k == "ex6.2") {
        // mixed matrix is unstable exactly when alpha < 4; recorded from the classifier at alpha = 1
        v.fast = by_sign(4.0 - param(p, "alpha"), 3, {0, 1, 2});
        v.slow = unknown(UnknownReason::NoCommonSupport);
        v.note = "the reciprocal Lyapunov function fails for every kappa";
    } else {
        throw std::invalid_argument("unknown gallery id: " + id);
    }
    return v;
}

bool matches(const Conclusion& got, const ExpectedConclusion& want) {
    if (got.outcome != want.outcome) return false;
    if (want.outcome == Outcome::Unknown) return got.reason == want.reason;
    return got.support == want.support;
}

SweepPlan default_sweep(const std::string& id, const Params& params) {
    const std::string k = gallery_entry(id).id;
    SweepPlan plan;
    for (int e = -6; e <= 6; ++e) plan.kappas.push_back(std::pow(10.0, e / 2.0));
    if (k == "ex5.4") {
        plan.kappas.clear();
        for (int e = 0; e <= 8; ++e) plan.kappas.push_back(std::pow(10.0, e / 2.0));
        plan.t_max = 500;
        plan.escape_norm = 200;
        plan.method = SimMethod::Auto;
    } else if (k == "ex5.6") {
        // one point inside each window, one in each gap, one past either end
        const Params p = resolve_params(k, params);
        const CompositeDesign des = composite_design(p);
        const double lo = p.at("window_low"), hi = p.at("window_high");
        const std::size_t n = std::size_t(p.at("N"));
        plan.kappas = {des.betas[1] * lo / 2.0};
        for (std::size_t j = 1; j <= n; ++j) {
            plan.kappas.push_back(des.betas[j] * std::sqrt(lo * hi));
            if (j < n) plan.kappas.push_back(std::sqrt(des.betas[j] * hi * des.betas[j + 1] * lo));
        }
        plan.kappas.push_back(des.betas[n] * hi * 4.0);
        plan.t_max = 300;
        plan.escape_norm = 200;
        plan.n_traj = 100;
        plan.max_events = 200'000'000;
        plan.method = SimMethod::Auto;
    }
    return plan;
}

}  // namespace switchcrn
