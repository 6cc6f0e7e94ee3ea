#include "switchcrn/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace switchcrn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridLo = -30;
constexpr int kGridHi = 30;
constexpr std::size_t kShellCap = 10000;
constexpr std::size_t kViolationCap = 100;

double weighted(const Vec& c, const State& x) {
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) s += c[m] * double(x[m]);
    return s;
}

std::vector<Matrix> env_matrices(const SwitchedModel& model) {
    std::vector<Matrix> ms;
    for (const LinearData& ld : linearize_all(model)) ms.push_back(ld.matrix);
    return ms;
}

void require_monomolecular(const SwitchedModel& model) {
    for (const LinearData& ld : linearize_all(model))
        if (!ld.is_at_most_monomolecular)
            throw std::invalid_argument("transience checks need at-most-monomolecular networks");
}

bool all_positive(const std::vector<Vec>& rows, const IndexSet& cols) {
    for (const Vec& r : rows)
        for (std::size_t m : cols)
            if (!(r[m] > 0.0)) return false;
    return true;
}

bool all_negative(const std::vector<Vec>& rows) {
    for (const Vec& r : rows)
        for (double x : r)
            if (!(x < 0.0)) return false;
    return true;
}

/// Ratio factor bounding (1 + phi_i.x)/(1 + phi_j.x) from the appropriate side.
double ratio_factor(const Vec& phi_i, const Vec& phi_j, const IndexSet& over, double diff) {
    if (diff == 0.0) return 1.0;
    double lo = 1.0, hi = 1.0;
    for (std::size_t l : over) {
        double r = phi_i[l] / phi_j[l];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return diff > 0.0 ? lo : hi;
}

// Deterministic low-discrepancy sampling of lattice states in the bands
// {x : band_vec[env].x in [b, 2b]} for b = 1, 2, 4, ..., 2^30.
struct ShellResult {
    double b = kInf;
    std::vector<SampledState> violations;
    std::vector<SampledState> samples;
};

ShellResult sample_shells(const SwitchedModel& model, double kappa, const LyapunovFn& h,
                          const std::vector<Vec>& band_vecs) {
    static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};
    const std::size_t d = model.n_species();
    const std::size_t n = model.n_env();
    const int n_bands = 31;
    const std::size_t per_band = kShellCap / n_bands;
    auto frac = [](double x) { return x - std::floor(x); };

    std::vector<bool> band_clean(n_bands, true);
    ShellResult out;
    std::size_t counter = 0;
    for (int k = 0; k < n_bands; ++k) {
        const double b = std::ldexp(1.0, k);
        for (std::size_t s = 0; s < per_band; ++s, ++counter) {
            const std::size_t env = counter % n;
            const Vec& w = band_vecs[env];
            auto alpha = [&](std::size_t idx) {
                return frac(double(counter + 1) * std::sqrt(primes[idx % 30]) + 0.5 * double(idx / 30));
            };
            double target = b * (1.0 + alpha(0));
            Vec t(d, 0.0);
            double wt = 0.0, wmax = 0.0;
            std::size_t argmax = 0;
            for (std::size_t m = 0; m < d; ++m) {
                if (w[m] > 0.0) {
                    t[m] = alpha(m + 1) + 0.05;
                    wt += w[m] * t[m];
                    if (w[m] > wmax) {
                        wmax = w[m];
                        argmax = m;
                    }
                }
            }
            if (wt == 0.0) continue;
            State x(d, 0);
            for (std::size_t m = 0; m < d; ++m) {
                if (w[m] > 0.0) x[m] = std::int64_t(std::floor(target * t[m] / wt));
                else x[m] = std::int64_t(std::floor(2.0 * b * alpha(m + 1)));
            }
            double val = weighted(w, x);
            if (val < b) x[argmax] += std::int64_t(std::ceil((b - val) / wmax));
            val = weighted(w, x);
            if (val < b || val > 2.0 * b) continue;
            double g = generator_apply(model, kappa, h, x, env);
            SampledState st{x, env, g};
            out.samples.push_back(st);
            if (!(g > 0.0)) {
                band_clean[k] = false;
                if (out.violations.size() < kViolationCap) out.violations.push_back(st);
            }
        }
    }
    for (int k = n_bands - 1; k >= 0 && band_clean[k]; --k) out.b = std::ldexp(1.0, k);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LyapunovFn

LyapunovFn LyapunovFn::linear(std::vector<Vec> coeffs, double offset) {
    LyapunovFn h;
    h.form_ = Form::Linear;
    for (const Vec& c : coeffs)
        for (double x : c)
            if (x < 0.0) throw std::invalid_argument("Lyapunov coefficients must be non-negative");
    h.coeffs_ = std::move(coeffs);
    h.offset_ = offset;
    return h;
}

LyapunovFn LyapunovFn::reciprocal(std::vector<Vec> coeffs) {
    LyapunovFn h = linear(std::move(coeffs));
    h.form_ = Form::Reciprocal;
    return h;
}

LyapunovFn LyapunovFn::power(Vec scales, double exponent) {
    LyapunovFn h;
    h.form_ = Form::Power;
    for (double s : scales)
        if (s < 0.0) throw std::invalid_argument("power scales must be non-negative");
    h.scales_ = std::move(scales);
    h.exponent_ = exponent;
    return h;
}

double LyapunovFn::value(const State& x, std::size_t env) const {
    switch (form_) {
        case Form::Linear: return weighted(coeffs_.at(env), x) + offset_;
        case Form::Reciprocal: return 1.0 - 1.0 / (1.0 + weighted(coeffs_.at(env), x));
        case Form::Power:
            if (x.size() != 1) throw std::invalid_argument("power form is single-species only");
            return scales_.at(env) * std::pow(double(x[0]), exponent_);
    }
    return 0.0;
}

double LyapunovFn::difference(const State& from, std::size_t from_env, const State& to,
                              std::size_t to_env) const {
    if (form_ == Form::Power) return value(to, to_env) - value(from, from_env);
    const Vec& ci = coeffs_.at(from_env);
    const Vec& cj = coeffs_.at(to_env);
    double ds = 0.0;
    for (std::size_t m = 0; m < ci.size(); ++m)
        ds += (cj[m] - ci[m]) * double(from[m]) + cj[m] * double(to[m] - from[m]);
    if (form_ == Form::Linear) return ds;
    double s_from = weighted(ci, from);
    double s_to = weighted(cj, to);
    return ds / ((1.0 + s_from) * (1.0 + s_to));
}

LyapunovFn LyapunovFn::operator+(const LyapunovFn& other) const {
    if (form_ != Form::Linear || other.form_ != Form::Linear || coeffs_.size() != other.coeffs_.size())
        throw std::invalid_argument("only linear forms of equal shape can be added");
    std::vector<Vec> sum = coeffs_;
    for (std::size_t i = 0; i < sum.size(); ++i)
        for (std::size_t m = 0; m < sum[i].size(); ++m) sum[i][m] += other.coeffs_[i].at(m);
    return linear(std::move(sum), offset_ + other.offset_);
}

std::string to_string(LyapunovFn::Form f) {
    switch (f) {
        case LyapunovFn::Form::Linear: return "Linear";
        case LyapunovFn::Form::Reciprocal: return "Reciprocal";
        case LyapunovFn::Form::Power: return "Power";
    }
    return "?";
}

std::string to_string(DriftReport::Mode m) {
    return m == DriftReport::Mode::ErgodicDrift ? "ErgodicDrift" : "TransientDrift";
}

double generator_apply(const SwitchedModel& model, double kappa, const LyapunovFn& h,
                       const State& x, std::size_t env) {
    const std::size_t d = model.n_species();
    if (x.size() != d) throw std::invalid_argument("generator_apply: state dimension mismatch");
    if (h.n_env() != model.n_env()) throw std::invalid_argument("generator_apply: h has wrong environment count");
    for (auto xm : x)
        if (xm < 0) throw std::invalid_argument("generator_apply: negative state");
    double total = 0.0;
    const Matrix& q = model.q();
    for (std::size_t j = 0; j < model.n_env(); ++j)
        if (j != env && q(env, j) != 0.0) total += kappa * q(env, j) * h.difference(x, env, x, j);
    State next(d);
    for (const Reaction& r : model.environment(env).reactions) {
        double lam = propensity(r, x);
        if (lam == 0.0) continue;
        auto delta = reaction_delta(r, d);
        for (std::size_t m = 0; m < d; ++m) {
            next[m] = x[m] + delta[m];
            if (next[m] < 0) throw std::logic_error("reaction with positive propensity leaves the orthant");
        }
        total += lam * h.difference(x, env, next, env);
    }
    return total;
}

std::vector<double> kappa_grid() {
    std::vector<double> g;
    for (int k = kGridLo; k <= kGridHi; ++k) g.push_back(std::ldexp(1.0, k));
    return g;
}

// ---------------------------------------------------------------------------
// Ergodic constructions

std::vector<Vec> fast_ergodic_leading(const SwitchedModel& model, const Vec& v, const ZVectors& z,
                                      double kappa) {
    const std::size_t n = model.n_env();
    const auto ms = env_matrices(model);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < n; ++i) {
        Vec ui = z.u(i);
        Vec phi = v;
        for (std::size_t m = 0; m < phi.size(); ++m) phi[m] += ui[m] / kappa;
        Vec row = row_times(phi, ms[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            Vec uj = z.u(j);
            for (std::size_t m = 0; m < row.size(); ++m) row[m] += model.q()(i, j) * (uj[m] - ui[m]);
        }
        out.push_back(std::move(row));
    }
    return out;
}

LyapunovFn fast_ergodic_function(const Vec& v, const ZVectors& z, std::size_t n_env, double kappa) {
    std::vector<Vec> coeffs;
    for (std::size_t i = 0; i < n_env; ++i) {
        Vec c = v;
        Vec ui = z.u(i);
        for (std::size_t m = 0; m < c.size(); ++m) c[m] += ui[m] / kappa;
        coeffs.push_back(std::move(c));
    }
    return LyapunovFn::linear(std::move(coeffs));
}

ErgodicBuild build_fast_ergodic(const SwitchedModel& model, const DirectionCertificate& cert) {
    if (cert.kind != CertKind::Decreasing) throw std::invalid_argument("build_fast_ergodic needs a Decreasing certificate");
    MixData md = mix(model);
    if (!verify_certificate(cert, md.mixed_matrix))
        throw std::invalid_argument("certificate does not verify against the mixed matrix");
    ZVectors z = solve_z(model, md.w, cert.v, full_set(model.n_species()));
    const auto grid = kappa_grid();
    std::vector<bool> ok(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) ok[k] = all_negative(fast_ergodic_leading(model, cert.v, z, grid[k]));
    std::size_t first = grid.size();
    for (std::size_t k = grid.size(); k-- > 0 && ok[k];) first = k;
    if (first == grid.size()) throw std::runtime_error("build_fast_ergodic: no grid kappa satisfies the drift condition");
    double kappa = grid[first];
    ErgodicBuild out{fast_ergodic_function(cert.v, z, model.n_env(), kappa), kappa, {}};
    out.report.mode = DriftReport::Mode::ErgodicDrift;
    out.report.kappa = kappa;
    out.report.leading = fast_ergodic_leading(model, cert.v, z, kappa);
    out.report.algebraic_pass = true;
    return out;
}

std::vector<Vec> slow_ergodic_leading(const SwitchedModel& model, const std::vector<Vec>& vs,
                                      double kappa) {
    const std::size_t n = model.n_env();
    if (vs.size() != n) throw std::invalid_argument("need one vector per environment");
    const auto ms = env_matrices(model);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < n; ++i) {
        Vec row = row_times(vs[i], ms[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t m = 0; m < row.size(); ++m)
                row[m] += kappa * model.q()(i, j) * (vs[j][m] - vs[i][m]);
        }
        out.push_back(std::move(row));
    }
    return out;
}

ErgodicBuild build_slow_ergodic(const SwitchedModel& model,
                                const std::vector<DirectionCertificate>& certs) {
    const auto ms = env_matrices(model);
    if (certs.size() != ms.size()) throw std::invalid_argument("need one certificate per environment");
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        if (certs[i].kind != CertKind::Decreasing || !verify_certificate(certs[i], ms[i]))
            throw std::invalid_argument("certificate " + std::to_string(i) + " is not a valid decreasing direction");
        vs.push_back(certs[i].v);
    }
    const auto grid = kappa_grid();
    std::size_t last = grid.size();
    for (std::size_t k = 0; k < grid.size() && all_negative(slow_ergodic_leading(model, vs, grid[k])); ++k) last = k;
    if (last == grid.size()) throw std::runtime_error("build_slow_ergodic: no grid kappa satisfies the drift condition");
    double kappa = grid[last];
    ErgodicBuild out{LyapunovFn::linear(vs), kappa, {}};
    out.report.mode = DriftReport::Mode::ErgodicDrift;
    out.report.kappa = kappa;
    out.report.leading = slow_ergodic_leading(model, vs, kappa);
    out.report.algebraic_pass = true;
    return out;
}

// ---------------------------------------------------------------------------
// Transience checks

namespace {

struct FastTransienceData {
    IndexSet support;
    ZVectors z;
    std::vector<Vec> phi;
    std::vector<Vec> leading;
};

FastTransienceData fast_transience_data(const SwitchedModel& model, double kappa, const Vec& v) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    require_monomolecular(model);
    FastTransienceData fd;
    fd.support = support_of(v);
    if (fd.support.empty()) throw std::invalid_argument("v must be non-zero");
    for (double x : v)
        if (x < 0.0) throw std::invalid_argument("v must be non-negative");
    const std::size_t n = model.n_env();
    const std::size_t d = model.n_species();
    Vec w = stationary_distribution(model.q());
    fd.z = solve_z(model, w, v, fd.support);
    for (std::size_t i = 0; i < n; ++i) {
        Vec phi(d, 0.0);
        Vec ui = fd.z.u(i);
        for (std::size_t m : fd.support) phi[m] = v[m] + ui[m] / kappa;
        fd.phi.push_back(std::move(phi));
    }
    const auto ms = env_matrices(model);
    for (std::size_t i = 0; i < n; ++i) {
        Vec row = row_times(fd.phi[i], ms[i]);
        Vec out(d, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t m : fd.support) {
            double s = row[m];
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || model.q()(i, j) == 0.0) continue;
                double diff = fd.z.z[m][j] - fd.z.z[m][i];
                s += model.q()(i, j) * ratio_factor(fd.phi[i], fd.phi[j], fd.support, diff) * diff;
            }
            out[m] = s;
        }
        fd.leading.push_back(std::move(out));
    }
    return fd;
}

void attach_shell(DriftReport& rep, const SwitchedModel& model, double kappa, const LyapunovFn& h,
                  const std::vector<Vec>& band_vecs) {
    ShellResult sr = sample_shells(model, kappa, h, band_vecs);
    rep.b = sr.b;
    rep.sampled_violations = std::move(sr.violations);
    rep.samples = std::move(sr.samples);
}

struct SlowTransienceData {
    std::vector<Vec> leading;
};

std::vector<Vec> slow_transience_leading(const SwitchedModel& model, double kappa,
                                         const IndexSet& support, const std::vector<Vec>& vs) {
    const std::size_t n = model.n_env();
    const std::size_t d = model.n_species();
    if (vs.size() != n) throw std::invalid_argument("need one vector per environment");
    if (support.empty()) throw std::invalid_argument("support must be non-empty");
    for (const Vec& v : vs) {
        if (v.size() != d) throw std::invalid_argument("vector has wrong length");
        if (support_of(v) != support) throw std::invalid_argument("supports differ across environments");
        for (double x : v)
            if (x < 0.0) throw std::invalid_argument("vectors must be non-negative");
    }
    if (kappa < 0.0) throw std::invalid_argument("kappa must be non-negative");
    const auto ms = env_matrices(model);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < n; ++i) {
        Vec row = row_times(vs[i], ms[i]);
        Vec lead(d, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t m : support) {
            double s = row[m];
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || model.q()(i, j) == 0.0) continue;
                double diff = vs[j][m] - vs[i][m];
                s += kappa * model.q()(i, j) * ratio_factor(vs[i], vs[j], support, diff) * diff;
            }
            lead[m] = s;
        }
        out.push_back(std::move(lead));
    }
    return out;
}

}  // namespace

DriftReport check_fast_transience(const SwitchedModel& model, double kappa, const Vec& v) {
    FastTransienceData fd = fast_transience_data(model, kappa, v);
    DriftReport rep;
    rep.mode = DriftReport::Mode::TransientDrift;
    rep.kappa = kappa;
    rep.leading = fd.leading;
    rep.algebraic_pass = all_positive(fd.leading, fd.support);
    rep.b = kInf;
    if (rep.algebraic_pass) {
        std::vector<Vec> bands(model.n_env(), v);
        attach_shell(rep, model, kappa, LyapunovFn::reciprocal(fd.phi), bands);
    }
    return rep;
}

double fast_transience_threshold(const SwitchedModel& model, const Vec& v) {
    const auto grid = kappa_grid();
    std::size_t first = grid.size();
    for (std::size_t k = grid.size(); k-- > 0;) {
        FastTransienceData fd = fast_transience_data(model, grid[k], v);
        if (!all_positive(fd.leading, fd.support)) break;
        first = k;
    }
    return first == grid.size() ? kInf : grid[first];
}

DriftReport check_slow_transience(const SwitchedModel& model, double kappa, const IndexSet& support,
                                  const std::vector<Vec>& vs) {
    require_monomolecular(model);
    DriftReport rep;
    rep.mode = DriftReport::Mode::TransientDrift;
    rep.kappa = kappa;
    rep.leading = slow_transience_leading(model, kappa, support, vs);
    rep.algebraic_pass = all_positive(rep.leading, support);
    rep.b = kInf;
    if (rep.algebraic_pass) attach_shell(rep, model, kappa, LyapunovFn::reciprocal(vs), vs);
    return rep;
}

double slow_transience_threshold(const SwitchedModel& model, const IndexSet& support,
                                 const std::vector<Vec>& vs) {
    const auto grid = kappa_grid();
    std::size_t last = grid.size();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!all_positive(slow_transience_leading(model, grid[k], support, vs), support)) break;
        last = k;
    }
    return last == grid.size() ? 0.0 : grid[last];
}

Matrix grouped_q(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    Matrix q(4, 4, eps);
    q(0, 1) = q(1, 0) = q(2, 3) = q(3, 2) = 1.0;
    for (std::size_t i = 0; i < 4; ++i) q(i, i) = -(1.0 + 2.0 * eps);
    return q;
}

SwitchedModel with_grouped_q(const SwitchedModel& model, double eps) {
    if (model.n_env() != 4) throw std::invalid_argument("grouped switching needs four environments");
    return SwitchedModel(model.species(), model.environments(), grouped_q(eps));
}

namespace {

constexpr std::size_t kPartner[4] = {1, 0, 3, 2};

struct GroupedData {
    std::vector<Vec> u;    // per environment
    std::vector<Vec> phi;  // per environment
    std::vector<Vec> leading;
};

void check_grouped_inputs(const SwitchedModel& model4, double eps, const Vec& v1, const Vec& v2) {
    if (model4.n_env() != 4) throw std::invalid_argument("grouped check needs four environments");
    Matrix expect = grouped_q(eps);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (std::fabs(model4.q()(i, j) - expect(i, j)) > 1e-12 * std::max(1.0, std::fabs(expect(i, j))))
                throw std::invalid_argument("Q is not of grouped form for the given eps");
    const std::size_t d = model4.n_species();
    for (const Vec* v : {&v1, &v2}) {
        if (v->size() != d) throw std::invalid_argument("group vector has wrong length");
        for (double x : *v)
            if (!(x > 0.0)) throw std::invalid_argument("group vectors must be strictly positive");
    }
    require_monomolecular(model4);
}

GroupedData grouped_data(const SwitchedModel& model4, double kappa, double eps, const Vec& v1,
                         const Vec& v2) {
    const std::size_t d = model4.n_species();
    const auto ms = env_matrices(model4);
    const Matrix pair_q{{-1.0, 1.0}, {1.0, -1.0}};
    const Vec half{0.5, 0.5};
    ZVectors za = solve_z({ms[0], ms[1]}, pair_q, half, v1, full_set(d));
    ZVectors zb = solve_z({ms[2], ms[3]}, pair_q, half, v2, full_set(d));
    GroupedData g;
    g.u = {za.u(0), za.u(1), zb.u(0), zb.u(1)};
    const IndexSet all = full_set(d);
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec& base = i < 2 ? v1 : v2;
        Vec phi(d);
        for (std::size_t m = 0; m < d; ++m) phi[m] = base[m] + g.u[i][m] / kappa;
        g.phi.push_back(std::move(phi));
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t p = kPartner[i];
        Vec row = row_times(g.phi[i], ms[i]);
        Vec lead(d);
        for (std::size_t m = 0; m < d; ++m) {
            double pd = g.u[p][m] - g.u[i][m];
            double s = ratio_factor(g.phi[i], g.phi[p], all, pd) * pd + row[m];
            for (std::size_t j = 0; j < 4; ++j) {
                if (j == i || j == p) continue;
                double diff = g.phi[j][m] - g.phi[i][m];
                s += kappa * eps * ratio_factor(g.phi[i], g.phi[j], all, diff) * diff;
            }
            lead[m] = s;
        }
        g.leading.push_back(std::move(lead));
    }
    return g;
}

}  // namespace

DriftReport check_grouped_transience(const SwitchedModel& model4, double kappa, double eps,
                                     const Vec& v1, const Vec& v2) {
    check_grouped_inputs(model4, eps, v1, v2);
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    GroupedData g = grouped_data(model4, kappa, eps, v1, v2);
    DriftReport rep;
    rep.mode = DriftReport::Mode::TransientDrift;
    rep.kappa = kappa;
    rep.leading = g.leading;
    rep.algebraic_pass = all_positive(g.leading, full_set(model4.n_species()));
    rep.b = kInf;
    if (rep.algebraic_pass) attach_shell(rep, model4, kappa, LyapunovFn::reciprocal(g.phi), {v1, v1, v2, v2});
    return rep;
}

std::vector<Vec> grouped_limit_targets(const SwitchedModel& model4, const Vec& v1, const Vec& v2) {
    const auto ms = env_matrices(model4);
    Matrix a1 = 0.5 * (ms[0] + ms[1]);
    Matrix a2 = 0.5 * (ms[2] + ms[3]);
    Vec t1 = row_times(v1, a1);
    Vec t2 = row_times(v2, a2);
    return {t1, t1, t2, t2};
}

std::vector<std::pair<double, double>> GroupedScan::passing() const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 0; k < kappas.size(); ++k)
        for (std::size_t e = 0; e < epss.size(); ++e)
            if (pass[k][e]) out.emplace_back(kappas[k], epss[e]);
    return out;
}

GroupedScan grouped_scan(const SwitchedModel& model4, const std::vector<double>& kappas,
                         const std::vector<double>& epss, const Vec& v1, const Vec& v2) {
    GroupedScan scan{kappas, epss, {}};
    const std::size_t d = model4.n_species();
    for (double kappa : kappas) {
        std::vector<bool> row;
        for (double eps : epss) {
            SwitchedModel m = with_grouped_q(model4, eps);
            check_grouped_inputs(m, eps, v1, v2);
            GroupedData g = grouped_data(m, kappa, eps, v1, v2);
            row.push_back(all_positive(g.leading, full_set(d)));
        }
        scan.pass.push_back(std::move(row));
    }
    return scan;
}

// ---------------------------------------------------------------------------
// Foster-Lyapunov box check

DriftReport verify_foster_lyapunov(const SwitchedModel& model, double kappa, const LyapunovFn& h,
                                   std::int64_t box_radius) {
    const std::size_t d = model.n_species();
    const std::size_t n = model.n_env();
    if (box_radius < 1) throw std::invalid_argument("box radius must be at least 1");
    double count = std::pow(double(box_radius + 1), double(d)) * double(n);
    if (count > 1e6) throw std::invalid_argument("box holds more than 10^6 states");
    if (h.form() == LyapunovFn::Form::Reciprocal)
        throw std::invalid_argument("Foster-Lyapunov check needs a function with finite sublevel sets");

    DriftReport rep;
    rep.mode = DriftReport::Mode::ErgodicDrift;
    rep.kappa = kappa;

    struct Eval {
        State x;
        std::size_t env;
        double g, h;
        bool far, inner;
    };
    std::vector<Eval> evals;
    State x(d, 0);
    while (true) {
        std::int64_t mx = *std::max_element(x.begin(), x.end());
        for (std::size_t i = 0; i < n; ++i)
            evals.push_back({x, i, generator_apply(model, kappa, h, x, i), h.value(x, i),
                             mx == box_radius, 2 * mx <= box_radius});
        std::size_t k = 0;
        while (k < d && x[k] == box_radius) x[k++] = 0;
        if (k == d) break;
        ++x[k];
    }

    double ratio = kInf;
    bool linear_ok = true;
    if (h.form() == LyapunovFn::Form::Linear) {
        // exact asymptotic ratio from the leading coefficients
        rep.leading = slow_ergodic_leading(model, h.coeffs(), kappa);
        linear_ok = all_negative(rep.leading);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t m = 0; m < d; ++m) {
                const double c = h.coeffs()[i][m], lead = rep.leading[i][m];
                ratio = std::min(ratio, c > 0.0 ? -lead / c : (lead < 0.0 ? kInf : -kInf));
            }
    } else {
        for (const Eval& e : evals)
            if (e.far) ratio = std::min(ratio, e.h > 0.0 ? -e.g / e.h : (e.g < 0.0 ? kInf : -kInf));
    }
    rep.c = 0.5 * ratio;

    if (!(rep.c > kStabilityTol) || !std::isfinite(rep.c)) {
        rep.algebraic_pass = false;
        rep.dconst = std::numeric_limits<double>::quiet_NaN();
        for (const Eval& e : evals)
            if (e.far && !(e.g < 0.0) && rep.sampled_violations.size() < kViolationCap)
                rep.sampled_violations.push_back({e.x, e.env, e.g});
        return rep;
    }
    double dmax = -kInf;
    for (const Eval& e : evals)
        if (e.inner) dmax = std::max(dmax, e.g + rep.c * e.h);
    rep.dconst = dmax;
    for (const Eval& e : evals) {
        double lhs = e.g + rep.c * e.h;
        if (lhs > dmax + 1e-9 * std::max(1.0, std::fabs(dmax)) && rep.sampled_violations.size() < kViolationCap)
            rep.sampled_violations.push_back({e.x, e.env, e.g});
    }
    rep.algebraic_pass = linear_ok && rep.sampled_violations.empty();
    return rep;
}

}  // namespace switchcrn
