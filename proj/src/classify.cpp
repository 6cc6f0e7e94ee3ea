#include "switchcrn/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "switchcrn/mixing.hpp"

namespace switchcrn {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::ErgodicEventually: return "ErgodicEventually";
        case Outcome::EvanescentEventually: return "EvanescentEventually";
        case Outcome::Unknown: return "Unknown";
    }
    return "?";
}

std::string to_string(UnknownReason r) {
    switch (r) {
        case UnknownReason::None: return "None";
        case UnknownReason::NearCritical: return "NearCritical";
        case UnknownReason::NonlinearGenerator: return "NonlinearGenerator";
        case UnknownReason::NotMonomolecular: return "NotMonomolecular";
        case UnknownReason::NoCommonSupport: return "NoCommonSupport";
        case UnknownReason::MixedStability: return "MixedStability";
    }
    return "?";
}

namespace {

Conclusion unknown(UnknownReason r) { return Conclusion{Outcome::Unknown, r, {}, {}}; }

struct Structure {
    bool linear_generator = true;
    bool monomolecular = true;
    std::vector<Matrix> matrices;
};

Structure structure(const SwitchedModel& model) {
    Structure s;
    for (const LinearData& ld : linearize_all(model)) {
        s.linear_generator = s.linear_generator && ld.is_linear_generator;
        s.monomolecular = s.monomolecular && ld.is_at_most_monomolecular;
        s.matrices.push_back(ld.matrix);
    }
    return s;
}

}  // namespace

Conclusion classify_fast(const SwitchedModel& model) {
    Structure s = structure(model);
    if (!s.linear_generator) return unknown(UnknownReason::NonlinearGenerator);
    Matrix mixed = mix(model).mixed_matrix;
    if (auto dec = decreasing_direction(mixed))
        return Conclusion{Outcome::ErgodicEventually, UnknownReason::None, dec->support, {*dec}};
    auto unst = unstable_support_vector(mixed);
    if (!unst) return unknown(UnknownReason::NearCritical);
    if (!s.monomolecular) return unknown(UnknownReason::NotMonomolecular);
    return Conclusion{Outcome::EvanescentEventually, UnknownReason::None, unst->support, {*unst}};
}

Conclusion classify_slow(const SwitchedModel& model) {
    Structure s = structure(model);
    if (!s.linear_generator) return unknown(UnknownReason::NonlinearGenerator);
    std::vector<DirectionCertificate> decs;
    std::size_t n_stable = 0, n_unstable = 0;
    for (const Matrix& m : s.matrices) {
        if (auto dec = decreasing_direction(m)) {
            decs.push_back(*dec);
            ++n_stable;
        } else if (spectral_abscissa(m) > kStabilityTol) {
            ++n_unstable;
        }
    }
    if (decs.size() == s.matrices.size())
        return Conclusion{Outcome::ErgodicEventually, UnknownReason::None,
                          full_set(model.n_species()), decs};
    if (!s.monomolecular) return unknown(UnknownReason::NotMonomolecular);
    if (auto cs = common_unstable_support(model))
        return Conclusion{Outcome::EvanescentEventually, UnknownReason::None, cs->support,
                          cs->certificates};
    if (n_stable > 0 && n_unstable > 0) return unknown(UnknownReason::MixedStability);
    if (n_stable + n_unstable < s.matrices.size()) return unknown(UnknownReason::NearCritical);
    return unknown(UnknownReason::NoCommonSupport);
}

RegimeVerdict classify(const SwitchedModel& model) {
    return RegimeVerdict{classify_fast(model), classify_slow(model)};
}

bool verify_conclusion(const SwitchedModel& model, const Conclusion& c, bool fast) {
    if (c.outcome == Outcome::Unknown) return c.certificates.empty();
    std::vector<Matrix> targets;
    if (fast) {
        targets.push_back(mix(model).mixed_matrix);
    } else {
        for (const LinearData& ld : linearize_all(model)) targets.push_back(ld.matrix);
    }
    if (c.certificates.size() != targets.size()) return false;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const DirectionCertificate& cert = c.certificates[i];
        if (!verify_certificate(cert, targets[i])) return false;
        bool kind_ok = c.outcome == Outcome::ErgodicEventually
                           ? cert.kind == CertKind::Decreasing
                           : cert.kind != CertKind::Decreasing;
        if (!kind_ok) return false;
        if (c.outcome == Outcome::EvanescentEventually && cert.support != c.support) return false;
    }
    return true;
}

std::optional<CommonSupport> common_unstable_support(const SwitchedModel& model) {
    const std::size_t d = model.n_species();
    if (d > 20) throw std::invalid_argument("common_unstable_support: refusing to enumerate supports for d > 20");
    std::vector<Matrix> ms;
    for (const LinearData& ld : linearize_all(model)) ms.push_back(ld.matrix);

    // subsets ordered by decreasing size, then lexicographically by sorted index list
    std::vector<IndexSet> subsets;
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        IndexSet s;
        for (std::size_t i = 0; i < d; ++i)
            if (mask & (1u << i)) s.push_back(i);
        subsets.push_back(std::move(s));
    }
    std::sort(subsets.begin(), subsets.end(), [](const IndexSet& a, const IndexSet& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });

    for (const IndexSet& sub : subsets) {
        std::vector<DirectionCertificate> certs;
        for (const Matrix& m : ms) {
            auto inc = increasing_direction(m.submatrix(sub));
            if (!inc) break;
            Vec v = embed(inc->v, sub, d);
            Vec vm = row_times(v, m);
            double margin = std::numeric_limits<double>::infinity();
            for (std::size_t k : sub) margin = std::min(margin, vm[k]);
            CertKind kind = sub.size() == d ? CertKind::Increasing : CertKind::UnstableSupport;
            DirectionCertificate cert{kind, v, sub, margin};
            if (!verify_certificate(cert, m)) break;
            certs.push_back(std::move(cert));
        }
        if (certs.size() == ms.size()) return CommonSupport{sub, std::move(certs)};
    }
    return std::nullopt;
}

std::vector<Vec> reaction_vectors_meeting(const SwitchedModel& model, const Vec& v) {
    std::vector<Vec> out;
    const std::size_t d = model.n_species();
    for (const CrnSpec& e : model.environments())
        for (const Reaction& r : e.reactions) {
            auto delta = reaction_delta(r, d);
            bool meets = false;
            Vec xi(d);
            for (std::size_t m = 0; m < d; ++m) {
                xi[m] = double(delta[m]);
                if (xi[m] != 0.0 && v[m] != 0.0) meets = true;
            }
            if (meets && std::find(out.begin(), out.end(), xi) == out.end()) out.push_back(xi);
        }
    return out;
}

Vec perturb_direction(const Vec& v, const Matrix& m, const std::vector<Vec>& xis, std::uint64_t seed) {
    const std::size_t d = v.size();
    if (m.rows() != d) throw std::invalid_argument("perturb_direction: size mismatch");
    IndexSet supp = support_of(v);
    if (supp.empty()) throw std::invalid_argument("perturb_direction: v is zero");
    for (double x : v)
        if (x < 0.0) throw std::invalid_argument("perturb_direction: v must be non-negative");
    auto positive_drift = [&](const Vec& cand) {
        Vec vm = row_times(cand, m);
        for (std::size_t k : supp)
            if (!(vm[k] > 0.0)) return false;
        return true;
    };
    if (!positive_drift(v)) throw std::invalid_argument("perturb_direction: (vM)_m must be positive on supp(v)");
    for (const Vec& xi : xis) {
        bool meets = false;
        for (std::size_t k : supp)
            if (xi.at(k) != 0.0) meets = true;
        if (!meets) throw std::invalid_argument("perturb_direction: some xi misses supp(v)");
    }
    auto separated = [&](const Vec& cand) {
        for (const Vec& xi : xis) {
            double scale = 0.0;
            for (std::size_t k = 0; k < d; ++k) scale += std::fabs(cand[k] * xi[k]);
            if (!(std::fabs(dot(cand, xi)) > 1e-12 * scale)) return false;
        }
        return true;
    };
    if (separated(v)) return v;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        Vec z(d, 0.0);
        for (std::size_t k : supp) z[k] = unif(rng);
        for (double eps = 1.0; eps > 1e-15; eps *= 0.5) {
            Vec cand = v;
            bool keeps_support = true;
            for (std::size_t k : supp) {
                cand[k] += eps * z[k];
                if (!(cand[k] > 0.0)) keeps_support = false;
            }
            if (keeps_support && positive_drift(cand) && separated(cand)) return cand;
        }
    }
    throw std::runtime_error("perturb_direction: retries exhausted");
}

EscapeWitness escape_witness(const SwitchedModel& model, const Vec& v, const State& x0,
                             std::size_t i0, double c) {
    const std::size_t d = model.n_species();
    if (v.size() != d || x0.size() != d) throw std::invalid_argument("escape_witness: size mismatch");
    if (i0 >= model.n_env()) throw std::invalid_argument("escape_witness: environment out of range");
    bool meets = false;
    for (std::size_t m = 0; m < d; ++m)
        if (v[m] != 0.0 && x0[m] > 0) meets = true;
    if (!meets) throw std::invalid_argument("escape_witness: supp(v) and supp(x0) are disjoint");
    for (const LinearData& ld : linearize_all(model))
        if (!ld.is_at_most_monomolecular)
            throw std::invalid_argument("escape_witness: needs at-most-monomolecular networks");

    struct Move {
        std::size_t env, reaction;
        std::vector<std::int64_t> delta;
        double gain;
    };
    std::vector<Move> moves;
    double delta_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < model.n_env(); ++j) {
        const auto& rxs = model.environment(j).reactions;
        for (std::size_t r = 0; r < rxs.size(); ++r) {
            auto delta = reaction_delta(rxs[r], d);
            double gain = 0.0;
            for (std::size_t m = 0; m < d; ++m) gain += v[m] * double(delta[m]);
            if (gain > 0.0) {
                moves.push_back({j, r, std::move(delta), gain});
                delta_min = std::min(delta_min, gain);
            }
        }
    }

    EscapeWitness out{{}, x0};
    auto value = [&](const State& x) {
        double s = 0.0;
        for (std::size_t m = 0; m < d; ++m) s += v[m] * double(x[m]);
        return s;
    };
    double start = value(x0);
    if (start > c) return out;
    const double bound = std::ceil((c - start) / delta_min) + 1.0;
    while (value(out.terminal) <= c) {
        if (double(out.path.size()) > bound) throw std::logic_error("escape_witness: path exceeded its length bound");
        const Move* best = nullptr;
        for (const Move& mv : moves) {
            const Reaction& rx = model.environment(mv.env).reactions[mv.reaction];
            if (propensity(rx, out.terminal) > 0.0 && (!best || mv.gain > best->gain)) best = &mv;
        }
        if (!best) throw std::runtime_error("witness stalled");
        for (std::size_t m = 0; m < d; ++m) out.terminal[m] += best->delta[m];
        out.path.push_back({best->env, best->reaction});
    }
    return out;
}

}  // namespace switchcrn
