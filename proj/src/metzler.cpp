#include "switchcrn/metzler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace switchcrn {

bool is_metzler(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && !(m(i, j) >= 0.0)) return false;
    return true;
}

FrobeniusForm frobenius_form(const Matrix& m) {
    const std::size_t n = m.rows();
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, kUnset), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<IndexSet> sccs;
    std::size_t counter = 0;

    std::function<void(std::size_t)> connect = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w = 0; w < n; ++w) {
            if (w == v || m(v, w) == 0.0) continue;
            if (index[w] == kUnset) {
                connect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            IndexSet comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            sccs.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] == kUnset) connect(v);
    // Tarjan emits sink components first
    std::reverse(sccs.begin(), sccs.end());
    return FrobeniusForm{std::move(sccs)};
}

namespace {

PerronPair squaring_fallback(const Matrix& shifted, double shift) {
    const std::size_t n = shifted.rows();
    Matrix p = shifted;
    for (int k = 0; k < 60; ++k) {
        double s = p.max_abs();
        p = (1.0 / s) * p;
        p = p * p;
    }
    Vec w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[j] += p(i, j);
    double s = norm1(w);
    for (double& x : w) x /= s;
    Vec wb = row_times(w, shifted);
    return {norm1(wb) - shift, w};
}

}  // namespace

PerronPair perron_pair(const Matrix& block) {
    const std::size_t n = block.rows();
    if (n == 0) throw std::invalid_argument("empty block");
    if (n == 1) return {block(0, 0), Vec{1.0}};
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, std::fabs(block(i, i)));
    shift += 1.0;
    Matrix b = block;
    for (std::size_t i = 0; i < n; ++i) b(i, i) += shift;

    Vec w(n, 1.0 / double(n));
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100000; ++it) {
        Vec wb = row_times(w, b);
        double rho = norm1(wb);
        for (double& x : wb) x /= rho;
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid += std::fabs(wb[i] - w[i]);
        w = std::move(wb);
        if (std::fabs(rho - prev) < 1e-13 * std::max(1.0, rho) && resid < 1e-13) {
            Vec check = row_times(w, b);
            return {norm1(check) - shift, w};
        }
        prev = rho;
    }
    return squaring_fallback(b, shift);
}

double spectral_abscissa(const Matrix& m) {
    if (!is_metzler(m)) throw std::invalid_argument("spectral_abscissa needs a Metzler matrix");
    if (m.rows() == 0) throw std::invalid_argument("empty matrix");
    double best = -std::numeric_limits<double>::infinity();
    for (const IndexSet& blk : frobenius_form(m).blocks)
        best = std::max(best, perron_pair(m.submatrix(blk)).root);
    return best;
}

std::string to_string(CertKind k) {
    switch (k) {
        case CertKind::Decreasing: return "Decreasing";
        case CertKind::Increasing: return "Increasing";
        case CertKind::UnstableSupport: return "UnstableSupport";
    }
    return "?";
}

Vec embed(const Vec& sub, const IndexSet& idx, std::size_t d) {
    Vec v(d, 0.0);
    for (std::size_t a = 0; a < idx.size(); ++a) v[idx[a]] = sub[a];
    return v;
}

bool verify_certificate(const DirectionCertificate& cert, const Matrix& m) {
    const std::size_t d = m.rows();
    if (cert.v.size() != d || !(cert.margin > 0.0)) return false;
    Vec vm = row_times(cert.v, m);
    const double slack = 1e-12 * std::max(1.0, cert.margin);
    switch (cert.kind) {
        case CertKind::Decreasing:
            for (std::size_t i = 0; i < d; ++i)
                if (!(cert.v[i] > 0.0) || vm[i] > -cert.margin + slack) return false;
            return cert.support == full_set(d);
        case CertKind::Increasing:
            for (std::size_t i = 0; i < d; ++i)
                if (!(cert.v[i] > 0.0) || vm[i] < cert.margin - slack) return false;
            return cert.support == full_set(d);
        case CertKind::UnstableSupport:
            for (double x : cert.v)
                if (x < 0.0) return false;
            if (cert.support.empty() || cert.support != support_of(cert.v)) return false;
            for (std::size_t i : cert.support)
                if (vm[i] < cert.margin - slack) return false;
            return true;
    }
    return false;
}

std::optional<DirectionCertificate> decreasing_direction(const Matrix& m) {
    if (spectral_abscissa(m) >= -kStabilityTol) return std::nullopt;
    const std::size_t d = m.rows();
    auto sol = solve(m.transpose(), Vec(d, -1.0));
    if (!sol) return std::nullopt;
    DirectionCertificate c{CertKind::Decreasing, *sol, full_set(d), 0.0};
    Vec vm = row_times(c.v, m);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d; ++i) {
        if (!(c.v[i] > 0.0)) return std::nullopt;
        margin = std::min(margin, -vm[i]);
    }
    c.margin = margin;
    if (!verify_certificate(c, m)) return std::nullopt;
    return c;
}

std::optional<DirectionCertificate> increasing_direction(const Matrix& m) {
    if (!is_metzler(m)) throw std::invalid_argument("increasing_direction needs a Metzler matrix");
    const std::size_t d = m.rows();
    FrobeniusForm ff = frobenius_form(m);
    std::vector<PerronPair> pairs;
    double min_root = std::numeric_limits<double>::infinity();
    for (const IndexSet& blk : ff.blocks) {
        pairs.push_back(perron_pair(m.submatrix(blk)));
        if (!(pairs.back().root > kStabilityTol)) return std::nullopt;
        min_root = std::min(min_root, pairs.back().root);
    }
    const double rel_margin = 0.5 * min_root;
    for (double gamma = 1.0; gamma <= std::ldexp(1.0, 60); gamma *= 2.0) {
        Vec v(d, 0.0);
        double scale = 1.0;
        for (std::size_t b = 0; b < ff.blocks.size(); ++b) {
            for (std::size_t a = 0; a < ff.blocks[b].size(); ++a)
                v[ff.blocks[b][a]] = scale * pairs[b].left[a];
            scale *= gamma;
        }
        Vec vm = row_times(v, m);
        bool ok = true;
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < d; ++i) {
            if (!(v[i] > 0.0) || vm[i] < rel_margin * v[i]) ok = false;
            margin = std::min(margin, vm[i]);
        }
        if (!ok) continue;
        DirectionCertificate c{CertKind::Increasing, v, full_set(d), margin};
        if (verify_certificate(c, m)) return c;
    }
    throw std::logic_error("increasing_direction: block scaling failed to converge");
}

std::optional<DirectionCertificate> unstable_support_vector(const Matrix& m) {
    if (!is_metzler(m)) throw std::invalid_argument("unstable_support_vector needs a Metzler matrix");
    FrobeniusForm ff = frobenius_form(m);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_block = 0;
    PerronPair best_pair;
    for (std::size_t b = 0; b < ff.blocks.size(); ++b) {
        PerronPair p = perron_pair(m.submatrix(ff.blocks[b]));
        if (p.root > best) {
            best = p.root;
            best_block = b;
            best_pair = std::move(p);
        }
    }
    if (!(best > kStabilityTol)) return std::nullopt;
    const IndexSet& blk = ff.blocks[best_block];
    DirectionCertificate c{CertKind::UnstableSupport, embed(best_pair.left, blk, m.rows()), blk, 0.0};
    Vec vm = row_times(c.v, m);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i : blk) margin = std::min(margin, vm[i]);
    c.margin = margin;
    if (!verify_certificate(c, m)) return std::nullopt;
    return c;
}

}  // namespace switchcrn
