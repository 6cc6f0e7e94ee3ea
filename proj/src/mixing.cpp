#include "switchcrn/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace switchcrn {

Vec stationary_distribution(const Matrix& q) {
    const std::size_t n = q.rows();
    if (n == 0 || q.cols() != n) throw std::invalid_argument("Q must be square and non-empty");
    Matrix a = q.transpose();
    for (std::size_t j = 0; j < n; ++j) a(0, j) = 1.0;
    Vec rhs(n, 0.0);
    rhs[0] = 1.0;
    auto sol = solve(a, rhs);
    if (!sol) throw std::invalid_argument("Q is not irreducible (singular stationary system)");
    Vec w = *sol;
    double s = 0.0;
    for (double x : w) {
        if (!(x > 0.0)) throw std::invalid_argument("Q is not irreducible (non-positive weight)");
        s += x;
    }
    for (double& x : w) x /= s;
    Vec wq = row_times(w, q);
    if (norm_inf(wq) > 1e-10 * std::max(1.0, q.max_abs()))
        throw std::invalid_argument("stationary solve did not converge");
    return w;
}

Matrix mixed_matrix(const std::vector<LinearData>& envs, const Vec& w) {
    if (envs.size() != w.size() || envs.empty())
        throw std::invalid_argument("mixed_matrix: length mismatch");
    const std::size_t d = envs[0].matrix.rows();
    Matrix m(d, d);
    for (std::size_t i = 0; i < envs.size(); ++i) m = m + w[i] * envs[i].matrix;
    return m;
}

std::vector<LinearData> linearize_all(const SwitchedModel& model) {
    std::vector<LinearData> out;
    for (const CrnSpec& e : model.environments()) out.push_back(linearize(e));
    return out;
}

MixData mix(const SwitchedModel& model) {
    Vec w = stationary_distribution(model.q());
    return {w, mixed_matrix(linearize_all(model), w)};
}

Vec ZVectors::u(std::size_t env) const {
    Vec out(z.size(), 0.0);
    for (std::size_t m = 0; m < z.size(); ++m)
        if (!z[m].empty()) out[m] = z[m][env];
    return out;
}

namespace {

Matrix weighted_mix(const std::vector<Matrix>& ms, const Vec& w) {
    Matrix m(ms[0].rows(), ms[0].cols());
    for (std::size_t i = 0; i < ms.size(); ++i) m = m + w[i] * ms[i];
    return m;
}

}  // namespace

ZVectors solve_z(const std::vector<Matrix>& env_matrices, const Matrix& q, const Vec& w,
                 const Vec& v, const IndexSet& support) {
    const std::size_t n = env_matrices.size();
    if (n == 0 || q.rows() != n || w.size() != n) throw std::invalid_argument("solve_z: size mismatch");
    const std::size_t d = env_matrices[0].rows();
    if (v.size() != d) throw std::invalid_argument("solve_z: v has wrong length");
    const Matrix mixed = weighted_mix(env_matrices, w);
    const Vec v_mixed = row_times(v, mixed);
    std::vector<Vec> v_env;
    for (const Matrix& mi : env_matrices) v_env.push_back(row_times(v, mi));

    // diag(w) Q with the last row swapped for the normalization 1.z = 0
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = w[i] * q(i, j);
    Matrix sys = a;
    for (std::size_t j = 0; j < n; ++j) sys(n - 1, j) = 1.0;

    ZVectors out;
    out.z.assign(d, Vec{});
    out.support = support;
    for (std::size_t m : support) {
        if (m >= d) throw std::invalid_argument("solve_z: support index out of range");
        Vec psi(n);
        double psum = 0.0, pmag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            psi[i] = v_mixed[m] / double(n) - w[i] * v_env[i][m];
            psum += psi[i];
            pmag = std::max(pmag, std::fabs(psi[i]));
        }
        if (std::fabs(psum) > 1e-9 * std::max(1.0, pmag))
            throw std::invalid_argument("solve_z: right-hand side not orthogonal to ones");
        Vec rhs = psi;
        rhs[n - 1] = 0.0;
        auto sol = solve(sys, rhs);
        if (!sol) throw std::runtime_error("solve_z: singular system (is Q irreducible?)");
        Vec z = *sol;
        Vec az = times_col(a, z);
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::fabs(az[i] - psi[i]));
        if (resid > 1e-8 * std::max(1.0, pmag))
            throw std::runtime_error("solve_z: residual too large; w is not stationary for Q");
        double lo = *std::min_element(z.begin(), z.end());
        for (double& x : z) x += 1.0 - lo;
        out.z[m] = std::move(z);
    }
    for (std::size_t m = 0; m < d; ++m)
        if (out.z[m].empty()) out.z[m].assign(n, 0.0);
    return out;
}

ZVectors solve_z(const SwitchedModel& model, const Vec& w, const Vec& v, const IndexSet& support) {
    std::vector<Matrix> ms;
    for (const LinearData& ld : linearize_all(model)) ms.push_back(ld.matrix);
    return solve_z(ms, model.q(), w, v, support);
}

double z_identity_residual(const ZVectors& zv, const std::vector<Matrix>& env_matrices,
                           const Matrix& q, const Vec& w, const Vec& v) {
    const std::size_t n = env_matrices.size();
    const Vec v_mixed = row_times(v, weighted_mix(env_matrices, w));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec vmi = row_times(v, env_matrices[i]);
        for (std::size_t m : zv.support) {
            double lhs = vmi[m];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) lhs += q(i, j) * (zv.z[m][j] - zv.z[m][i]);
            double rhs = v_mixed[m] / (w[i] * double(n));
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
    }
    return worst;
}

}  // namespace switchcrn
