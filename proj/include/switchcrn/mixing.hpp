// Stationary weights of the switching chain, the mixed matrix and the z correction vectors.
#pragma once

#include <vector>

#include "switchcrn/linalg.hpp"
#include "switchcrn/model.hpp"

namespace switchcrn {

struct MixData {
    Vec w;
    Matrix mixed_matrix;
};

/// Unique stationary distribution of an irreducible rate matrix.
Vec stationary_distribution(const Matrix& q);

Matrix mixed_matrix(const std::vector<LinearData>& envs, const Vec& w);
std::vector<LinearData> linearize_all(const SwitchedModel& model);
MixData mix(const SwitchedModel& model);

/// z[m] is an n-vector; zero for species outside the support.
struct ZVectors {
    std::vector<Vec> z;
    IndexSet support;

    /// u^i with u^i_m = z^m_i.
    Vec u(std::size_t env) const;
};

/// Per-environment correction vectors balancing v M_i against the mixed drift.
ZVectors solve_z(const std::vector<Matrix>& env_matrices, const Matrix& q, const Vec& w,
                 const Vec& v, const IndexSet& support);
ZVectors solve_z(const SwitchedModel& model, const Vec& w, const Vec& v, const IndexSet& support);

/// Largest coordinatewise residual of the defining identity
/// sum_{j!=i} q_ij (z_j - z_i) + (v M_i)_m - (v M)_m / (w_i n).
double z_identity_residual(const ZVectors& zv, const std::vector<Matrix>& env_matrices,
                           const Matrix& q, const Vec& w, const Vec& v);

}  // namespace switchcrn
