// Stability toolkit for Metzler matrices: Frobenius normal form, Perron roots and
// direction certificates.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "switchcrn/linalg.hpp"

namespace switchcrn {

inline constexpr double kStabilityTol = 1e-9;

bool is_metzler(const Matrix& m);

struct FrobeniusForm {
    std::vector<IndexSet> blocks;  ///< topological order; permuted matrix is block upper-triangular
};

FrobeniusForm frobenius_form(const Matrix& m);

struct PerronPair {
    double root = 0.0;
    Vec left;  ///< non-negative, unit 1-norm
};

/// Perron root and left Perron vector of an irreducible Metzler matrix.
PerronPair perron_pair(const Matrix& block);

/// Largest real eigenvalue of a Metzler matrix. Throws std::invalid_argument otherwise.
double spectral_abscissa(const Matrix& m);

enum class CertKind { Decreasing, Increasing, UnstableSupport };

std::string to_string(CertKind k);

struct DirectionCertificate {
    CertKind kind = CertKind::Decreasing;
    Vec v;
    IndexSet support;
    double margin = 0.0;  ///< verified bound on |(vM)_m| over the support
};

/// Re-checks a certificate against M by direct multiplication.
bool verify_certificate(const DirectionCertificate& cert, const Matrix& m);

std::optional<DirectionCertificate> decreasing_direction(const Matrix& m);
std::optional<DirectionCertificate> increasing_direction(const Matrix& m);
std::optional<DirectionCertificate> unstable_support_vector(const Matrix& m);

/// Embeds a vector indexed by `idx` into R^d with zeros elsewhere.
Vec embed(const Vec& sub, const IndexSet& idx, std::size_t d);

}  // namespace switchcrn
