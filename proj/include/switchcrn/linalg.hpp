// Small dense linear algebra used throughout the library.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace switchcrn {

using Vec = std::vector<double>;
using IndexSet = std::vector<std::size_t>;  ///< sorted, duplicate-free

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const Matrix& other) const = default;

    Matrix transpose() const;
    Matrix submatrix(const IndexSet& idx) const;  ///< principal submatrix
    double max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);

/// Row vector times matrix: (vM)_j = sum_i v_i M_ij.
Vec row_times(const Vec& v, const Matrix& m);
/// Matrix times column vector.
Vec times_col(const Matrix& m, const Vec& x);

double dot(const Vec& a, const Vec& b);
double norm1(const Vec& a);
double norm_inf(const Vec& a);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Returns nullopt when a pivot falls below 1e-12 times the largest input magnitude.
std::optional<Vec> solve(Matrix a, Vec b);

/// Eigenpairs of a symmetric matrix by cyclic Jacobi rotations; column k of `vectors` pairs with values[k].
struct SymmetricEigen {
    Vec values;
    Matrix vectors;
};
SymmetricEigen symmetric_eigen(const Matrix& a);

IndexSet full_set(std::size_t n);
IndexSet support_of(const Vec& v);

std::string format_double(double x);  ///< shortest round-trip decimal

}  // namespace switchcrn
