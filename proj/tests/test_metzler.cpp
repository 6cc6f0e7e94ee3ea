#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "switchcrn/gallery.hpp"
#include "switchcrn/metzler.hpp"
#include "switchcrn/mixing.hpp"

using namespace switchcrn;

namespace {

Matrix random_metzler(std::mt19937_64& rng, std::size_t d, double sparsity = 0.3) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::bernoulli_distribution zero(sparsity);
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double x = u(rng);
            if (i != j) x = zero(rng) ? 0.0 : std::max(0.0, x);
            m(i, j) = x;
        }
    return m;
}

// largest real eigenvalue from Eigen's general eigensolver
double eigen_abscissa(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> es(e, false);
    double best = -INFINITY;
    for (int k = 0; k < es.eigenvalues().size(); ++k) best = std::max(best, es.eigenvalues()(k).real());
    return best;
}

// characteristic polynomial by Faddeev-LeVerrier, then the largest real root by bisection
double charpoly_abscissa(const Matrix& a) {
    const std::size_t n = a.rows();
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    Matrix mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix next = a * mk;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        mk = next;
        Matrix am = a * mk;
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / double(k);
    }
    auto p = [&](double x) {
        double v = 0.0;
        for (std::size_t k = n + 1; k-- > 0;) v = v * x + c[k];
        return v;
    };
    double bound = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) bound += std::fabs(a(i, j));
    // scan down from the bound for the first sign change, then bisect
    const int steps = 20000;
    double hi = bound, phi = p(hi);
    for (int s = 1; s <= steps; ++s) {
        double lo = bound - 2.0 * bound * s / steps;
        double plo = p(lo);
        if (plo == 0.0) return lo;
        if ((plo < 0) != (phi < 0)) {
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi), pm = p(mid);
                if ((pm < 0) == (phi < 0)) {
                    hi = mid;
                    phi = pm;
                } else {
                    lo = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        hi = lo;
        phi = plo;
    }
    return -bound;
}

bool upper_block_triangular(const Matrix& m, const FrobeniusForm& f) {
    std::vector<std::size_t> rank(m.rows());
    for (std::size_t b = 0; b < f.blocks.size(); ++b)
        for (auto i : f.blocks[b]) rank[i] = b;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0 && rank[i] > rank[j]) return false;
    return true;
}

}  // namespace

TEST_CASE("Metzler predicate") {
    CHECK(is_metzler(Matrix{{-2, 1}, {1, -2}}));
    CHECK(is_metzler(Matrix::identity(3)));
    CHECK_FALSE(is_metzler(Matrix{{0, -1}, {0, 0}}));
}

TEST_CASE("Frobenius normal form") {
    CHECK(frobenius_form(Matrix{{-1, 2}, {3, -1}}).blocks.size() == 1);
    FrobeniusForm f = frobenius_form(Matrix{{-1, 0}, {0, 1}});
    CHECK(f.blocks.size() == 2);
    Matrix block_diag{{-1, 1, 0, 0}, {1, -1, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 2}};
    f = frobenius_form(block_diag);
    REQUIRE(f.blocks.size() == 2);
    CHECK(f.blocks[0].size() == 2);
    CHECK(f.blocks[1].size() == 2);
    Matrix chain{{-1, 1, 0}, {0, -1, 1}, {0, 0, -1}};
    f = frobenius_form(chain);
    CHECK(f.blocks.size() == 3);
    CHECK(upper_block_triangular(chain, f));
}

TEST_CASE("spectral abscissa examples") {
    for (double eps : {0.1, 0.25, 0.5, 0.9}) {
        Matrix m1 = linearize(build("ex4.1", {{"eps", eps}}).environment(0)).matrix;
        CHECK(spectral_abscissa(m1) == doctest::Approx(-2.0 + 2.0 * std::sqrt(1.0 + eps - eps * eps)).epsilon(1e-12));
    }
    CHECK(spectral_abscissa(Matrix{{-1, 2}, {2, -1}}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spectral_abscissa(Matrix{{-3}}) == -3.0);
    CHECK_THROWS_AS(spectral_abscissa(Matrix{{0, -1}, {0, 0}}), std::invalid_argument);
}

TEST_CASE("decreasing direction") {
    auto c = decreasing_direction(Matrix{{-2, 1}, {1, -2}});
    REQUIRE(c.has_value());
    CHECK(c->v[0] == doctest::Approx(1.0));
    CHECK(c->v[1] == doctest::Approx(1.0));
    CHECK(c->margin == doctest::Approx(1.0));
    c = decreasing_direction(Matrix{{-1}});
    REQUIRE(c.has_value());
    CHECK(c->v[0] == doctest::Approx(1.0));
    CHECK_FALSE(decreasing_direction(Matrix{{-1, 2}, {2, -1}}).has_value());
}

TEST_CASE("increasing direction") {
    const double eps = 0.5;
    Matrix m1 = linearize(build("ex4.1", {{"eps", eps}}).environment(0)).matrix;
    auto c = increasing_direction(m1);
    REQUIRE(c.has_value());
    Vec vm = row_times(c->v, m1);
    double r = -2.0 + 2.0 * std::sqrt(1.0 + eps - eps * eps);
    for (int k = 0; k < 2; ++k) CHECK(vm[k] == doctest::Approx(r * c->v[k]).epsilon(1e-9));
    c = increasing_direction(Matrix{{2}});
    REQUIRE(c.has_value());
    CHECK(c->v[0] == doctest::Approx(1.0));
    CHECK(c->margin == doctest::Approx(2.0));
    CHECK_FALSE(increasing_direction(Matrix{{-1, 0}, {0, 1}}).has_value());
}

TEST_CASE("unstable support vector") {
    auto c = unstable_support_vector(Matrix{{-1, 0}, {0, 1}});
    REQUIRE(c.has_value());
    CHECK(c->support == IndexSet{1});
    CHECK(c->v[0] == 0.0);
    CHECK(c->v[1] > 0.0);
    c = unstable_support_vector(Matrix{{-1, 2}, {2, -1}});
    REQUIRE(c.has_value());
    CHECK(c->support == IndexSet{0, 1});
    CHECK(c->v[0] == doctest::Approx(c->v[1]).epsilon(1e-9));
    Vec vm = row_times(c->v, Matrix{{-1, 2}, {2, -1}});
    CHECK(vm[0] == doctest::Approx(c->v[0]).epsilon(1e-9));
    CHECK_FALSE(unstable_support_vector(Matrix{{-2, 1}, {1, -2}}).has_value());
}

TEST_CASE("random Metzler equivalences") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = dim(rng);
        Matrix m = random_metzler(rng, d);
        const double a = spectral_abscissa(m);
        CHECK(a == doctest::Approx(eigen_abscissa(m)).epsilon(1e-8).scale(1.0));
        if (d <= 4) CHECK(a == doctest::Approx(charpoly_abscissa(m)).epsilon(1e-7).scale(1.0));
        if (std::fabs(a) < 1e-6) continue;  // too close to the boundary to compare signs
        ++checked;
        auto dec = decreasing_direction(m);
        auto inc = increasing_direction(m);
        auto uns = unstable_support_vector(m);
        CHECK(dec.has_value() == (a < 0));
        CHECK(uns.has_value() == (a > 0));
        bool all_blocks_unstable = true;
        for (const IndexSet& b : frobenius_form(m).blocks)
            all_blocks_unstable = all_blocks_unstable && spectral_abscissa(m.submatrix(b)) > kStabilityTol;
        CHECK(inc.has_value() == all_blocks_unstable);
        for (const auto* c : {&dec, &inc, &uns}) {
            if (!c->has_value()) continue;
            CHECK((*c)->margin > 0.0);
            CHECK(verify_certificate(**c, m));
        }
        CHECK(upper_block_triangular(m, frobenius_form(m)));
    }
    CHECK(checked > 900);
}

TEST_CASE("principal submatrices never exceed the abscissa") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = dim(rng);
        Matrix m = random_metzler(rng, d);
        const double a = spectral_abscissa(m);
        for (unsigned mask = 1; mask + 1 < (1u << d); ++mask) {
            IndexSet idx;
            for (std::size_t k = 0; k < d; ++k)
                if (mask & (1u << k)) idx.push_back(k);
            CHECK(spectral_abscissa(m.submatrix(idx)) <= a + 1e-9);
        }
    }
}

TEST_CASE("abscissa is permutation invariant") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 4;
        Matrix m = random_metzler(rng, d);
        std::vector<std::size_t> p(d);
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        Matrix pm(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) pm(i, j) = m(p[i], p[j]);
        CHECK(spectral_abscissa(pm) == doctest::Approx(spectral_abscissa(m)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("embed places entries by index") {
    CHECK(embed({2.0, 3.0}, {1, 3}, 4) == Vec{0.0, 2.0, 0.0, 3.0});
}
