#pragma once

// Seeded random generators for randomized verification suites and tests.
// Distributions are built on raw mt19937_64 draws so sequences are identical
// across standard library implementations.

#include <cmath>
#include <cstdint>
#include <random>

#include "krasovskii/numerics.hpp"

namespace krasovskii {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    Vector vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    Matrix matrix(Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) m(i, j) = normal();
        return m;
    }

    /// Symmetric PD matrix with eigenvalues uniform in [lo, hi].
    Matrix spd(Index n, double lo, double hi) {
        const Matrix q = orthogonal(n);
        Vector eigs(n);
        for (Index i = 0; i < n; ++i) eigs[i] = uniform(lo, hi);
        return q * eigs.asDiagonal() * q.transpose();
    }

    Matrix skew(Index n) {
        const Matrix s = matrix(n, n);
        return 0.5 * (s - s.transpose());
    }

    Matrix orthogonal(Index n) {
        const Matrix g = matrix(n, n);
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ();
        // fix signs so the factorization is unique
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Index i = 0; i < n; ++i)
            if (r(i, i) < 0) q.col(i) *= -1.0;
        return q;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace krasovskii
