#include "krasovskii/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace krasovskii::numerics {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_square(const Matrix& A, const char* who) {
    if (A.rows() != A.cols()) throw NotSquare(std::string(who) + ": matrix is not square");
}

// Symmetry check relative to the largest entry magnitude.
void require_symmetric(const Matrix& P, const char* who) {
    require_square(P, who);
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    const double asym = (P - P.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) throw NotSymmetric(std::string(who) + ": matrix is not symmetric");
}

}  // namespace

Vector solve_newton(const VectorFn& residual, const MatrixFn& jacobian, Vector guess,
                    const NewtonSettings& settings, NewtonStats* stats) {
    settings.validate();
    Vector z = std::move(guess);
    Vector r = residual(z);
    if (!all_finite(r)) throw Error("solve_newton: non-finite residual at initial guess");
    double norm = r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();

    int it = 0;
    for (; it < settings.max_iterations; ++it) {
        if (norm <= settings.tolerance) break;
        Matrix J = jacobian(z);
        if (J.rows() != r.size() || J.cols() != z.size())
            throw DimensionMismatch("solve_newton: Jacobian shape does not match residual/state");
        Eigen::FullPivLU<Matrix> lu(J);
        if (!lu.isInvertible()) throw SingularJacobian(it);
        z += settings.damping * lu.solve(-r);
        r = residual(z);
        if (!all_finite(r)) throw Error("solve_newton: non-finite residual during iteration");
        norm = r.cwiseAbs().maxCoeff();
    }
    if (stats) {
        stats->iterations = it;
        stats->residual_norm = norm;
    }
    if (norm > settings.tolerance) throw NonConvergence(it, norm);
    return z;
}

MatrixFn finite_difference_jacobian(const VectorFn& residual) {
    return [residual](const Vector& z) {
        const Vector r0 = residual(z);
        Matrix J(r0.size(), z.size());
        Vector zp = z, zm = z;
        for (Index j = 0; j < z.size(); ++j) {
            const double h = 1e-7 * (1.0 + std::abs(z[j]));
            zp[j] = z[j] + h;
            zm[j] = z[j] - h;
            J.col(j) = (residual(zp) - residual(zm)) / (2.0 * h);
            zp[j] = z[j];
            zm[j] = z[j];
        }
        return J;
    };
}

double spectral_radius(const Matrix& A) {
    require_square(A, "spectral_radius");
    if (!A.allFinite()) throw Error("spectral_radius: non-finite entries");
    if (A.rows() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_positive_definite(const Matrix& P) {
    require_symmetric(P, "is_positive_definite");
    if (P.rows() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Matrix> es(P, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > 1e-12;
}

bool is_positive_semidefinite(const Matrix& P) {
    require_symmetric(P, "is_positive_semidefinite");
    if (P.rows() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Matrix> es(P, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    return es.eigenvalues().minCoeff() >= -1e-12 * scale;
}

double weighted_norm_sq(const Vector& x, const Matrix& P) {
    if (P.rows() != P.cols() || P.rows() != x.size())
        throw DimensionMismatch("weighted_norm_sq: dim(x) must equal dim(P)");
    return x.dot(P * x);
}

namespace {

// Legendre nodes on [-1, 1] by Newton iteration on P_n, then mapped to [0, 1].
QuadratureRule make_rule(int n) {
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]; store ascending in s
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
    return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre_rule(int order) {
    if (order < 2 || order > 16) throw Error("gauss_legendre_rule: order must be in [2, 16]");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
    return it->second;
}

double gauss_legendre_integrate(const std::function<double(double)>& f, int order) {
    const QuadratureRule& rule = gauss_legendre_rule(order);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = f(rule.nodes[i]);
        if (!std::isfinite(v)) throw Error("gauss_legendre_integrate: non-finite integrand value");
        sum += rule.weights[i] * v;
    }
    return sum;
}

}  // namespace krasovskii::numerics
