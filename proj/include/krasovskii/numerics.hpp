#pragma once

// Shared dense numerical kernels: Newton root-finding for implicit steps,
// definiteness checks, spectral radius, weighted norms, and fixed-order
// Gauss-Legendre quadrature. All functions are pure and thread-safe.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "krasovskii/errors.hpp"

namespace krasovskii {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

using VectorFn = std::function<Vector(const Vector&)>;
using MatrixFn = std::function<Matrix(const Vector&)>;

namespace numerics {

/// Settings for the damped Newton iteration used by all implicit solves.
struct NewtonSettings {
    double tolerance = 1e-12;  ///< residual sup-norm target
    int max_iterations = 50;
    double damping = 1.0;  ///< step fraction in (0, 1]

    void validate() const {
        if (!(tolerance > 0.0)) throw Error("NewtonSettings: tolerance must be > 0");
        if (max_iterations < 1) throw Error("NewtonSettings: max_iterations must be >= 1");
        if (!(damping > 0.0) || damping > 1.0) throw Error("NewtonSettings: damping must be in (0,1]");
    }
};

/// Optional per-solve diagnostics.
struct NewtonStats {
    int iterations = 0;
    double residual_norm = 0.0;
};

/// Newton iteration on residual(z) = 0 with analytic or finite-difference
/// Jacobian. Returns z with sup-norm of residual(z) <= settings.tolerance.
/// Throws NonConvergence when max_iterations is exhausted and
/// SingularJacobian when the linear solve fails.
Vector solve_newton(const VectorFn& residual, const MatrixFn& jacobian, Vector guess,
                    const NewtonSettings& settings = {}, NewtonStats* stats = nullptr);

/// Central finite-difference Jacobian of a residual map, step 1e-7*(1+|z_i|).
MatrixFn finite_difference_jacobian(const VectorFn& residual);

/// Max modulus of the eigenvalues of a square matrix.
double spectral_radius(const Matrix& A);

/// True iff P is symmetric (1e-12 asymmetry tolerance, relative to the
/// largest entry) and all eigenvalues exceed the 1e-12 floor.
bool is_positive_definite(const Matrix& P);

/// True iff P is symmetric and all eigenvalues >= -1e-12 * scale.
bool is_positive_semidefinite(const Matrix& P);

/// x' P x; dimensions must agree.
double weighted_norm_sq(const Vector& x, const Matrix& P);

/// Nodes and weights on [0, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (2..16) on [0, 1]; exact for
/// polynomials of degree <= 2*order - 1. Rules are cached after first use.
const QuadratureRule& gauss_legendre_rule(int order);

/// Integrate a scalar map over [0, 1] with the fixed-order rule.
double gauss_legendre_integrate(const std::function<double(double)>& f, int order);

}  // namespace numerics
}  // namespace krasovskii
