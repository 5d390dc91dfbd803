#pragma once

// Sampled discrete-time system abstraction: forward-Euler and implicit-
// midpoint discretizations of a continuous vector field, the forward
// difference and midpoint shift operators on sampled sequences, and
// open-loop trajectory generation.
//
// The one-step relation is (x_{k+1} - x_k)/delta = f_delta(sigma x_k, u_k).
// Structure-preserving discretizations whose right-hand side is not a plain
// function of the state midpoint (the buck network) install a custom step
// residual; the shift-operator semantics are unchanged.

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "krasovskii/numerics.hpp"

namespace krasovskii::dynamics {

using numerics::NewtonSettings;
using numerics::NewtonStats;

/// A continuous-time vector field dx/dt = f(x, u) with optional analytic
/// Jacobians and an optional output map. The discrete output convention is
/// y_k = output(sigma_delta x_k).
struct ContinuousDynamics {
    Index state_dim = 0;
    Index input_dim = 0;
    std::function<Vector(const Vector&, const Vector&)> f;
    std::function<Matrix(const Vector&, const Vector&)> jac_x;  // n x n, optional
    std::function<Matrix(const Vector&, const Vector&)> jac_u;  // n x m, optional

    Index output_dim = 0;
    std::function<Vector(const Vector&)> output;  // optional
};

enum class Scheme { ForwardEuler, ImplicitMidpoint };

/// Custom one-step relation: residual(x_k, x_{k+1}, u_k) = 0 defines the
/// step, jacobian is d(residual)/d(x_{k+1}).
struct ImplicitStepForm {
    std::function<Vector(const Vector&, const Vector&, const Vector&)> residual;
    std::function<Matrix(const Vector&, const Vector&, const Vector&)> jacobian;
};

class SampledSystem {
public:
    SampledSystem(ContinuousDynamics source, double delta, Scheme scheme);

    const ContinuousDynamics& source() const { return source_; }
    double delta() const { return delta_; }
    Scheme scheme() const { return scheme_; }

    /// Install a structure-preserving step relation (implicit schemes only).
    void set_step_form(ImplicitStepForm form);
    bool has_custom_step() const { return static_cast<bool>(custom_.residual); }

    /// Residual of the one-step relation; zero at a valid step.
    Vector step_residual(const Vector& x_k, const Vector& x_next, const Vector& u_k) const;

    /// d(step_residual)/d(x_next); analytic when available, else central
    /// finite differences.
    Matrix step_jacobian(const Vector& x_k, const Vector& x_next, const Vector& u_k) const;

private:
    ContinuousDynamics source_;
    double delta_;
    Scheme scheme_;
    ImplicitStepForm custom_;
};

/// Indexed state/input/output sequences at sampling instants. States run
/// x_0..x_N, inputs u_0..u_{N-1}; outputs, when present, y_0..y_{N-1}.
struct Trajectory {
    double delta = 0.0;
    Scheme scheme = Scheme::ImplicitMidpoint;
    double solver_tolerance = 0.0;  ///< Newton tolerance the steps satisfy (0 = unknown)
    std::vector<Vector> states;
    std::vector<Vector> inputs;
    std::vector<Vector> outputs;

    Index step_count() const { return static_cast<Index>(inputs.size()); }
    Index state_count() const { return static_cast<Index>(states.size()); }
};

/// (x_{k+1} - x_k)/delta.
Vector delta_op(const Trajectory& traj, Index k);

/// Midpoint (x_k + x_{k+1})/2 for ImplicitMidpoint, x_k for ForwardEuler.
Vector sigma_op(const Trajectory& traj, Index k);

/// Same operators on the input sequence.
Vector delta_input(const Trajectory& traj, Index k);
Vector sigma_input(const Trajectory& traj, Index k);

/// Delta applied to the sigma sequence: (x_{k+2} - x_k)/(2 delta) for the
/// midpoint scheme. Needs x_{k+2}.
Vector delta_sigma_op(const Trajectory& traj, Index k);

/// Generic sequence operators (function-shift semantics).
Vector seq_delta(const std::vector<Vector>& seq, Index k, double delta);
Vector seq_sigma(const std::vector<Vector>& seq, Index k, Scheme scheme);

/// One implicit-midpoint step; the Newton initial guess is the forward-Euler
/// predictor. A DomainViolation during the solve is retried once with
/// damping 0.5 before propagating.
Vector midpoint_step(const SampledSystem& sys, const Vector& x_k, const Vector& u_k,
                     const NewtonSettings& settings = {}, NewtonStats* stats = nullptr);

/// One forward-Euler step x_{k+1} = x_k + delta * f(x_k, u_k).
Vector euler_step(const SampledSystem& sys, const Vector& x_k, const Vector& u_k);

/// Dispatch on the scheme; this is the explicit step map F_delta.
Vector explicit_step(const SampledSystem& sys, const Vector& x_k, const Vector& u_k,
                     const NewtonSettings& settings = {});

/// Iterate the one-step relation over the given input sequence.
Trajectory simulate_open_loop(const SampledSystem& sys, const Vector& x0,
                              const std::vector<Vector>& inputs,
                              const NewtonSettings& settings = {});

struct EquilibriumPair {
    Vector x_star;
    Vector u_star;
};

/// Solve f_delta(sigma x*, u*) = 0 for x* from the given guess (a constant
/// sequence is then a solution of the one-step relation).
EquilibriumPair find_equilibrium(const SampledSystem& sys, const Vector& u_star,
                                 const Vector& guess, const NewtonSettings& settings = {});

/// Fine-step implicit-midpoint reference for an autonomous closed-loop ODE
/// (input_dim 0), resampled onto the coarse grid of width coarse_delta.
/// Produces the continuous-time curves of the comparison figures.
Trajectory reference_continuous_simulate(const ContinuousDynamics& ode, const Vector& x0,
                                         double horizon, double fine_delta, double coarse_delta,
                                         const NewtonSettings& settings = {});

/// CSV export: header k,t,x_0..x_{n-1},u_0..u_{m-1}[,y_0..], t = k*delta,
/// 15 significant digits. The final row has no input/output samples; those
/// fields are left empty.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace krasovskii::dynamics
