#include "krasovskii/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace krasovskii::dynamics {

namespace {

constexpr double kMinDelta = 1e-9;  // seconds

void check_dims(const ContinuousDynamics& d) {
    if (d.state_dim <= 0) throw InvariantViolation("ContinuousDynamics: state_dim must be positive");
    if (d.input_dim < 0) throw InvariantViolation("ContinuousDynamics: input_dim must be nonnegative");
    if (!d.f) throw InvariantViolation("ContinuousDynamics: vector field f is required");
}

}  // namespace

SampledSystem::SampledSystem(ContinuousDynamics source, double delta, Scheme scheme)
    : source_(std::move(source)), delta_(delta), scheme_(scheme) {
    check_dims(source_);
    if (!(delta_ >= kMinDelta))
        throw InvariantViolation("SampledSystem: sampling period must be >= 1e-9 s");
}

void SampledSystem::set_step_form(ImplicitStepForm form) {
    if (scheme_ == Scheme::ForwardEuler)
        throw InvariantViolation("SampledSystem: custom step forms require an implicit scheme");
    if (!form.residual || !form.jacobian)
        throw InvariantViolation("SampledSystem: step form needs residual and jacobian");
    custom_ = std::move(form);
}

Vector SampledSystem::step_residual(const Vector& x_k, const Vector& x_next,
                                    const Vector& u_k) const {
    if (custom_.residual) return custom_.residual(x_k, x_next, u_k);
    const Vector dx = (x_next - x_k) / delta_;
    const Vector sx = scheme_ == Scheme::ImplicitMidpoint ? Vector(0.5 * (x_k + x_next)) : x_k;
    return dx - source_.f(sx, u_k);
}

Matrix SampledSystem::step_jacobian(const Vector& x_k, const Vector& x_next,
                                    const Vector& u_k) const {
    if (custom_.jacobian) return custom_.jacobian(x_k, x_next, u_k);
    const Index n = source_.state_dim;
    const Matrix eye = Matrix::Identity(n, n);
    if (scheme_ == Scheme::ForwardEuler) return eye / delta_;
    const Vector sx = 0.5 * (x_k + x_next);
    if (source_.jac_x) return eye / delta_ - 0.5 * source_.jac_x(sx, u_k);
    // fall back to differencing the full residual
    auto res = [&](const Vector& z) { return step_residual(x_k, z, u_k); };
    return numerics::finite_difference_jacobian(res)(x_next);
}

namespace {

void check_index(Index k, Index limit, const char* who) {
    if (k < 0 || k >= limit) throw IndexOutOfRange(std::string(who) + ": index out of range");
}

}  // namespace

Vector seq_delta(const std::vector<Vector>& seq, Index k, double delta) {
    check_index(k, static_cast<Index>(seq.size()) - 1, "seq_delta");
    return (seq[static_cast<std::size_t>(k) + 1] - seq[static_cast<std::size_t>(k)]) / delta;
}

Vector seq_sigma(const std::vector<Vector>& seq, Index k, Scheme scheme) {
    if (scheme == Scheme::ForwardEuler) {
        check_index(k, static_cast<Index>(seq.size()), "seq_sigma");
        return seq[static_cast<std::size_t>(k)];
    }
    check_index(k, static_cast<Index>(seq.size()) - 1, "seq_sigma");
    return 0.5 * (seq[static_cast<std::size_t>(k)] + seq[static_cast<std::size_t>(k) + 1]);
}

Vector delta_op(const Trajectory& traj, Index k) { return seq_delta(traj.states, k, traj.delta); }

Vector sigma_op(const Trajectory& traj, Index k) { return seq_sigma(traj.states, k, traj.scheme); }

Vector delta_input(const Trajectory& traj, Index k) { return seq_delta(traj.inputs, k, traj.delta); }

Vector sigma_input(const Trajectory& traj, Index k) { return seq_sigma(traj.inputs, k, traj.scheme); }

Vector delta_sigma_op(const Trajectory& traj, Index k) {
    if (traj.scheme == Scheme::ForwardEuler) return seq_delta(traj.states, k, traj.delta);
    check_index(k, traj.state_count() - 2, "delta_sigma_op");
    return (traj.states[static_cast<std::size_t>(k) + 2] - traj.states[static_cast<std::size_t>(k)]) /
           (2.0 * traj.delta);
}

Vector midpoint_step(const SampledSystem& sys, const Vector& x_k, const Vector& u_k,
                     const NewtonSettings& settings, NewtonStats* stats) {
    if (sys.scheme() != Scheme::ImplicitMidpoint)
        throw InvariantViolation("midpoint_step: system scheme is not ImplicitMidpoint");
    auto residual = [&](const Vector& z) { return sys.step_residual(x_k, z, u_k); };
    auto jacobian = [&](const Vector& z) { return sys.step_jacobian(x_k, z, u_k); };
    const Vector predictor = x_k + sys.delta() * sys.source().f(x_k, u_k);
    try {
        return numerics::solve_newton(residual, jacobian, predictor, settings, stats);
    } catch (const DomainViolation&) {
        NewtonSettings damped = settings;
        damped.damping = 0.5;
        damped.max_iterations = std::max(settings.max_iterations, 100);
        return numerics::solve_newton(residual, jacobian, x_k, damped, stats);
    }
}

Vector euler_step(const SampledSystem& sys, const Vector& x_k, const Vector& u_k) {
    if (sys.scheme() != Scheme::ForwardEuler)
        throw InvariantViolation("euler_step: system scheme is not ForwardEuler");
    const Vector fx = sys.source().f(x_k, u_k);
    if (!fx.allFinite()) throw Error("euler_step: non-finite vector field value");
    return x_k + sys.delta() * fx;
}

Vector explicit_step(const SampledSystem& sys, const Vector& x_k, const Vector& u_k,
                     const NewtonSettings& settings) {
    return sys.scheme() == Scheme::ForwardEuler ? euler_step(sys, x_k, u_k)
                                                : midpoint_step(sys, x_k, u_k, settings);
}

Trajectory simulate_open_loop(const SampledSystem& sys, const Vector& x0,
                              const std::vector<Vector>& inputs, const NewtonSettings& settings) {
    if (inputs.empty()) throw Error("simulate_open_loop: need at least one input sample");
    Trajectory traj;
    traj.delta = sys.delta();
    traj.scheme = sys.scheme();
    traj.solver_tolerance = settings.tolerance;
    traj.states.reserve(inputs.size() + 1);
    traj.inputs = inputs;
    traj.states.push_back(x0);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        try {
            traj.states.push_back(explicit_step(sys, traj.states.back(), inputs[k], settings));
        } catch (const Error& e) {
            throw StepFailure(static_cast<long>(k), e.what());
        }
    }
    if (sys.source().output) {
        traj.outputs.reserve(inputs.size());
        for (std::size_t k = 0; k < inputs.size(); ++k)
            traj.outputs.push_back(sys.source().output(sigma_op(traj, static_cast<Index>(k))));
    }
    return traj;
}

EquilibriumPair find_equilibrium(const SampledSystem& sys, const Vector& u_star,
                                 const Vector& guess, const NewtonSettings& settings) {
    auto residual = [&](const Vector& x) { return sys.step_residual(x, x, u_star); };
    VectorFn res_fn = residual;
    MatrixFn jac = numerics::finite_difference_jacobian(res_fn);
    if (!sys.has_custom_step() && sys.source().jac_x) {
        // at a constant sequence the residual is -f(x, u*)
        jac = [&sys, &u_star](const Vector& x) { return Matrix(-sys.source().jac_x(x, u_star)); };
    }
    const Vector x_star = numerics::solve_newton(res_fn, jac, guess, settings);
    return {x_star, u_star};
}

Trajectory reference_continuous_simulate(const ContinuousDynamics& ode, const Vector& x0,
                                         double horizon, double fine_delta, double coarse_delta,
                                         const NewtonSettings& settings) {
    if (ode.input_dim != 0)
        throw InvariantViolation("reference_continuous_simulate: expects an autonomous closed-loop ODE");
    if (!(horizon > 0.0) || !(coarse_delta > 0.0))
        throw Error("reference_continuous_simulate: horizon and coarse_delta must be positive");
    const double cap = horizon / 1e6;
    double h = std::max(fine_delta, cap);
    h = std::max(h, kMinDelta);
    // integer number of fine substeps per coarse sample
    const Index per = std::max<Index>(1, static_cast<Index>(std::llround(coarse_delta / h)));
    h = coarse_delta / static_cast<double>(per);

    const Index n_coarse = static_cast<Index>(std::llround(horizon / coarse_delta));
    SampledSystem fine(ode, h, Scheme::ImplicitMidpoint);
    const Vector u_empty(0);

    Trajectory traj;
    traj.delta = coarse_delta;
    traj.scheme = Scheme::ImplicitMidpoint;
    traj.solver_tolerance = settings.tolerance;
    traj.states.push_back(x0);
    Vector x = x0;
    for (Index kc = 0; kc < n_coarse; ++kc) {
        for (Index j = 0; j < per; ++j) {
            try {
                x = midpoint_step(fine, x, u_empty, settings);
            } catch (const Error& e) {
                throw StepFailure(static_cast<long>(kc * per + j), e.what());
            }
        }
        traj.states.push_back(x);
        traj.inputs.push_back(u_empty);
    }
    return traj;
}

namespace {

void append_number(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    line += buf;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    const Index n = traj.states.empty() ? 0 : traj.states.front().size();
    const Index m = traj.inputs.empty() ? 0 : traj.inputs.front().size();
    const Index q = traj.outputs.empty() ? 0 : traj.outputs.front().size();
    std::string header = "k,t";
    for (Index i = 0; i < n; ++i) header += ",x_" + std::to_string(i);
    for (Index i = 0; i < m; ++i) header += ",u_" + std::to_string(i);
    for (Index i = 0; i < q; ++i) header += ",y_" + std::to_string(i);
    out << header << '\n';
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        std::string line = std::to_string(k) + ",";
        append_number(line, static_cast<double>(k) * traj.delta);
        for (Index i = 0; i < n; ++i) {
            line += ',';
            append_number(line, traj.states[k][i]);
        }
        for (Index i = 0; i < m; ++i) {
            line += ',';
            if (k < traj.inputs.size()) append_number(line, traj.inputs[k][i]);
        }
        for (Index i = 0; i < q; ++i) {
            line += ',';
            if (k < traj.outputs.size()) append_number(line, traj.outputs[k][i]);
        }
        out << line << '\n';
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("write_trajectory_csv: cannot open " + path);
    write_trajectory_csv(traj, f);
}

}  // namespace krasovskii::dynamics
