#include "krasovskii/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace krasovskii::passivity {

void DissipationReport::finalize(double tol) {
    tolerance = tol;
    max_violation = 0.0;
    max_normalized = 0.0;
    max_abs_normalized = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const double r = residuals[i];
        const double norm = r / (1.0 + scales[i]);
        if (first) {
            max_violation = r;
            max_normalized = norm;
            first = false;
        } else {
            max_violation = std::max(max_violation, r);
            max_normalized = std::max(max_normalized, norm);
        }
        max_abs_normalized = std::max(max_abs_normalized, std::abs(norm));
    }
    satisfied = max_normalized <= tol;
}

void DissipationReport::write_csv(std::ostream& out) const {
    out << "k,residual\n";
    char buf[32];
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.15g", residuals[i]);
        out << steps[i] << ',' << buf << '\n';
    }
    std::snprintf(buf, sizeof(buf), "%.15g", max_violation);
    out << "max_violation,tolerance,satisfied\n";
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.15g", tolerance);
    out << buf << ',' << (satisfied ? 1 : 0) << '\n';
}

void DissipationReport::write_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw Error("DissipationReport: cannot open " + path);
    write_csv(f);
}

namespace {

void check_audit_tolerance(const Trajectory& traj, double tolerance) {
    if (traj.solver_tolerance > 0.0 && tolerance < 10.0 * traj.solver_tolerance)
        throw Error("audit tolerance must be at least 10x the trajectory's Newton tolerance");
}

}  // namespace

DissipationReport audit_krasovskii(const Trajectory& traj, const StorageFunction& storage,
                                   const SupplyRate& supply, double tolerance) {
    if (!storage.eval || !supply.z || !supply.W_K)
        throw Error("audit_krasovskii: storage and supply evaluators are required");
    check_audit_tolerance(traj, tolerance);
    // z_k and Delta S_K need x_{k+2} and u_{k+1}: interior steps only
    const Index last = std::min<Index>(traj.state_count() - 3, traj.step_count() - 2);
    if (last < 0) throw WindowTooShort("audit_krasovskii: trajectory too short to audit any step");

    DissipationReport report;
    report.skipped = traj.step_count() - (last + 1);
    for (Index k = 0; k <= last; ++k) {
        const double dS = (storage.eval(traj, k + 1) - storage.eval(traj, k)) / traj.delta;
        const double W = supply.W_K(traj, k);
        const Vector v = dynamics::delta_input(traj, k);
        const double vz = v.dot(supply.z(traj, k));
        const double exo = supply.exogenous ? supply.exogenous(traj, k) : 0.0;
        report.steps.push_back(k);
        report.residuals.push_back(dS + W - vz + exo);
        report.scales.push_back(std::max({std::abs(dS), std::abs(W), std::abs(vz), std::abs(exo)}));
    }
    report.finalize(tolerance);
    return report;
}

const char* to_string(KrasovskiiCertificate c) {
    switch (c) {
        case KrasovskiiCertificate::KrasovskiiPassive: return "KrasovskiiPassive";
        case KrasovskiiCertificate::StrictlyKrasovskiiPassive: return "StrictlyKrasovskiiPassive";
        case KrasovskiiCertificate::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

KrasovskiiCertificate lph_krasovskii_certificate(const Matrix& H, const Matrix& R) {
    if (numerics::is_positive_definite(H) && numerics::is_positive_definite(R))
        return KrasovskiiCertificate::StrictlyKrasovskiiPassive;
    if (numerics::is_positive_semidefinite(H) && numerics::is_positive_semidefinite(R))
        return KrasovskiiCertificate::KrasovskiiPassive;
    return KrasovskiiCertificate::Inconclusive;
}

DissipationReport audit_incremental(const Trajectory& a, const Trajectory& b,
                                    const IncrementalStorage& S_I, double tolerance) {
    if (a.delta != b.delta || a.scheme != b.scheme || a.state_count() != b.state_count() ||
        a.step_count() != b.step_count())
        throw MismatchedSystems("audit_incremental: trajectories differ in delta, scheme or length");
    if (a.outputs.size() != a.inputs.size() || b.outputs.size() != b.inputs.size())
        throw MismatchedSystems("audit_incremental: trajectories need output sequences");
    check_audit_tolerance(a, tolerance);
    const Index last = a.step_count() - 1;
    if (last < 0) throw WindowTooShort("audit_incremental: empty trajectory");

    DissipationReport report;
    for (Index k = 0; k <= last; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double s_now = S_I(a.states[i], b.states[i]);
        const double s_next = S_I(a.states[i + 1], b.states[i + 1]);
        const double dS = (s_next - s_now) / a.delta;
        const double supply = (a.inputs[i] - b.inputs[i]).dot(a.outputs[i] - b.outputs[i]);
        report.steps.push_back(k);
        report.residuals.push_back(dS - supply);
        report.scales.push_back(std::max(std::abs(dS), std::abs(supply)));
    }
    report.finalize(tolerance);
    return report;
}

Vector shifted_output(const ShiftedOutputProblem& problem, const Vector& x_k, const Vector& u_k,
                      const Vector& u_star, double delta, int quadrature_order) {
    if (u_k.size() != u_star.size())
        throw DimensionMismatch("shifted_output: u_k and u_star dims differ");
    auto gradient = [&](const Vector& u) -> Vector {
        if (problem.grad_u) return problem.grad_u(x_k, u, u_star);
        // central differences of g(u) = S_K_hat(F(x_k, u), u_star)
        Vector g(u.size());
        Vector up = u, um = u;
        for (Index j = 0; j < u.size(); ++j) {
            const double h = 1e-6 * (1.0 + std::abs(u[j]));
            up[j] = u[j] + h;
            um[j] = u[j] - h;
            const double fp = problem.S_K_hat(problem.F_delta(x_k, up), u_star);
            const double fm = problem.S_K_hat(problem.F_delta(x_k, um), u_star);
            g[j] = (fp - fm) / (2.0 * h);
            up[j] = u[j];
            um[j] = u[j];
        }
        return g;
    };
    const auto& rule = numerics::gauss_legendre_rule(quadrature_order);
    Vector y = Vector::Zero(u_k.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = rule.nodes[i];
        const Vector u = s * u_k + (1.0 - s) * u_star;
        y += rule.weights[i] * gradient(u);
    }
    y *= delta;
    if (!y.allFinite()) throw Error("shifted_output: non-finite quadrature value");
    return y;
}

std::function<double(const Vector&, const Vector&)> construct_kp_from_ip(
    const IncrementalStorage& S_I, std::function<Vector(const Vector&, const Vector&)> F_delta,
    double delta) {
    return [S_I, F_delta = std::move(F_delta), delta](const Vector& x, const Vector& u) {
        return S_I(x, F_delta(x, u)) / (delta * delta);
    };
}

bool strict_kp_condition_cpl(const Vector& q_k, const Vector& q_k2, const Matrix& G_L,
                             const Vector& C, const Vector& P_L) {
    if (q_k.size() != q_k2.size() || q_k.size() != C.size() || q_k.size() != P_L.size() ||
        G_L.rows() != q_k.size() || G_L.cols() != q_k.size())
        throw DimensionMismatch("strict_kp_condition_cpl: inconsistent dimensions");
    if ((q_k.array() <= 0.0).any() || (q_k2.array() <= 0.0).any())
        throw NonpositiveCharge("strict_kp_condition_cpl: charges must be element-wise positive");
    const Vector cpl = C.array().square() * P_L.array() / (q_k.array() * q_k2.array());
    const Matrix candidate = G_L - Matrix(cpl.asDiagonal());
    return numerics::is_positive_definite(candidate);
}

}  // namespace krasovskii::passivity
