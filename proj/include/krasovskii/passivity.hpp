#pragma once

// Storage functions and numerical dissipation-inequality auditors for
// Krasovskii, incremental, and shifted passivity, plus the shifted-output
// construction and the strict-KP condition for constant-power loads.
//
// Audits are trajectory-wise numerical witnesses. The audited residual of
//   Delta S_K <= -W_K + v' z      (v_k = Delta_delta u_k)
// is  r_k = Delta S_K + W_K - v'z (+ exogenous term), and a step passes when
//   r_k <= tol * (1 + max term magnitude at step k).

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "krasovskii/dynamics.hpp"

namespace krasovskii::passivity {

using dynamics::Trajectory;

/// Per-step residuals of an audited inequality plus the pass/fail summary.
struct DissipationReport {
    std::vector<Index> steps;       ///< audited step indices
    std::vector<double> residuals;  ///< LHS - RHS per audited step
    std::vector<double> scales;     ///< max term magnitude per audited step
    double tolerance = 0.0;         ///< normalized tolerance the audit ran at
    Index skipped = 0;              ///< boundary steps skipped, not failed

    double max_violation = 0.0;      ///< max signed residual
    double max_normalized = 0.0;     ///< max signed residual / (1 + scale)
    double max_abs_normalized = 0.0; ///< for equality-form audits
    bool satisfied = false;          ///< max_normalized <= tolerance

    void finalize(double tol);
    /// CSV body `k,residual` plus a one-line summary record.
    void write_csv(std::ostream& out) const;
    void write_csv(const std::string& path) const;
};

constexpr double kDefaultAuditTolerance = 1e-9;

/// Scalar/vector evaluators over a trajectory window at step k.
using StepScalarFn = std::function<double(const Trajectory&, Index)>;
using StepVectorFn = std::function<Vector(const Trajectory&, Index)>;

/// Storage function S_K evaluated along a trajectory; eval(traj, k) produces
/// S_K(x_k, u_k, Delta x_k) (or whichever window the storage depends on).
struct StorageFunction {
    StepScalarFn eval;
};

/// Krasovskii supply: passive output z_k = q_delta(sigma x_k, u_k,
/// Delta sigma x_k) and dissipation W_K. The optional exogenous term keeps
/// the audited identity exact across scheduled parameter changes; it is
/// identically zero on constant-parameter segments.
struct SupplyRate {
    StepVectorFn z;
    StepScalarFn W_K;
    StepScalarFn exogenous;  // optional
};

/// Audit Delta S_K <= -W_K + (Delta u)' z over all interior steps (those
/// with x_{k+2} available). Throws WindowTooShort if no step is auditable
/// and Error when the audit tolerance is not >= 10x the trajectory's Newton
/// tolerance.
DissipationReport audit_krasovskii(const Trajectory& traj, const StorageFunction& storage,
                                   const SupplyRate& supply,
                                   double tolerance = kDefaultAuditTolerance);

enum class KrasovskiiCertificate { KrasovskiiPassive, StrictlyKrasovskiiPassive, Inconclusive };

const char* to_string(KrasovskiiCertificate c);

/// Theorem-level certificate for a linear PHS: strictly Krasovskii passive
/// iff H, R both PD; Krasovskii passive if both PSD; Inconclusive otherwise.
KrasovskiiCertificate lph_krasovskii_certificate(const Matrix& H, const Matrix& R);

/// Incremental storage S_I(x, x') with S_I(x, x) = 0.
using IncrementalStorage = std::function<double(const Vector&, const Vector&)>;

/// Audit Delta S_I(x_k, x'_k) <= (u_k - u'_k)'(y_k - y'_k) over two
/// trajectories of the same system (same delta, same lengths, outputs
/// present). Throws MismatchedSystems otherwise.
DissipationReport audit_incremental(const Trajectory& a, const Trajectory& b,
                                    const IncrementalStorage& S_I,
                                    double tolerance = kDefaultAuditTolerance);

/// Explicit step map and storage for the shifted-output construction.
struct ShiftedOutputProblem {
    std::function<Vector(const Vector&, const Vector&)> F_delta;     ///< x_{k+1} = F(x_k, u_k)
    std::function<double(const Vector&, const Vector&)> S_K_hat;     ///< (x, u) -> storage
    /// Optional analytic gradient of u |-> S_K_hat(F_delta(x_k, u), u_star);
    /// central finite differences (step 1e-6 * (1 + |u_i|)) otherwise.
    std::function<Vector(const Vector&, const Vector&, const Vector&)> grad_u;
};

constexpr int kDefaultShiftedQuadratureOrder = 8;

/// Shifted-passivity output
///   y_k = delta * Int_0^1 d/du [S_K_hat(F(x_k, u), u*)]|_{u = s u_k + (1-s) u*} ds
/// evaluated with fixed-order Gauss-Legendre quadrature; exact for storages
/// quadratic in u with order >= 2. Zero when u_k = u_star.
Vector shifted_output(const ShiftedOutputProblem& problem, const Vector& x_k, const Vector& u_k,
                      const Vector& u_star, double delta,
                      int quadrature_order = kDefaultShiftedQuadratureOrder);

/// Krasovskii storage built from an incremental one:
///   S_K_hat(x, u) = S_I(x, F_delta(x, u)) / delta^2.
std::function<double(const Vector&, const Vector&)> construct_kp_from_ip(
    const IncrementalStorage& S_I, std::function<Vector(const Vector&, const Vector&)> F_delta,
    double delta);

/// Strict-KP condition for constant-power loads:
///   G_L - C^2 diag{P_L} diag{q_k o q_{k+2}}^{-1} > 0 (positive definite).
/// Throws NonpositiveCharge unless both charge vectors are element-wise
/// positive.
bool strict_kp_condition_cpl(const Vector& q_k, const Vector& q_k2, const Matrix& G_L,
                             const Vector& C, const Vector& P_L);

}  // namespace krasovskii::passivity
