#pragma once

#include <Eigen/Dense>

#include "hcgibbs/boundary.hpp"

namespace hcgibbs {

enum class KernelKind { TranslationInvariant, TwoStepProduct };

/// Transition kernel truncated to spins [-N, N] (dense position i+N). Only row 0 is
/// distinctive; every row i ≠ 0 equals one shared row, so storage is O(N).
class TransitionKernel {
public:
    TransitionKernel(KernelKind kind, long truncation, Eigen::VectorXd row_zero, Eigen::VectorXd shared_row);

    KernelKind kind() const noexcept { return kind_; }
    long truncation() const noexcept { return truncation_; }
    Eigen::Index size() const noexcept { return row_zero_.size(); }
    Eigen::Index position(long spin) const noexcept { return static_cast<Eigen::Index>(spin + truncation_); }

    const Eigen::VectorXd& row_zero() const noexcept { return row_zero_; }
    const Eigen::VectorXd& shared_row() const noexcept { return shared_row_; }
    const Eigen::VectorXd& row(long i) const noexcept { return i == 0 ? row_zero_ : shared_row_; }
    double operator()(long i, long j) const { return row(i)(position(j)); }

    /// x·P for a row vector x over the truncated index set.
    Eigen::VectorXd left_multiply(const Eigen::VectorXd& x) const;

    /// Dense (2N+1)² form, for small N only.
    Eigen::MatrixXd dense() const;

private:
    KernelKind kind_;
    long truncation_;
    Eigen::VectorXd row_zero_;
    Eigen::VectorXd shared_row_;
};

/// Single-step row 0 over [-N, N]: 1/(1+S_N) at 0 and λ_j z_j/(1+S_N) elsewhere, with
/// S_N = Σ_{0<|l|<=N} λ_l z_l.
Eigen::VectorXd single_step_row(const BoundaryLaw& law, long truncation);

/// Upper bound on Σ_{|j|>N} λ_j z_j.
double truncation_tail(const BoundaryLaw& law, long truncation);

/// Smallest N whose truncation_tail is <= tol.
long required_truncation(const BoundaryLaw& law, double tol);

/// Throws TruncationError (carrying the minimal N) when truncation_tail(N) > tol.
TransitionKernel build_ti_kernel(const BoundaryLaw& law, long truncation, double tol);

/// P = P_even·P_odd: rows i ≠ 0 are the odd-law row; row 0 is c_{0i}.
TransitionKernel build_periodic_kernel(const PeriodicLawPair& pair, long truncation, double tol);

/// Closed-form stationary vector over ℤ: x_0 = (1+S)/(1+S+S̃), x_j = λ_j ζ_j/(1+S+S̃), where
/// ζ is the law entering the kernel's shared row. For TI, S̃ = S and ζ = z.
class StationaryDist {
public:
    StationaryDist(BoundaryLaw driving_law, double S, double S_tilde);

    double S() const noexcept { return S_; }
    double S_tilde() const noexcept { return S_tilde_; }

    double operator()(long j) const;

    /// Restriction to [-N, N], renormalised to total mass 1.
    Eigen::VectorXd truncated(long truncation) const;

private:
    BoundaryLaw law_;
    double S_;
    double S_tilde_;
    double normaliser_;
};

/// Σ_l λ_l z_l with certified tail.
SeriesSum activity_weighted_sum(const BoundaryLaw& law, double tol);

StationaryDist stationary_ti(const BoundaryLaw& law, double tol);

/// Stationary law of build_periodic_kernel(pair), i.e. the odd-parity marginal. The even
/// marginal is stationary_periodic(pair.swapped()).
StationaryDist stationary_periodic(const PeriodicLawPair& pair, double tol);

/// ‖X·P − X‖∞ over P's index set (X restricted and renormalised first).
double stationarity_residual(const StationaryDist& X, const TransitionKernel& P);
double stationarity_residual(const Eigen::VectorXd& X, const TransitionKernel& P);

}  // namespace hcgibbs
