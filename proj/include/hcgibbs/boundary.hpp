#pragma once

#include <map>
#include <optional>

#include "hcgibbs/activities.hpp"

namespace hcgibbs {

/// One-parity boundary law on the star graph, normalised at 0: z(0) = 1 and
/// z(i) = λ_i/(1+A)^k for i ≠ 0. A is the sum fed through the k successors; for the
/// translation-invariant root it coincides with Σ_j z(j).
class BoundaryLaw {
public:
    static BoundaryLaw from_sum(ActivitySpec spec, int k, double A);

    /// Synthetic law z(j) = scale·|j|^{-exponent} with no activity sequence behind it.
    static BoundaryLaw power_law(int k, double scale, double exponent);

    /// Copy with z(i) shifted by delta (i ≠ 0).
    BoundaryLaw with_perturbation(long i, double delta) const;

    double z(long i) const;
    double operator()(long i) const { return z(i); }

    int k() const noexcept { return k_; }
    double A() const noexcept { return A_; }
    /// (1+A)^k
    double denominator() const noexcept { return denominator_; }

    bool synthetic() const noexcept { return !spec_.has_value(); }
    /// Throws DomainError for synthetic laws.
    const ActivitySpec& spec() const;

    const std::map<long, double>& perturbations() const noexcept { return perturbations_; }

    /// Upper bound on sup_{|j|>n} z(j).
    double tail_sup(long n) const;

    /// z viewed as a weight sequence for sum_weighted.
    Weights as_weights() const;

    struct PowerTail {
        double scale;
        double exponent;
    };
    const std::optional<PowerTail>& power_tail() const noexcept { return power_; }

private:

    BoundaryLaw() = default;

    std::optional<ActivitySpec> spec_;
    std::optional<PowerTail> power_;
    int k_ = 2;
    double A_ = 0.0;
    double denominator_ = 1.0;
    std::map<long, double> perturbations_;
};

/// Two-periodic laws: even vertices carry the law built from B (Σ = A), odd vertices the
/// law built from A (Σ = B). swapped() exchanges the parities (μ1 ↔ μ2).
struct PeriodicLawPair {
    BoundaryLaw even;
    BoundaryLaw odd;
    double A;
    double B;

    PeriodicLawPair swapped() const { return {odd, even, B, A}; }
};

PeriodicLawPair make_periodic_pair(const ActivitySpec& spec, int k, double A, double B);

BoundaryLaw boundary_law_from_A(const ActivitySpec& spec, int k, double A);

/// sup over a probe set (|i| <= 64, perturbed indices, 16 fixed pseudo-random large
/// indices) of |z_i - λ_i/(1+Σ_j ζ_j)^k|, ζ the partner law (itself for TI).
double consistency_residual(const BoundaryLaw& law, double tol);
double consistency_residual(const PeriodicLawPair& pair, double tol);

struct Normalisability {
    bool normalisable = false;
    /// Σ_j z(j)^{(k+1)/k} over j ≠ 0 (lower bound), +inf when divergent.
    double power_sum = 0.0;
    double tail_bound = 0.0;
};

Normalisability normalisability_check(const BoundaryLaw& law, double tol);

/// Σ_{j≠0} z(j) with certified tail. Throws DivergenceError when the sum does not exist.
SeriesSum law_sum(const BoundaryLaw& law, double tol);

}  // namespace hcgibbs
