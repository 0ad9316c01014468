#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hcgibbs/activities.hpp"

namespace hcgibbs {

inline constexpr double kDefaultRootTol = 1e-12;

/// Number of root-solver entries (TI, fixed points of h, periodic pair) so far.
std::uint64_t root_solver_calls() noexcept;

/// Λ_cr(k) = k^k / (k-1)^{k+1}. Throws DomainError for k < 2.
double critical_lambda(int k);

/// f(x) = Λ/(1+x)^k; its fixed point is the translation-invariant sum A0, and h = f∘f
/// carries the two-periodic pairs.
double f_map(int k, double Lambda, double x);
double h_map(int k, double Lambda, double x);

/// The unique A0 > 0 with A0(1+A0)^k = Λ, to |residual| <= tol·max(1,Λ).
double solve_translation_invariant(int k, double Lambda, double tol = kDefaultRootTol);

/// All fixed points of h on [h(0), Λ], ascending: one for Λ <= Λ_cr, three above it.
std::vector<double> fixed_points_of_h(int k, double Lambda, double tol = kDefaultRootTol);

/// Non-diagonal solution of A(1+B)^k = B(1+A)^k = Λ with low < high.
struct PeriodicPair {
    double low;
    double high;
};

std::optional<PeriodicPair> solve_two_periodic(int k, double Lambda, double tol = kDefaultRootTol);

/// k = 2 closed form ((Λ-2 ∓ √(Λ(Λ-4)))/2). Throws DomainError for Λ <= 4.
PeriodicPair closed_form_pair_k2(double Lambda);

enum class Regime { NoMeasure, UniqueTI, ThreePeriodic };

const char* to_string(Regime r) noexcept;

struct PhaseReport {
    int k = 2;
    /// +inf when the activity series diverges.
    double Lambda = 0.0;
    double Lambda_cr = 0.0;
    Regime regime = Regime::NoMeasure;
    std::optional<double> A0;
    std::optional<PeriodicPair> pair;
    /// |A0(1+A0)^k - Λ|
    std::optional<double> residual_A0;
    /// max of |A_low(1+A_high)^k - Λ| and |A_high(1+A_low)^k - Λ|
    std::optional<double> residual_pair;
    /// Fixed points of h (empty for NoMeasure).
    std::vector<double> fixed_points;
};

/// Regime classification; a divergent total short-circuits to NoMeasure without solving.
PhaseReport classify(int k, const ActivityTotal& total, double tol = kDefaultRootTol);

}  // namespace hcgibbs
