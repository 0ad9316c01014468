#include "hcgibbs/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "hcgibbs/errors.hpp"

namespace hcgibbs {

namespace {

constexpr long kProbeRadius = 64;
constexpr int kRandomProbes = 16;
constexpr long kPowerSumBudget = 20'000'000;

std::vector<long> probe_indices(const BoundaryLaw& law) {
    std::vector<long> idx;
    for (long i = -kProbeRadius; i <= kProbeRadius; ++i) {
        if (i != 0) idx.push_back(i);
    }
    for (const auto& kv : law.perturbations()) idx.push_back(kv.first);
    std::mt19937_64 rng(0x5eedb0da);
    std::uniform_int_distribution<long> mag(kProbeRadius + 1, 1'000'000);
    for (int r = 0; r < kRandomProbes; ++r) {
        const long m = mag(rng);
        idx.push_back(rng() & 1U ? m : -m);
    }
    return idx;
}

double perturbation_total(const BoundaryLaw& law) {
    double d = 0.0;
    for (const auto& kv : law.perturbations()) d += kv.second;
    return d;
}

// Σ_j z_j evaluated as Σ λ_j·(1+A)^{-k} through the weighted summation path.
double weighted_law_sum(const BoundaryLaw& law, double tol) {
    return sum_weighted(law.spec(), Weights::constant(1.0 / law.denominator()), tol).value + perturbation_total(law);
}

double residual_against(const BoundaryLaw& law, double partner_sum, const std::vector<long>& probes) {
    const double denom = std::pow(1.0 + partner_sum, law.k());
    double worst = 0.0;
    for (long i : probes) worst = std::max(worst, std::abs(law.z(i) - law.spec()(i) / denom));
    return worst;
}

}  // namespace

BoundaryLaw BoundaryLaw::from_sum(ActivitySpec spec, int k, double A) {
    if (k < 2) throw DomainError("tree order k must be >= 2");
    if (!std::isfinite(A) || A < 0.0) throw DomainError("boundary-law sum must be nonnegative and finite");
    BoundaryLaw law;
    law.spec_ = std::move(spec);
    law.k_ = k;
    law.A_ = A;
    law.denominator_ = std::pow(1.0 + A, k);
    return law;
}

BoundaryLaw BoundaryLaw::power_law(int k, double scale, double exponent) {
    if (k < 2) throw DomainError("tree order k must be >= 2");
    if (!(scale > 0.0) || !(exponent > 0.0)) throw DomainError("power-law scale and exponent must be positive");
    BoundaryLaw law;
    law.power_ = PowerTail{scale, exponent};
    law.k_ = k;
    return law;
}

BoundaryLaw BoundaryLaw::with_perturbation(long i, double delta) const {
    if (i == 0) throw DomainError("z(0) is fixed to 1 by normalization");
    BoundaryLaw copy = *this;
    copy.perturbations_[i] += delta;
    return copy;
}

const ActivitySpec& BoundaryLaw::spec() const {
    if (!spec_) throw DomainError("synthetic boundary law has no activity sequence");
    return *spec_;
}

double BoundaryLaw::z(long i) const {
    if (i == 0) return 1.0;
    double base = 0.0;
    if (spec_) {
        base = (*spec_)(i) / denominator_;
    } else {
        base = power_->scale * std::pow(static_cast<double>(i > 0 ? i : -i), -power_->exponent);
    }
    const auto it = perturbations_.find(i);
    return it == perturbations_.end() ? base : base + it->second;
}

double BoundaryLaw::tail_sup(long n) const {
    double s = spec_ ? spec_->tail_sup(n) / denominator_
                     : power_->scale * std::pow(static_cast<double>(n + 1), -power_->exponent);
    for (const auto& [i, d] : perturbations_) {
        if (i > n || i < -n) s = std::max(s, z(i));
    }
    return s;
}

Weights BoundaryLaw::as_weights() const {
    auto self = std::make_shared<const BoundaryLaw>(*this);
    return Weights{[self](long j) { return self->z(j); },
                   [self](long n) { return std::pair{0.0, self->tail_sup(n)}; }};
}

PeriodicLawPair make_periodic_pair(const ActivitySpec& spec, int k, double A, double B) {
    return PeriodicLawPair{BoundaryLaw::from_sum(spec, k, B), BoundaryLaw::from_sum(spec, k, A), A, B};
}

BoundaryLaw boundary_law_from_A(const ActivitySpec& spec, int k, double A) {
    return BoundaryLaw::from_sum(spec, k, A);
}

double consistency_residual(const BoundaryLaw& law, double tol) {
    const double total = weighted_law_sum(law, tol);
    return residual_against(law, total, probe_indices(law));
}

double consistency_residual(const PeriodicLawPair& pair, double tol) {
    const double sum_even = weighted_law_sum(pair.even, tol);
    const double sum_odd = weighted_law_sum(pair.odd, tol);
    return std::max(residual_against(pair.even, sum_odd, probe_indices(pair.even)),
                    residual_against(pair.odd, sum_even, probe_indices(pair.odd)));
}

Normalisability normalisability_check(const BoundaryLaw& law, double tol) {
    const int k = law.k();
    const double p = static_cast<double>(k + 1) / k;
    if (law.power_tail()) {
        if (law.power_tail()->exponent * p <= 1.0) {
            return {false, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        }
    } else if (law.spec().declared_divergent()) {
        return {false, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }

    long start = 0;
    for (const auto& kv : law.perturbations()) start = std::max(start, kv.first > 0 ? kv.first : -kv.first);

    // z^p = z·z^{1/k} <= z·sup^{1/k} beyond n
    auto tail_bound = [&](long n) {
        if (law.power_tail()) {
            const auto [c, e] = *law.power_tail();
            const double q = e * p;
            // Σ_{j>n} c^p j^{-q} <= c^p ∫_n^∞ x^{-q} on both sides
            return n == 0 ? std::numeric_limits<double>::infinity()
                          : 2.0 * std::pow(c, p) * std::pow(static_cast<double>(n), 1.0 - q) / (q - 1.0);
        }
        const double mass = law.spec().tail_mass(n).upper / law.denominator();
        return mass * std::pow(law.tail_sup(n), 1.0 / k);
    };

    double partial = 0.0;
    for (long n = 1; n <= start; ++n) partial += std::pow(std::abs(law.z(n)), p) + std::pow(std::abs(law.z(-n)), p);
    long n = start;
    double bound = tail_bound(n);
    while (bound > tol && n < kPowerSumBudget) {
        ++n;
        partial += std::pow(law.z(n), p) + std::pow(law.z(-n), p);
        bound = tail_bound(n);
    }
    return {true, partial, bound};
}

SeriesSum law_sum(const BoundaryLaw& law, double tol) {
    if (law.power_tail()) {
        const auto [c, e] = *law.power_tail();
        if (e <= 1.0) throw DivergenceError("power-law boundary law is not summable");
        // integral bracket: c∫_{n+1}^∞ x^{-e} <= Σ_{j>n} c j^{-e} <= c∫_n^∞ x^{-e}, per side
        auto integral = [&](double from) { return 2.0 * c * std::pow(from, 1.0 - e) / (e - 1.0); };
        double partial = 0.0;
        long n = 0;
        for (const auto& kv : law.perturbations()) n = std::max(n, kv.first > 0 ? kv.first : -kv.first);
        for (long j = 1; j <= n; ++j) partial += law.z(j) + law.z(-j);
        while (n == 0 || integral(static_cast<double>(n)) - integral(static_cast<double>(n + 1)) > tol) {
            if (n >= kPowerSumBudget) throw DivergenceError("power-law boundary-law sum did not close its tail bound");
            ++n;
            partial += law.z(n) + law.z(-n);
        }
        const double lo = integral(static_cast<double>(n + 1));
        const double hi = integral(static_cast<double>(n));
        return {partial + lo, hi - lo, 2 * n};
    }
    const SeriesSum base = sum_activities(law.spec(), tol);
    return {base.value / law.denominator() + perturbation_total(law), base.tail_bound / law.denominator(),
            base.terms_used};
}

}  // namespace hcgibbs
