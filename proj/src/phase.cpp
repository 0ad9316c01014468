#include "hcgibbs/phase.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "hcgibbs/errors.hpp"

namespace hcgibbs {

namespace {

std::atomic<std::uint64_t> g_solver_calls{0};

constexpr int kScanPoints = 4096;
constexpr int kMaxBisections = 400;

void check_order(int k) {
    if (k < 2) throw DomainError("tree order k must be >= 2, got " + std::to_string(k));
}

void check_lambda(double Lambda) {
    if (!std::isfinite(Lambda) || !(Lambda > 0.0))
        throw DomainError("total activity must be positive and finite");
}

double scale_of(double Lambda) { return std::max(1.0, Lambda); }

double ti_residual(int k, double Lambda, double a) { return a * std::pow(1.0 + a, k) - Lambda; }

// Shrinks [lo, hi] around a sign change of g until its width is <= width.
template <class F>
double bisect(F&& g, double lo, double hi, double width) {
    double glo = g(lo);
    for (int it = 0; it < kMaxBisections && hi - lo > width; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Root of (h(x)-x)/(x-a0) on the side of a0 given by dir (-1 below, +1 above). The far
// endpoint (h(0) or Λ) always has the deflated value negative; close to a0 it is positive
// when h'(a0) > 1.
std::optional<double> deflated_root(int k, double Lambda, double a0, double far) {
    auto d = [&](double x) { return (h_map(k, Lambda, x) - x) / (x - a0); };
    double delta = 0.5 * std::abs(a0 - far);
    const double sign = far < a0 ? -1.0 : 1.0;
    while (delta > 1e-15 * std::max(1.0, a0)) {
        const double near = a0 + sign * delta;
        if (d(near) > 0.0) {
            const double lo = std::min(near, far);
            const double hi = std::max(near, far);
            return bisect(d, lo, hi, 0.0);
        }
        delta *= 0.5;
    }
    return std::nullopt;
}

}  // namespace

double critical_lambda(int k) {
    check_order(k);
    const double kk = static_cast<double>(k);
    return std::pow(kk, kk) / std::pow(kk - 1.0, kk + 1.0);
}

double f_map(int k, double Lambda, double x) { return Lambda / std::pow(1.0 + x, k); }

double h_map(int k, double Lambda, double x) { return f_map(k, Lambda, f_map(k, Lambda, x)); }

std::uint64_t root_solver_calls() noexcept { return g_solver_calls.load(); }

double solve_translation_invariant(int k, double Lambda, double tol) {
    ++g_solver_calls;
    check_order(k);
    check_lambda(Lambda);
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

    // A ↦ A(1+A)^k is strictly increasing, 0 at 0 and >= Λ at Λ.
    double lo = 0.0;
    double hi = Lambda;
    for (int it = 0; it < 4000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (ti_residual(k, Lambda, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double a = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double r = ti_residual(k, Lambda, a);
        const double dr = std::pow(1.0 + a, k - 1) * (1.0 + (k + 1) * a);
        const double next = a - r / dr;
        if (!(next >= lo && next <= hi)) break;
        if (std::abs(ti_residual(k, Lambda, next)) > std::abs(r)) break;
        a = next;
    }
    const double res = std::abs(ti_residual(k, Lambda, a));
    if (res > tol * scale_of(Lambda)) {
        std::ostringstream os;
        os << "translation-invariant root residual " << res << " exceeds tolerance";
        throw NumericalError(os.str());
    }
    return a;
}

std::vector<double> fixed_points_of_h(int k, double Lambda, double tol) {
    ++g_solver_calls;
    const double a0 = solve_translation_invariant(k, Lambda, tol);
    if (Lambda <= critical_lambda(k)) return {a0};

    const double width = tol * scale_of(Lambda);
    const double lo = h_map(k, Lambda, 0.0);
    const double hi = Lambda;
    auto g = [&](double x) { return h_map(k, Lambda, x) - x; };

    std::ostringstream trace;
    trace << "scan [" << lo << ", " << hi << "] with " << kScanPoints << " points; sign changes:";
    std::vector<double> roots;
    const double step = (hi - lo) / (kScanPoints - 1);
    double x_prev = lo;
    double g_prev = g(lo);
    if (g_prev == 0.0) roots.push_back(lo);
    for (int i = 1; i < kScanPoints; ++i) {
        const double x = i + 1 == kScanPoints ? hi : lo + step * i;
        const double gx = g(x);
        if (gx == 0.0) {
            roots.push_back(x);
        } else if (g_prev != 0.0 && (gx < 0.0) != (g_prev < 0.0)) {
            trace << " [" << x_prev << ", " << x << "]";
            roots.push_back(bisect(g, x_prev, x, 0.0));
        }
        x_prev = x;
        g_prev = gx;
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || r - unique.back() > 10.0 * width) unique.push_back(r);
    }

    double low = 0.0;
    double high = 0.0;
    if (unique.size() == 3) {
        low = unique.front();
        high = unique.back();
    } else {
        trace << "; found " << unique.size() << " distinct roots, falling back to deflated brackets";
        const auto l = deflated_root(k, Lambda, a0, lo);
        const auto u = deflated_root(k, Lambda, a0, hi);
        if (!l || !u || a0 - *l <= 10.0 * width || *u - a0 <= 10.0 * width) {
            throw NumericalError("fixed-point scan of h did not resolve three distinct roots", trace.str());
        }
        low = *l;
        high = *u;
    }
    return {low, a0, high};
}

std::optional<PeriodicPair> solve_two_periodic(int k, double Lambda, double tol) {
    ++g_solver_calls;
    check_order(k);
    check_lambda(Lambda);
    if (Lambda <= critical_lambda(k)) return std::nullopt;
    const auto fp = fixed_points_of_h(k, Lambda, tol);
    const PeriodicPair pair{fp.front(), fp.back()};
    const double mismatch = std::max(std::abs(f_map(k, Lambda, pair.low) - pair.high),
                                     std::abs(f_map(k, Lambda, pair.high) - pair.low));
    if (mismatch > 1e-6 * scale_of(Lambda)) {
        std::ostringstream os;
        os << "outer fixed points of h are not exchanged by f (mismatch " << mismatch << ")";
        throw NumericalError(os.str());
    }
    return pair;
}

PeriodicPair closed_form_pair_k2(double Lambda) {
    if (!std::isfinite(Lambda) || !(Lambda > 4.0))
        throw DomainError("closed-form k=2 pair requires Lambda > 4");
    const double high = 0.5 * (Lambda - 2.0 + std::sqrt(Lambda * (Lambda - 4.0)));
    // low·high = 1; avoids cancellation in Λ-2-√(Λ(Λ-4)) for large Λ
    return {1.0 / high, high};
}

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::NoMeasure:
            return "NoMeasure";
        case Regime::UniqueTI:
            return "UniqueTI";
        case Regime::ThreePeriodic:
            return "ThreePeriodic";
    }
    return "?";
}

PhaseReport classify(int k, const ActivityTotal& total, double tol) {
    PhaseReport report;
    report.k = k;
    report.Lambda_cr = critical_lambda(k);
    if (std::holds_alternative<Divergent>(total)) {
        report.Lambda = std::numeric_limits<double>::infinity();
        report.regime = Regime::NoMeasure;
        return report;
    }
    const double Lambda = std::get<SeriesSum>(total).value;
    check_lambda(Lambda);
    report.Lambda = Lambda;
    report.fixed_points = fixed_points_of_h(k, Lambda, tol);
    const double a0 = solve_translation_invariant(k, Lambda, tol);
    report.A0 = a0;
    report.residual_A0 = std::abs(ti_residual(k, Lambda, a0));
    if (Lambda > report.Lambda_cr) {
        report.regime = Regime::ThreePeriodic;
        report.pair = solve_two_periodic(k, Lambda, tol);
        const auto [lo, hi] = *report.pair;
        report.residual_pair = std::max(std::abs(lo * std::pow(1.0 + hi, k) - Lambda),
                                        std::abs(hi * std::pow(1.0 + lo, k) - Lambda));
    } else {
        report.regime = Regime::UniqueTI;
    }
    return report;
}

}  // namespace hcgibbs
