#include "hcgibbs/reproduce.hpp"

#include <cmath>

#include "hcgibbs/activities.hpp"
#include "hcgibbs/boundary.hpp"
#include "hcgibbs/chain.hpp"
#include "hcgibbs/errors.hpp"
#include "hcgibbs/phase.hpp"

namespace hcgibbs {

bool CheckRow::pass() const { return informational || std::abs(got - expected) <= tol; }

bool ExampleReport::pass() const {
    for (const auto& r : rows) {
        if (!r.pass()) return false;
    }
    return true;
}

namespace {

constexpr double kTol = 1e-12;
constexpr long kTruncation = 10'000;

double flag(bool b) { return b ? 1.0 : 0.0; }

void add_ti_pipeline(ExampleReport& rep, const BoundaryLaw& law) {
    rep.rows.push_back({"consistency residual", 0.0, consistency_residual(law, kTol), 1e-9});
    rep.rows.push_back({"normalisable", 1.0, flag(normalisability_check(law, 1e-10).normalisable), 0.0});
    const auto P = build_ti_kernel(law, kTruncation, 1e-10);
    rep.rows.push_back({"stationarity residual (N=1e4)", 0.0, stationarity_residual(stationary_ti(law, kTol), P), 1e-10});
}

void add_periodic_pipeline(ExampleReport& rep, const PeriodicLawPair& pair) {
    rep.rows.push_back({"pair consistency residual", 0.0, consistency_residual(pair, kTol), 1e-9});
    const auto P = build_periodic_kernel(pair, kTruncation, 1e-10);
    rep.rows.push_back(
        {"periodic stationarity residual (N=1e4)", 0.0, stationarity_residual(stationary_periodic(pair, kTol), P), 1e-10});
}

ExampleReport example1() {
    ExampleReport rep{1, "telescoping activities, k=2, translation-invariant", {}};
    const auto spec = ActivitySpec::telescoping(0.25);
    const double Lambda = sum_activities(spec, kTol).value;
    rep.rows.push_back({"Lambda", 9.0 / 8.0, Lambda, 1e-12});
    const double A0 = solve_translation_invariant(2, Lambda);
    rep.rows.push_back({"A0", 0.5, A0, 1e-10});
    const auto law = boundary_law_from_A(spec, 2, A0);
    rep.rows.push_back({"z(1)", 1.0 / 3.0, law.z(1), 1e-12});
    rep.rows.push_back({"z(-1)", 1.0 / 15.0, law.z(-1), 1e-12});
    rep.rows.push_back({"z(2)", 1.0 / 35.0, law.z(2), 1e-12});
    rep.rows.push_back({"z(-2)", 1.0 / 63.0, law.z(-2), 1e-12});
    rep.rows.push_back({"sum z", 0.5, law_sum(law, kTol).value, 1e-9});
    rep.rows.push_back({"regime UniqueTI", 1.0, flag(classify(2, sum_activities(spec, kTol)).regime == Regime::UniqueTI), 0.0});
    add_ti_pipeline(rep, law);
    return rep;
}

ExampleReport example2() {
    ExampleReport rep{2, "Poisson activities (2.4, 8), k=2, translation-invariant", {}};
    const auto spec = ActivitySpec::poisson(2.4, 8.0);
    const double exact = sum_activities(spec, kTol).value;
    // the worked example rounds Λ to 1.9
    rep.rows.push_back({"Lambda (rounded to 1.9)", 1.9, exact, 1e-2});
    const double A_rounded = solve_translation_invariant(2, 1.9);
    rep.rows.push_back({"A0 from Lambda=1.9", 0.676223, A_rounded, 1e-3});
    const auto law_rounded = boundary_law_from_A(spec, 2, A_rounded);
    // printed digits are truncated, so allow one unit in the last place
    rep.rows.push_back({"z(1) with A0(1.9)", 0.07748914, law_rounded.z(1), 1e-8});
    rep.rows.push_back({"z(2) with A0(1.9)", 0.0929869, law_rounded.z(2), 1e-7});
    rep.rows.push_back({"z(-1) with A0(1.9)", 0.0009551476, law_rounded.z(-1), 1e-10});
    rep.rows.push_back({"z(-2) with A0(1.9)", 0.003820590, law_rounded.z(-2), 1e-9});

    const double A_exact = solve_translation_invariant(2, exact);
    rep.rows.push_back({"exact Lambda", exact, exact, 0.0, true});
    rep.rows.push_back({"A0 from exact Lambda", A_exact, A_exact, 0.0, true});
    rep.rows.push_back({"exact A0 residual", 0.0, std::abs(A_exact * (1 + A_exact) * (1 + A_exact) - exact), 1e-10});
    const auto law = boundary_law_from_A(spec, 2, A_exact);
    rep.rows.push_back({"sum z = A0 (exact)", A_exact, law_sum(law, kTol).value, 1e-9});
    add_ti_pipeline(rep, law);
    return rep;
}

ExampleReport example3() {
    ExampleReport rep{3, "geometric activities (alpha=0.4, beta=0.475), k=2, translation-invariant", {}};
    const double alpha = 0.4;
    const double beta = 0.475;
    const auto spec = ActivitySpec::geometric(alpha, beta);
    const double Lambda = sum_activities(spec, kTol).value;
    rep.rows.push_back({"Lambda", 1.125, Lambda, 1e-12});
    const double A0 = solve_translation_invariant(2, Lambda);
    rep.rows.push_back({"A0", 0.5, A0, 1e-10});
    const auto law = boundary_law_from_A(spec, 2, A0);
    for (int n : {1, 2, 5}) {
        rep.rows.push_back(
            {"z(" + std::to_string(n) + ")", 4.0 * alpha * std::pow(1 - alpha, n) / 9.0, law.z(n), 1e-12});
    }
    rep.rows.push_back({"z(-1)", 4.0 * beta * (1 - beta) / 9.0, law.z(-1), 1e-12});
    rep.rows.push_back({"sum z", 0.5, law_sum(law, kTol).value, 1e-9});
    add_ti_pipeline(rep, law);
    return rep;
}

void add_pair_rows(ExampleReport& rep, const ActivitySpec& spec, double Lambda, double low, double high) {
    const auto report = classify(2, sum_activities(spec, kTol));
    rep.rows.push_back({"regime ThreePeriodic", 1.0, flag(report.regime == Regime::ThreePeriodic), 0.0});
    const auto generic = solve_two_periodic(2, Lambda);
    const auto closed = closed_form_pair_k2(Lambda);
    rep.rows.push_back({"A_low (generic)", low, generic ? generic->low : NAN, 1e-9});
    rep.rows.push_back({"A_high (generic)", high, generic ? generic->high : NAN, 1e-9});
    rep.rows.push_back({"A_low (closed form)", low, closed.low, 1e-9});
    rep.rows.push_back({"A_high (closed form)", high, closed.high, 1e-9});
    rep.rows.push_back({"A*B", 1.0, closed.low * closed.high, 1e-10});
    rep.rows.push_back({"A+B-(Lambda-2)", 0.0, closed.low + closed.high - (Lambda - 2.0), 1e-10});
    const auto pair = make_periodic_pair(spec, 2, generic.value().low, generic.value().high);
    rep.rows.push_back({"sum z (even, from B)", low, law_sum(pair.even, kTol).value, 1e-9});
    rep.rows.push_back({"sum z~ (odd, from A)", high, law_sum(pair.odd, kTol).value, 1e-9});
    add_periodic_pipeline(rep, pair);
}

ExampleReport example4() {
    ExampleReport rep{4, "telescoping activities (scale 1), k=2, two-periodic", {}};
    const auto spec = ActivitySpec::telescoping(1.0);
    const double Lambda = sum_activities(spec, kTol).value;
    rep.rows.push_back({"Lambda", 4.5, Lambda, 1e-12});
    add_pair_rows(rep, spec, Lambda, 0.5, 2.0);
    const auto pair = make_periodic_pair(spec, 2, 0.5, 2.0);
    rep.rows.push_back({"z(1)", 1.0 / 3.0, pair.even.z(1), 1e-12});
    rep.rows.push_back({"z~(1)", 4.0 / 3.0, pair.odd.z(1), 1e-12});
    rep.rows.push_back({"z~(-1)", 4.0 / 15.0, pair.odd.z(-1), 1e-12});
    return rep;
}

ExampleReport example5() {
    ExampleReport rep{5, "geometric activities (scale 4, alpha+beta=2/3), k=2, two-periodic", {}};
    const auto spec = ActivitySpec::geometric(0.25, 2.0 / 3.0 - 0.25, 4.0);
    const double Lambda = sum_activities(spec, kTol).value;
    rep.rows.push_back({"Lambda", 16.0 / 3.0, Lambda, 1e-12});
    add_pair_rows(rep, spec, Lambda, 1.0 / 3.0, 3.0);
    return rep;
}

}  // namespace

ExampleReport reproduce_example(int example) {
    switch (example) {
        case 1:
            return example1();
        case 2:
            return example2();
        case 3:
            return example3();
        case 4:
            return example4();
        case 5:
            return example5();
        default:
            throw DomainError("examples are numbered 1..5");
    }
}

}  // namespace hcgibbs
