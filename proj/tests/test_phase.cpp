#include <cmath>
#include <random>

#include "doctest.h"
#include "hcgibbs/errors.hpp"
#include "hcgibbs/phase.hpp"

using namespace hcgibbs;

namespace {

// Sign changes of h(x)-x on a uniform grid; independent of the solver's scan.
int count_sign_changes(int k, double Lambda, int points) {
    const double lo = h_map(k, Lambda, 0.0);
    const double hi = Lambda;
    int changes = 0;
    double prev = h_map(k, Lambda, lo) - lo;
    for (int i = 1; i <= points; ++i) {
        const double x = lo + (hi - lo) * i / points;
        const double g = h_map(k, Lambda, x) - x;
        if ((g < 0) != (prev < 0)) ++changes;
        prev = g;
    }
    return changes;
}

}  // namespace

TEST_CASE("critical_lambda") {
    CHECK(critical_lambda(2) == 4.0);
    CHECK(critical_lambda(3) == doctest::Approx(1.6875).epsilon(1e-15));
    CHECK(critical_lambda(8) == doctest::Approx(16777216.0 / 40353607.0).epsilon(1e-14));
    CHECK_THROWS_AS(critical_lambda(1), DomainError);
    // at criticality the TI root is 1/(k-1)
    for (int k = 2; k <= 8; ++k) {
        CHECK(solve_translation_invariant(k, critical_lambda(k)) == doctest::Approx(1.0 / (k - 1)).epsilon(1e-12));
    }
}

TEST_CASE("solve_translation_invariant on the worked examples") {
    CHECK(solve_translation_invariant(2, 9.0 / 8.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(solve_translation_invariant(2, 1.9) - 0.676223) < 1e-6);
    CHECK(solve_translation_invariant(2, 1.125) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(solve_translation_invariant(2, 4.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(solve_translation_invariant(2, 0.0), DomainError);
    CHECK_THROWS_AS(solve_translation_invariant(2, -1.0), DomainError);
    CHECK_THROWS_AS(solve_translation_invariant(2, INFINITY), DomainError);
}

TEST_CASE("TI root is unique and accurate for random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lam(1e-6, 100.0);
    std::uniform_int_distribution<int> order(2, 8);
    for (int t = 0; t < 200; ++t) {
        const int k = order(rng);
        const double Lambda = lam(rng);
        const double a = solve_translation_invariant(k, Lambda);
        CHECK(std::abs(a * std::pow(1 + a, k) - Lambda) < 1e-10);
        if (t < 20) {
            int changes = 0;
            double prev = -Lambda;
            for (int i = 1; i <= 100'000; ++i) {
                const double x = Lambda * i / 100'000.0;
                const double g = x * std::pow(1 + x, k) - Lambda;
                if ((g < 0) != (prev < 0)) ++changes;
                prev = g;
            }
            CHECK(changes == 1);
        }
    }
}

TEST_CASE("fixed points of h") {
    SUBCASE("below criticality: one root, the TI root") {
        const auto fp = fixed_points_of_h(2, 3.0);
        REQUIRE(fp.size() == 1);
        CHECK(fp[0] == doctest::Approx(solve_translation_invariant(2, 3.0)).epsilon(1e-14));
        CHECK(count_sign_changes(2, 3.0, 1'000'000) <= 1);
    }
    SUBCASE("k=2, Lambda=9/2") {
        const auto fp = fixed_points_of_h(2, 4.5);
        REQUIRE(fp.size() == 3);
        CHECK(fp[0] == doctest::Approx(0.5).epsilon(1e-11));
        CHECK(fp[1] == doctest::Approx(1.0602071558622793).epsilon(1e-12));
        CHECK(fp[2] == doctest::Approx(2.0).epsilon(1e-11));
        CHECK(count_sign_changes(2, 4.5, 1'000'000) == 3);
    }
    SUBCASE("k=2, Lambda=16/3") {
        const auto fp = fixed_points_of_h(2, 16.0 / 3.0);
        REQUIRE(fp.size() == 3);
        CHECK(fp[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
        CHECK(fp[1] == doctest::Approx(solve_translation_invariant(2, 16.0 / 3.0)).epsilon(1e-14));
        CHECK(fp[2] == doctest::Approx(3.0).epsilon(1e-11));
    }
    SUBCASE("exactly at criticality") {
        const auto fp = fixed_points_of_h(3, critical_lambda(3));
        REQUIRE(fp.size() == 1);
        CHECK(fp[0] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("1% either side of criticality, k = 2..8") {
        for (int k = 2; k <= 8; ++k) {
            const double cr = critical_lambda(k);
            CHECK(fixed_points_of_h(k, 0.99 * cr).size() == 1);
            const auto fp = fixed_points_of_h(k, 1.01 * cr);
            REQUIRE(fp.size() == 3);
            for (double x : fp) CHECK(std::abs(h_map(k, 1.01 * cr, x) - x) < 1e-9);
            CHECK(fp[0] < fp[1]);
            CHECK(fp[1] < fp[2]);
        }
    }
    SUBCASE("near tangency from above still separates the pair") {
        const double Lambda = 4.0 + 1e-7;
        const auto fp = fixed_points_of_h(2, Lambda);
        REQUIRE(fp.size() == 3);
        const auto closed = closed_form_pair_k2(Lambda);
        CHECK(fp[0] == doctest::Approx(closed.low).epsilon(1e-6));
        CHECK(fp[2] == doctest::Approx(closed.high).epsilon(1e-6));
    }
}

TEST_CASE("two-periodic pairs") {
    auto p = solve_two_periodic(2, 4.5);
    REQUIRE(p);
    CHECK(p->low == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(p->high == doctest::Approx(2.0).epsilon(1e-11));
    CHECK_FALSE(solve_two_periodic(2, 4.0));
    CHECK_FALSE(solve_two_periodic(2, 1.125));
    p = solve_two_periodic(2, 16.0 / 3.0);
    REQUIRE(p);
    CHECK(p->low == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(p->high == doctest::Approx(3.0).epsilon(1e-11));
}

TEST_CASE("closed-form k=2 pair") {
    auto c = closed_form_pair_k2(4.5);
    CHECK(c.low == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.high == doctest::Approx(2.0).epsilon(1e-15));
    c = closed_form_pair_k2(16.0 / 3.0);
    CHECK(c.low == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c.high == doctest::Approx(3.0).epsilon(1e-15));
    c = closed_form_pair_k2(4.0 + 1e-14);
    CHECK(std::abs(c.low - 1.0) < 1e-6);
    CHECK(std::abs(c.high - 1.0) < 1e-6);
    CHECK_THROWS_AS(closed_form_pair_k2(4.0), DomainError);
    CHECK_THROWS_AS(closed_form_pair_k2(3.0), DomainError);
}

TEST_CASE("pair properties for random Lambda in (4, 50]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lam(4.0, 50.0);
    for (int t = 0; t < 100; ++t) {
        double Lambda = lam(rng);
        if (Lambda <= 4.0 + 1e-9) Lambda = 4.5;
        const auto closed = closed_form_pair_k2(Lambda);
        CHECK(std::abs(closed.low * closed.high - 1.0) < 1e-10);
        CHECK(std::abs(closed.low + closed.high - (Lambda - 2.0)) < 1e-10);
        const auto generic = solve_two_periodic(2, Lambda);
        REQUIRE(generic);
        CHECK(std::abs(generic->low - closed.low) < 1e-9);
        CHECK(std::abs(generic->high - closed.high) < 1e-9);
        // f exchanges the pair; (A,B) and (B,A) both solve the sum system
        CHECK(std::abs(f_map(2, Lambda, generic->low) - generic->high) < 1e-8);
        CHECK(std::abs(f_map(2, Lambda, generic->high) - generic->low) < 1e-8);
        for (auto [a, b] : {std::pair{generic->low, generic->high}, std::pair{generic->high, generic->low}}) {
            CHECK(std::abs(a * (1 + b) * (1 + b) - Lambda) < 1e-8 * Lambda);
            CHECK(std::abs(b * (1 + a) * (1 + a) - Lambda) < 1e-8 * Lambda);
        }
    }
}

TEST_CASE("pair collapses continuously at criticality") {
    const auto p = solve_two_periodic(2, 4.0 + 1e-4);
    REQUIRE(p);
    CHECK(p->high - p->low < 0.1);
    CHECK(p->low < 1.0);
    CHECK(p->high > 1.0);
}

TEST_CASE("classify") {
    auto r = classify(2, SeriesSum{9.0 / 8.0, 0.0, 0});
    CHECK(r.regime == Regime::UniqueTI);
    CHECK(*r.A0 == doctest::Approx(0.5));
    CHECK_FALSE(r.pair);

    r = classify(2, SeriesSum{4.5, 0.0, 0});
    CHECK(r.regime == Regime::ThreePeriodic);
    REQUIRE(r.pair);
    CHECK(r.pair->low < *r.A0);
    CHECK(*r.A0 < r.pair->high);
    CHECK(*r.residual_pair < 1e-10);
    CHECK(r.fixed_points.size() == 3);

    r = classify(2, SeriesSum{4.0, 0.0, 0});
    CHECK(r.regime == Regime::UniqueTI);
    CHECK(*r.A0 == doctest::Approx(1.0));

    r = classify(2, Divergent{});
    CHECK(r.regime == Regime::NoMeasure);
    CHECK(std::isinf(r.Lambda));
    CHECK_FALSE(r.A0);
    CHECK(r.fixed_points.empty());
}
