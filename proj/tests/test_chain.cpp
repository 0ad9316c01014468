#include <cmath>

#include "doctest.h"
#include "hcgibbs/chain.hpp"
#include "hcgibbs/errors.hpp"
#include "hcgibbs/phase.hpp"

using namespace hcgibbs;

namespace {

BoundaryLaw ex1_law() { return boundary_law_from_A(ActivitySpec::telescoping(0.25), 2, 0.5); }

PeriodicLawPair ex4_pair() { return make_periodic_pair(ActivitySpec::telescoping(1.0), 2, 0.5, 2.0); }

}  // namespace

TEST_CASE("TI kernel rows") {
    const auto law = ex1_law();
    const auto P = build_ti_kernel(law, 2000, 1e-8);
    CHECK(P.kind() == KernelKind::TranslationInvariant);
    CHECK(P.size() == 4001);

    double brute = 0.0;
    for (long j = 1; j <= 2000; ++j) brute += law.spec()(j) * law.z(j) + law.spec()(-j) * law.z(-j);
    CHECK(P(0, 0) == doctest::Approx(1.0 / (1.0 + brute)).epsilon(1e-14));
    CHECK(P(0, 1) == doctest::Approx(0.75 / 3.0 / (1.0 + brute)).epsilon(1e-14));
    CHECK(brute == doctest::Approx(0.26291311890319106).epsilon(1e-9));

    for (long i : {1L, -1L, 7L, -2000L}) {
        CHECK(P(i, 0) == 1.0);
        CHECK(P.row(i).sum() == 1.0);
    }
    CHECK(std::abs(P.row(0).sum() - 1.0) < 1e-12);
}

TEST_CASE("single-support kernel") {
    const auto spec = ActivitySpec::explicit_values({{3, 2.0}});
    const double A = solve_translation_invariant(2, 2.0);
    const auto law = boundary_law_from_A(spec, 2, A);
    const auto P = build_ti_kernel(law, 5, 1e-12);
    const double s = 2.0 * law.z(3);
    CHECK(P(0, 0) == doctest::Approx(1.0 / (1.0 + s)));
    CHECK(P(0, 3) == doctest::Approx(s / (1.0 + s)));
    for (long j : {-5L, -1L, 1L, 2L, 4L, 5L}) CHECK(P(0, j) == 0.0);
    const auto X = stationary_ti(law, 1e-12);
    CHECK(X(0) == doctest::Approx((1 + s) / (1 + 2 * s)));
    CHECK(stationarity_residual(X, P) < 1e-15);
}

TEST_CASE("periodic kernel rows") {
    const auto pair = ex4_pair();
    const auto P = build_periodic_kernel(pair, 3000, 1e-6);
    CHECK(P.kind() == KernelKind::TwoStepProduct);
    const auto even = single_step_row(pair.even, 3000);
    const auto odd = single_step_row(pair.odd, 3000);
    for (long i : {1L, -1L, 50L}) CHECK((P.row(i) - odd).cwiseAbs().maxCoeff() == 0.0);
    const double stay = even(3000);
    CHECK(P(0, 0) == doctest::Approx(stay * odd(3000) + 1.0 - stay).epsilon(1e-14));
    CHECK(P(0, 1) == doctest::Approx(stay * odd(3001)).epsilon(1e-14));
    CHECK(std::abs(P.row(0).sum() - 1.0) < 1e-12);
    CHECK(std::abs(P.shared_row().sum() - 1.0) < 1e-12);
}

TEST_CASE("two-step product of single-step kernels") {
    const auto spec = ActivitySpec::geometric(0.5, 0.6, 3.0);
    const auto pair = make_periodic_pair(spec, 2, 0.3, 0.9);
    const long N = 40;
    auto single = [&](const BoundaryLaw& law) {
        Eigen::VectorXd jump = Eigen::VectorXd::Zero(2 * N + 1);
        jump(N) = 1.0;
        return TransitionKernel(KernelKind::TranslationInvariant, N, single_step_row(law, N), jump).dense();
    };
    const Eigen::MatrixXd product = single(pair.even) * single(pair.odd);
    const auto P = build_periodic_kernel(pair, N, 1e-8).dense();
    CHECK((product - P).cwiseAbs().maxCoeff() < 1e-15);

    // diagonal pair reduces to the TI kernel squared
    const double A0 = solve_translation_invariant(2, sum_activities(spec, 1e-14).value);
    const auto diag = make_periodic_pair(spec, 2, A0, A0);
    const Eigen::MatrixXd K = build_ti_kernel(diag.even, N, 1e-8).dense();
    CHECK((build_periodic_kernel(diag, N, 1e-8).dense() - K * K).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("stationary distributions") {
    const auto law = ex1_law();
    const auto X = stationary_ti(law, 1e-14);
    CHECK(X.S() == doctest::Approx(0.26291311890319106).epsilon(1e-12));
    CHECK(X(0) == doctest::Approx(0.8276913108525578).epsilon(1e-12));
    const auto P = build_ti_kernel(law, 10000, 1e-10);
    CHECK(stationarity_residual(X, P) < 1e-9);

    const auto pair = ex4_pair();
    const auto odd = stationary_periodic(pair, 1e-14);
    const auto even = stationary_periodic(pair.swapped(), 1e-14);
    CHECK(odd.S() == doctest::Approx(1.0516524756127642).epsilon(1e-12));
    CHECK(odd.S_tilde() == doctest::Approx(4.206609902451057).epsilon(1e-12));
    CHECK(odd(0) == doctest::Approx(0.3278310098988697).epsilon(1e-12));
    CHECK(even(0) == doctest::Approx(0.8319577524747174).epsilon(1e-12));
    CHECK(stationarity_residual(odd, build_periodic_kernel(pair, 10000, 1e-10)) < 1e-9);
    CHECK(stationarity_residual(even, build_periodic_kernel(pair.swapped(), 10000, 1e-10)) < 1e-9);

    // even marginal is the odd one pushed through the odd-to-even step
    const long N = 10000;
    const Eigen::VectorXd x_odd = odd.truncated(N);
    Eigen::VectorXd jump = Eigen::VectorXd::Zero(2 * N + 1);
    jump(N) = 1.0;
    const TransitionKernel step(KernelKind::TranslationInvariant, N, single_step_row(pair.even, N), jump);
    CHECK((step.left_multiply(x_odd) - even.truncated(N)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("empty activity support") {
    const auto law = boundary_law_from_A(ActivitySpec::explicit_values({}), 2, 0.0);
    const auto X = stationary_ti(law, 1e-12);
    CHECK(X.S() == 0.0);
    CHECK(X(0) == 1.0);
    const auto P = build_ti_kernel(law, 3, 1e-12);
    CHECK(P(0, 0) == 1.0);
    CHECK(stationarity_residual(X, P) == 0.0);
}

TEST_CASE("stationarity residual of non-stationary vectors") {
    const auto P = build_ti_kernel(ex1_law(), 50, 1e-3);
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(P.size(), 1.0 / P.size());
    CHECK(stationarity_residual(uniform, P) > 1e-3);
    Eigen::VectorXd point = Eigen::VectorXd::Zero(P.size());
    point(P.position(0)) = 1.0;
    CHECK(stationarity_residual(point, P) > 0.1);
    CHECK_THROWS_AS(stationarity_residual(Eigen::VectorXd::Zero(3), P), DomainError);

    // the empty-support chain fixes the point mass at 0
    const auto Q = build_ti_kernel(boundary_law_from_A(ActivitySpec::explicit_values({}), 2, 0.0), 4, 1e-12);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(Q.size());
    q(Q.position(0)) = 1.0;
    CHECK(stationarity_residual(q, Q) == 0.0);
}

TEST_CASE("rows are stochastic for random specs") {
    std::uint64_t s = 12345;
    auto next = [&] {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    };
    for (int trial = 0; trial < 40; ++trial) {
        const ActivitySpec spec = trial % 3 == 0   ? ActivitySpec::geometric(0.1 + 0.8 * next(), 0.1 + 0.8 * next(), 0.1 + 5 * next())
                                  : trial % 3 == 1 ? ActivitySpec::poisson(0.5 + 10 * next(), 0.1 + 3 * next())
                                                   : ActivitySpec::telescoping(0.1 + 3 * next());
        const int k = 2 + trial % 4;
        const double Lambda = sum_activities(spec, 1e-14).value;
        const auto law = boundary_law_from_A(spec, k, solve_translation_invariant(k, Lambda));
        const long N = required_truncation(law, 1e-9);
        const auto P = build_ti_kernel(law, N, 1e-9);
        CHECK(std::abs(P.row(0).sum() - 1.0) < 1e-12);
        CHECK((P.row(0).array() >= 0.0).all());
        if (Lambda > critical_lambda(k)) {
            const auto pair = solve_two_periodic(k, Lambda);
            REQUIRE(pair);
            const auto laws = make_periodic_pair(spec, k, pair->low, pair->high);
            const long M = std::max(required_truncation(laws.even, 1e-9), required_truncation(laws.odd, 1e-9));
            const auto Q = build_periodic_kernel(laws, M, 1e-9);
            CHECK(std::abs(Q.row(0).sum() - 1.0) < 1e-12);
            CHECK(std::abs(Q.shared_row().sum() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("truncation convergence") {
    const auto law = ex1_law();
    const auto X = stationary_ti(law, 1e-14);
    double previous = 1.0;
    for (long N = 1L << 6; N <= (1L << 14); N *= 2) {
        const double r = stationarity_residual(X, build_ti_kernel(law, N, 1.0));
        CHECK(r <= previous);
        CHECK(r <= 2.0 * truncation_tail(law, N));
        previous = r;
    }
    CHECK(previous < 1e-12);
}

TEST_CASE("truncation errors carry the minimal level") {
    const auto law = ex1_law();
    const long minimal = required_truncation(law, 1e-10);
    CHECK(truncation_tail(law, minimal) <= 1e-10);
    CHECK(truncation_tail(law, minimal - 1) > 1e-10);
    try {
        (void)build_ti_kernel(law, 10, 1e-10);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.minimal_truncation() == minimal);
    }
    CHECK_NOTHROW((void)build_ti_kernel(law, minimal, 1e-10));
    CHECK_THROWS_AS((void)build_periodic_kernel(ex4_pair(), 10, 1e-10), TruncationError);
    CHECK_THROWS_AS((void)build_ti_kernel(law, 0, 1.0), DomainError);
}
