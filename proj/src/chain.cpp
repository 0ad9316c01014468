#include "hcgibbs/chain.hpp"

#include <cmath>
#include <sstream>

#include "hcgibbs/errors.hpp"

namespace hcgibbs {

TransitionKernel::TransitionKernel(KernelKind kind, long truncation, Eigen::VectorXd row_zero,
                                   Eigen::VectorXd shared_row)
    : kind_(kind), truncation_(truncation), row_zero_(std::move(row_zero)), shared_row_(std::move(shared_row)) {}

Eigen::VectorXd TransitionKernel::left_multiply(const Eigen::VectorXd& x) const {
    const double x0 = x(position(0));
    return x0 * row_zero_ + (x.sum() - x0) * shared_row_;
}

Eigen::MatrixXd TransitionKernel::dense() const {
    Eigen::MatrixXd m(size(), size());
    for (Eigen::Index r = 0; r < size(); ++r) m.row(r) = row(static_cast<long>(r) - truncation_).transpose();
    return m;
}

Eigen::VectorXd single_step_row(const BoundaryLaw& law, long truncation) {
    const ActivitySpec& spec = law.spec();
    Eigen::VectorXd row(2 * truncation + 1);
    for (long j = -truncation; j <= truncation; ++j) row(j + truncation) = j == 0 ? 0.0 : spec(j) * law.z(j);
    const double partial = row.sum();
    row(truncation) = 1.0;  // λ_0 z_0
    return row / (1.0 + partial);
}

double truncation_tail(const BoundaryLaw& law, long truncation) {
    return law.tail_sup(truncation) * law.spec().tail_mass(truncation).upper;
}

long required_truncation(const BoundaryLaw& law, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    long hi = 1;
    while (truncation_tail(law, hi) > tol) {
        if (hi > (1L << 40)) throw DivergenceError("no truncation level reaches the requested tail tolerance");
        hi *= 2;
    }
    long lo = hi / 2;  // lo fails (or is 0)
    if (hi == 1) return 1;
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (truncation_tail(law, mid) > tol)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

namespace {

void check_truncation(const BoundaryLaw& law, long truncation, double tol) {
    if (truncation < 1) throw DomainError("truncation level must be >= 1");
    const double tail = truncation_tail(law, truncation);
    if (tail > tol) {
        const long minimal = required_truncation(law, tol);
        std::ostringstream os;
        os << "truncation N=" << truncation << " leaves tail mass up to " << tail << " > " << tol
           << "; minimal sufficient N is " << minimal;
        throw TruncationError(os.str(), minimal);
    }
}

}  // namespace

TransitionKernel build_ti_kernel(const BoundaryLaw& law, long truncation, double tol) {
    check_truncation(law, truncation, tol);
    Eigen::VectorXd jump = Eigen::VectorXd::Zero(2 * truncation + 1);
    jump(truncation) = 1.0;
    return {KernelKind::TranslationInvariant, truncation, single_step_row(law, truncation), std::move(jump)};
}

TransitionKernel build_periodic_kernel(const PeriodicLawPair& pair, long truncation, double tol) {
    check_truncation(pair.even, truncation, tol);
    check_truncation(pair.odd, truncation, tol);
    const Eigen::VectorXd even_row = single_step_row(pair.even, truncation);
    Eigen::VectorXd odd_row = single_step_row(pair.odd, truncation);
    const double stay = even_row(truncation);  // 1/(1+S)
    Eigen::VectorXd row_zero = stay * odd_row;
    row_zero(truncation) += 1.0 - stay;
    return {KernelKind::TwoStepProduct, truncation, std::move(row_zero), std::move(odd_row)};
}

StationaryDist::StationaryDist(BoundaryLaw driving_law, double S, double S_tilde)
    : law_(std::move(driving_law)), S_(S), S_tilde_(S_tilde), normaliser_(1.0 + S + S_tilde) {}

double StationaryDist::operator()(long j) const {
    if (j == 0) return (1.0 + S_) / normaliser_;
    return law_.spec()(j) * law_.z(j) / normaliser_;
}

Eigen::VectorXd StationaryDist::truncated(long truncation) const {
    Eigen::VectorXd x(2 * truncation + 1);
    for (long j = -truncation; j <= truncation; ++j) x(j + truncation) = (*this)(j);
    return x / x.sum();
}

SeriesSum activity_weighted_sum(const BoundaryLaw& law, double tol) {
    return sum_weighted(law.spec(), law.as_weights(), tol);
}

StationaryDist stationary_ti(const BoundaryLaw& law, double tol) {
    const double S = activity_weighted_sum(law, tol).value;
    return StationaryDist(law, S, S);
}

StationaryDist stationary_periodic(const PeriodicLawPair& pair, double tol) {
    const double S = activity_weighted_sum(pair.even, tol).value;
    const double S_tilde = activity_weighted_sum(pair.odd, tol).value;
    return StationaryDist(pair.odd, S, S_tilde);
}

double stationarity_residual(const Eigen::VectorXd& X, const TransitionKernel& P) {
    if (X.size() != P.size()) throw DomainError("distribution and kernel index sets differ");
    return (P.left_multiply(X) - X).cwiseAbs().maxCoeff();
}

double stationarity_residual(const StationaryDist& X, const TransitionKernel& P) {
    return stationarity_residual(X.truncated(P.truncation()), P);
}

}  // namespace hcgibbs
