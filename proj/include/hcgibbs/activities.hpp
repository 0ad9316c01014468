#pragma once

#include <functional>
#include <map>
#include <variant>

namespace hcgibbs {

enum class ActivityKind { Geometric, Poisson, Telescoping, Explicit };

/// λ_j = c·α(1-α)^j for j >= 1, λ_{-j} = c·β(1-β)^j for j >= 1.
struct GeometricParams {
    double alpha;
    double beta;
    double scale = 1.0;
};

/// λ_j = c·r^j e^{-r} / j!, with r = rate_pos for j >= 1 and r = rate_neg mirrored for j <= -1.
struct PoissonParams {
    double rate_pos;
    double rate_neg;
    double scale = 1.0;
};

/// λ_j = 9c/((4j-3)(4j-1)) for j >= 1 and 9c/((4j-1)(4j+1)) for j <= -1.
struct TelescopingParams {
    double scale = 1.0;
};

/// Finite support; unlisted indices carry zero activity. `divergent` marks a sequence the
/// caller declares non-summable (no solver may be run on it).
struct ExplicitParams {
    std::map<long, double> values;
    bool divergent = false;
};

/// Lower and upper bounds on a tail mass Σ_{|j|>n} λ_j.
struct TailBracket {
    double lower = 0.0;
    double upper = 0.0;
};

/// Positive activity sequence {λ_j}, j ∈ ℤ\{0}. λ_0 = 1 is fixed globally and not stored.
/// Immutable after construction.
class ActivitySpec {
public:
    using Params = std::variant<GeometricParams, PoissonParams, TelescopingParams, ExplicitParams>;

    static ActivitySpec geometric(double alpha, double beta, double scale = 1.0);
    static ActivitySpec poisson(double rate_pos, double rate_neg, double scale = 1.0);
    static ActivitySpec telescoping(double scale = 1.0);
    static ActivitySpec explicit_values(std::map<long, double> values, bool divergent = false);

    ActivityKind kind() const noexcept;
    const Params& params() const noexcept { return params_; }

    /// λ_j; throws DomainError for j == 0.
    double operator()(long j) const;

    /// Σ_{|j|>n} λ_j bracketed from below and above. n >= 0.
    TailBracket tail_mass(long n) const;

    /// Upper bound on sup_{|j|>n} λ_j.
    double tail_sup(long n) const;

    /// Explicit specs with finite support deviate from strict positivity on ℤ\{0}.
    bool finite_support() const noexcept { return kind() == ActivityKind::Explicit; }

    bool declared_divergent() const noexcept;

    /// Every λ_j multiplied by t > 0.
    ActivitySpec scaled(double t) const;

private:
    explicit ActivitySpec(Params p) : params_(std::move(p)) {}
    Params params_;
};

double lambda_at(const ActivitySpec& spec, long j);

/// A positive-term series value with a certified bound on the omitted mass:
/// value <= true sum <= value + tail_bound.
struct SeriesSum {
    double value = 0.0;
    double tail_bound = 0.0;
    long terms_used = 0;
};

/// Marker for a total activity that does not converge.
struct Divergent {};

using ActivityTotal = std::variant<SeriesSum, Divergent>;

/// Λ = Σ_{j≠0} λ_j. Closed forms for the parametric kinds. Throws DivergenceError when the
/// spec is declared divergent.
SeriesSum sum_activities(const ActivitySpec& spec, double tol);

/// Like sum_activities but reports a declared-divergent spec as Divergent.
ActivityTotal total_activity(const ActivitySpec& spec, double tol);

/// Nonnegative weight sequence with a bracket on its values beyond |j| > n.
struct Weights {
    std::function<double(long)> at;
    /// (inf, sup) of w_j over |j| > n.
    std::function<std::pair<double, double>(long)> bracket_beyond;

    static Weights constant(double c);
    static Weights unit() { return constant(1.0); }
    static Weights zero() { return constant(0.0); }
};

/// Σ_{j≠0} λ_j w_j by partial summation with certified tail. Throws DivergenceError when
/// the partial sums exceed 1e12 (or the term budget is exhausted) before the tail closes.
SeriesSum sum_weighted(const ActivitySpec& spec, const Weights& weights, double tol);

}  // namespace hcgibbs
