#include "hcgibbs/activities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcgibbs/errors.hpp"

namespace hcgibbs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kDivergenceCeiling = 1e12;
constexpr long kTermBudget = 50'000'000;

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

bool in_unit_interval(double x) { return std::isfinite(x) && x > 0.0 && x < 1.0; }
bool positive(double x) { return std::isfinite(x) && x > 0.0; }

double poisson_term(double scale, double rate, long j) {
    const double jj = static_cast<double>(j);
    return scale * std::exp(jj * std::log(rate) - rate - std::lgamma(jj + 1.0));
}

// Σ_{j>n} of one Poisson side: first omitted term from below, ratio bound from above once
// λ_{j+1}/λ_j <= rate/(n+2) < 1, else the whole side mass.
TailBracket poisson_side_tail(double scale, double rate, long n) {
    const double first = poisson_term(scale, rate, n + 1);
    const double q = rate / static_cast<double>(n + 2);
    const double upper = q < 1.0 ? first / (1.0 - q) : -scale * std::expm1(-rate);
    return {first, std::max(first, upper)};
}

double poisson_side_sup(double scale, double rate, long n) {
    const long mode = std::max(1L, static_cast<long>(std::floor(rate)));
    return poisson_term(scale, rate, std::max(n + 1, mode));
}

}  // namespace

ActivitySpec ActivitySpec::geometric(double alpha, double beta, double scale) {
    require(in_unit_interval(alpha), "geometric alpha must lie in (0,1)");
    require(in_unit_interval(beta), "geometric beta must lie in (0,1)");
    require(positive(scale), "geometric scale must be positive");
    return ActivitySpec(GeometricParams{alpha, beta, scale});
}

ActivitySpec ActivitySpec::poisson(double rate_pos, double rate_neg, double scale) {
    require(positive(rate_pos) && positive(rate_neg), "poisson rates must be positive");
    require(positive(scale), "poisson scale must be positive");
    return ActivitySpec(PoissonParams{rate_pos, rate_neg, scale});
}

ActivitySpec ActivitySpec::telescoping(double scale) {
    require(positive(scale), "telescoping scale must be positive");
    return ActivitySpec(TelescopingParams{scale});
}

ActivitySpec ActivitySpec::explicit_values(std::map<long, double> values, bool divergent) {
    for (const auto& [j, v] : values) {
        require(j != 0, "explicit activities are indexed by nonzero integers");
        require(positive(v), "explicit activity at " + std::to_string(j) + " must be positive");
    }
    return ActivitySpec(ExplicitParams{std::move(values), divergent});
}

ActivityKind ActivitySpec::kind() const noexcept {
    return std::visit(overloaded{
                          [](const GeometricParams&) { return ActivityKind::Geometric; },
                          [](const PoissonParams&) { return ActivityKind::Poisson; },
                          [](const TelescopingParams&) { return ActivityKind::Telescoping; },
                          [](const ExplicitParams&) { return ActivityKind::Explicit; },
                      },
                      params_);
}

bool ActivitySpec::declared_divergent() const noexcept {
    const auto* e = std::get_if<ExplicitParams>(&params_);
    return e != nullptr && e->divergent;
}

double ActivitySpec::operator()(long j) const {
    if (j == 0) throw DomainError("lambda_0 is fixed to 1 by normalization and is not part of the spec");
    const long n = j > 0 ? j : -j;
    const double nn = static_cast<double>(n);
    return std::visit(
        overloaded{
            [&](const GeometricParams& p) {
                const double a = j > 0 ? p.alpha : p.beta;
                return p.scale * a * std::pow(1.0 - a, nn);
            },
            [&](const PoissonParams& p) { return poisson_term(p.scale, j > 0 ? p.rate_pos : p.rate_neg, n); },
            [&](const TelescopingParams& p) {
                const double jj = static_cast<double>(j);
                return j > 0 ? 9.0 * p.scale / ((4.0 * jj - 3.0) * (4.0 * jj - 1.0))
                             : 9.0 * p.scale / ((4.0 * jj - 1.0) * (4.0 * jj + 1.0));
            },
            [&](const ExplicitParams& p) {
                const auto it = p.values.find(j);
                return it == p.values.end() ? 0.0 : it->second;
            },
        },
        params_);
}

TailBracket ActivitySpec::tail_mass(long n) const {
    const double nn = static_cast<double>(n);
    return std::visit(
        overloaded{
            [&](const GeometricParams& p) {
                const double t = p.scale * (std::pow(1.0 - p.alpha, nn + 1.0) + std::pow(1.0 - p.beta, nn + 1.0));
                return TailBracket{t, t};
            },
            [&](const PoissonParams& p) {
                const auto a = poisson_side_tail(p.scale, p.rate_pos, n);
                const auto b = poisson_side_tail(p.scale, p.rate_neg, n);
                return TailBracket{a.lower + b.lower, a.upper + b.upper};
            },
            [&](const TelescopingParams& p) {
                // |j| <= n covers m = 1..2n of Σ_m 1/((2m-1)(2m+1)); the remainder is exact.
                const double t = 9.0 * p.scale / (2.0 * (4.0 * nn + 1.0));
                return TailBracket{t, t};
            },
            [&](const ExplicitParams& p) {
                double t = 0.0;
                for (const auto& [j, v] : p.values) {
                    if (j > n || j < -n) t += v;
                }
                return TailBracket{t, t};
            },
        },
        params_);
}

double ActivitySpec::tail_sup(long n) const {
    const double nn = static_cast<double>(n);
    return std::visit(
        overloaded{
            [&](const GeometricParams& p) {
                return std::max(p.scale * p.alpha * std::pow(1.0 - p.alpha, nn + 1.0),
                                p.scale * p.beta * std::pow(1.0 - p.beta, nn + 1.0));
            },
            [&](const PoissonParams& p) {
                return std::max(poisson_side_sup(p.scale, p.rate_pos, n), poisson_side_sup(p.scale, p.rate_neg, n));
            },
            [&](const TelescopingParams& p) { return 9.0 * p.scale / ((4.0 * nn + 1.0) * (4.0 * nn + 3.0)); },
            [&](const ExplicitParams& p) {
                double s = 0.0;
                for (const auto& [j, v] : p.values) {
                    if (j > n || j < -n) s = std::max(s, v);
                }
                return s;
            },
        },
        params_);
}

ActivitySpec ActivitySpec::scaled(double t) const {
    require(positive(t), "activity scale factor must be positive");
    return std::visit(overloaded{
                          [&](GeometricParams p) {
                              p.scale *= t;
                              return ActivitySpec(p);
                          },
                          [&](PoissonParams p) {
                              p.scale *= t;
                              return ActivitySpec(p);
                          },
                          [&](TelescopingParams p) {
                              p.scale *= t;
                              return ActivitySpec(p);
                          },
                          [&](ExplicitParams p) {
                              for (auto& kv : p.values) kv.second *= t;
                              return ActivitySpec(std::move(p));
                          },
                      },
                      params_);
}

double lambda_at(const ActivitySpec& spec, long j) { return spec(j); }

SeriesSum sum_activities(const ActivitySpec& spec, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    if (spec.declared_divergent()) throw DivergenceError("activity series declared divergent");
    return std::visit(
        overloaded{
            [](const GeometricParams& p) {
                return SeriesSum{p.scale * (1.0 - p.alpha) + p.scale * (1.0 - p.beta), 0.0, 0};
            },
            [](const PoissonParams& p) {
                return SeriesSum{-p.scale * std::expm1(-p.rate_pos) - p.scale * std::expm1(-p.rate_neg), 0.0, 0};
            },
            [](const TelescopingParams& p) { return SeriesSum{4.5 * p.scale, 0.0, 0}; },
            [](const ExplicitParams& p) {
                double s = 0.0;
                for (const auto& kv : p.values) s += kv.second;
                return SeriesSum{s, 0.0, static_cast<long>(p.values.size())};
            },
        },
        spec.params());
}

ActivityTotal total_activity(const ActivitySpec& spec, double tol) {
    if (spec.declared_divergent()) return Divergent{};
    return sum_activities(spec, tol);
}

Weights Weights::constant(double c) {
    return Weights{[c](long) { return c; }, [c](long) { return std::pair{c, c}; }};
}

SeriesSum sum_weighted(const ActivitySpec& spec, const Weights& weights, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    if (spec.declared_divergent()) throw DivergenceError("activity series declared divergent");
    double partial = 0.0;
    for (long n = 0;; ++n) {
        const TailBracket tail = spec.tail_mass(n);
        const auto [w_inf, w_sup] = weights.bracket_beyond(n);
        const double lo = w_inf * tail.lower;
        const double hi = w_sup * tail.upper;
        if (hi - lo <= tol) {
            // n terms on each side
            return SeriesSum{partial + lo, std::max(0.0, hi - lo), 2 * n};
        }
        if (n >= kTermBudget || partial > kDivergenceCeiling) {
            throw DivergenceError("weighted activity series failed to close its tail bound after " +
                                  std::to_string(2 * n) + " terms (partial sum " + std::to_string(partial) + ")");
        }
        const long j = n + 1;
        partial += spec(j) * weights.at(j) + spec(-j) * weights.at(-j);
    }
}

}  // namespace hcgibbs
