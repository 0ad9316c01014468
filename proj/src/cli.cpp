#include "hcgibbs/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "hcgibbs/errors.hpp"
#include "hcgibbs/io.hpp"
#include "hcgibbs/reproduce.hpp"

namespace hcgibbs::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    int k = 2;
    std::string activities;
    std::optional<double> lambda;
    double tol = 1e-12;
    long truncate = 0;  // 0: choose automatically
    int depth = 6;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 1;
    std::string measure = "mu0";
    std::string out = "text";
    int example = 0;
    long range = 10;
};

Measure parse_measure(const std::string& m) {
    if (m == "mu1") return Measure::Mu1;
    if (m == "mu2") return Measure::Mu2;
    return Measure::Mu0;
}

ActivitySpec require_activities(const RunConfig& c) {
    if (c.activities.empty()) throw io::ParseError("--activities PATH is required for this command");
    return io::load_activity_spec(c.activities);
}

void require_convergent(const ActivitySpec& spec) {
    if (spec.declared_divergent())
        throw DomainError("activity series diverges: no translation-invariant or periodic Gibbs measure exists");
}

// `pair` is oriented for the requested branch (Mu2 is the swap of Mu1); empty for Mu0.
struct Laws {
    BoundaryLaw ti;
    std::optional<PeriodicLawPair> pair;
    Measure measure = Measure::Mu0;
};

Laws laws_for(const ActivitySpec& spec, const RunConfig& c) {
    require_convergent(spec);
    const double Lambda = sum_activities(spec, c.tol).value;
    const double A0 = solve_translation_invariant(c.k, Lambda, c.tol);
    const Measure m = parse_measure(c.measure);
    Laws laws{boundary_law_from_A(spec, c.k, A0), std::nullopt, m};
    if (m != Measure::Mu0) {
        const auto pair = solve_two_periodic(c.k, Lambda, c.tol);
        if (!pair) {
            throw DomainError("Lambda = " + std::to_string(Lambda) + " <= Lambda_cr(k) = " +
                              std::to_string(critical_lambda(c.k)) + ": no non-translation-invariant periodic measure");
        }
        auto p = make_periodic_pair(spec, c.k, pair->low, pair->high);
        laws.pair = m == Measure::Mu1 ? p : p.swapped();
    }
    return laws;
}

json vector_json(const Eigen::VectorXd& v, long truncation) {
    json o = json::object();
    for (long j = -truncation; j <= truncation; ++j) o[std::to_string(j)] = v(j + truncation);
    return o;
}

int cmd_phase(const RunConfig& c, std::ostream& out) {
    if (c.activities.empty() == !c.lambda.has_value())
        throw io::ParseError("exactly one of --activities or --lambda is required");
    ActivityTotal total = c.lambda ? ActivityTotal{SeriesSum{*c.lambda, 0.0, 0}}
                                   : total_activity(io::load_activity_spec(c.activities), c.tol);
    const PhaseReport r = classify(c.k, total, c.tol);
    if (c.out == "json") {
        out << io::to_json(r).dump(2) << '\n';
    } else if (c.out == "csv") {
        out << "key,value\n";
        out << std::setprecision(17);
        out << "k," << r.k << "\nLambda," << r.Lambda << "\nLambda_cr," << r.Lambda_cr << "\nregime,"
            << to_string(r.regime) << '\n';
        if (r.A0) out << "A0," << *r.A0 << "\nresidual_A0," << *r.residual_A0 << '\n';
        if (r.pair) {
            out << "A_low," << r.pair->low << "\nA_high," << r.pair->high << "\nresidual_pair," << *r.residual_pair
                << '\n';
        }
    } else {
        out << std::setprecision(12);
        out << "k         " << r.k << "\nLambda    " << r.Lambda << "\nLambda_cr " << r.Lambda_cr << "\nregime    "
            << to_string(r.regime) << '\n';
        if (r.A0) out << "A0        " << *r.A0 << "  (residual " << *r.residual_A0 << ")\n";
        if (r.pair) {
            out << "pair      (" << r.pair->low << ", " << r.pair->high << ")  (residual " << *r.residual_pair
                << ")\n";
        }
    }
    return kSuccess;
}

int cmd_boundary_law(const RunConfig& c, std::ostream& out) {
    const auto spec = require_activities(c);
    const Laws laws = laws_for(spec, c);
    const bool periodic = laws.pair.has_value();
    const BoundaryLaw& first = periodic ? laws.pair->even : laws.ti;
    if (c.out == "csv") {
        out << std::setprecision(17) << (periodic ? "index,z_even,z_odd\n" : "index,z\n");
        for (long i = -c.range; i <= c.range; ++i) {
            out << i << ',' << first.z(i);
            if (periodic) out << ',' << laws.pair->odd.z(i);
            out << '\n';
        }
        return kSuccess;
    }
    auto describe = [&](const BoundaryLaw& law) {
        json z = json::object();
        for (long i = -c.range; i <= c.range; ++i) z[std::to_string(i)] = law.z(i);
        const auto norm = normalisability_check(law, 1e-10);
        return json{{"A", law.A()},
                    {"sum", io::to_json(law_sum(law, c.tol))},
                    {"normalisable", norm.normalisable},
                    {"z", z}};
    };
    json doc{{"k", c.k}, {"measure", c.measure}};
    if (periodic) {
        doc["even"] = describe(laws.pair->even);
        doc["odd"] = describe(laws.pair->odd);
        doc["consistency_residual"] = consistency_residual(*laws.pair, c.tol);
    } else {
        doc["law"] = describe(laws.ti);
        doc["consistency_residual"] = consistency_residual(laws.ti, c.tol);
    }
    if (c.out == "json") {
        out << doc.dump(2) << '\n';
    } else {
        out << std::setprecision(12) << "measure " << c.measure << ", k=" << c.k << '\n';
        out << "consistency residual " << doc["consistency_residual"].get<double>() << '\n';
        out << (periodic ? "   i            z_even             z_odd\n" : "   i                 z\n");
        for (long i = -c.range; i <= c.range; ++i) {
            out << std::setw(4) << i << "  " << std::setw(16) << first.z(i);
            if (periodic) out << "  " << std::setw(16) << laws.pair->odd.z(i);
            out << '\n';
        }
    }
    return kSuccess;
}

int cmd_chain(const RunConfig& c, std::ostream& out) {
    const auto spec = require_activities(c);
    const Laws laws = laws_for(spec, c);
    const double tail_tol = std::max(c.tol, 1e-12);
    long N = c.truncate;
    if (N <= 0) {
        N = laws.pair ? std::max(required_truncation(laws.pair->even, tail_tol),
                                 required_truncation(laws.pair->odd, tail_tol))
                      : required_truncation(laws.ti, tail_tol);
    }
    const auto P = laws.pair ? build_periodic_kernel(*laws.pair, N, tail_tol) : build_ti_kernel(laws.ti, N, tail_tol);
    const auto X = laws.pair ? stationary_periodic(*laws.pair, c.tol) : stationary_ti(laws.ti, c.tol);
    const double residual = stationarity_residual(X, P);
    const Eigen::VectorXd x = X.truncated(N);
    if (c.out == "csv") {
        io::write_indexed_csv(out, x, N);
    } else if (c.out == "json") {
        json doc{{"k", c.k},
                 {"measure", c.measure},
                 {"kernel", P.kind() == KernelKind::TranslationInvariant ? "single-step" : "two-step"},
                 {"truncation", N},
                 {"S", X.S()},
                 {"S_tilde", X.S_tilde()},
                 {"residual", residual},
                 {"row_zero", vector_json(P.row_zero(), N)},
                 {"shared_row", vector_json(P.shared_row(), N)},
                 {"stationary", vector_json(x, N)}};
        out << doc.dump(2) << '\n';
    } else {
        out << std::setprecision(12) << "measure " << c.measure << ", k=" << c.k << ", truncation N=" << N << '\n';
        out << "S = " << X.S() << ", S~ = " << X.S_tilde() << '\n';
        out << "x_0 = " << X(0) << '\n';
        for (long j = 1; j <= std::min<long>(5, N); ++j) out << "x_" << j << " = " << X(j) << ", x_" << -j << " = " << X(-j) << '\n';
        out << "stationarity residual " << residual << '\n';
    }
    return kSuccess;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
    const auto spec = require_activities(c);
    const Laws laws = laws_for(spec, c);
    // MeasureSpec::periodic swaps for Mu2 itself, so hand it the Mu1 orientation
    const MeasureSpec tagged = !laws.pair ? MeasureSpec::translation_invariant(laws.ti)
                               : laws.measure == Measure::Mu1
                                   ? MeasureSpec::periodic(*laws.pair, Measure::Mu1)
                                   : MeasureSpec::periodic(laws.pair->swapped(), Measure::Mu2);
    const TreeSampler sampler(tagged);
    if (c.out == "csv") {
        out << "sample,level,index,spin\n";
        for (std::uint64_t i = 0; i < c.samples; ++i) io::write_sample_rows(out, sampler.sample(c.depth, batch_seed(c.seed, i)), i);
        return kSuccess;
    }
    const auto summary = simulate_batch(sampler, c.depth, c.samples, c.seed, default_thread_count());
    const double even0 = tagged.marginal_zero(Parity::Even, c.tol);
    const double odd0 = tagged.marginal_zero(Parity::Odd, c.tol);
    if (c.out == "json") {
        json doc{{"k", c.k},
                 {"measure", to_string(summary.measure)},
                 {"depth", c.depth},
                 {"samples", summary.samples},
                 {"seed", c.seed},
                 {"violations", summary.violations},
                 {"root", io::occupation_json(Parity::Even, summary.root.frequencies())},
                 {"parities",
                  json::array({io::occupation_json(Parity::Even, summary.even.frequencies()),
                               io::occupation_json(Parity::Odd, summary.odd.frequencies())})},
                 {"theory", {{"even_x0", even0}, {"odd_x0", odd0}}}};
        out << doc.dump(2) << '\n';
    } else {
        out << std::setprecision(8) << "measure " << to_string(summary.measure) << ", k=" << c.k << ", depth "
            << c.depth << ", " << summary.samples << " samples, seed " << c.seed << '\n';
        out << "admissibility violations " << summary.violations << '\n';
        out << "root  freq(0) " << summary.root.frequency(0) << "  theory " << even0 << '\n';
        out << "even  freq(0) " << summary.even.frequency(0) << "  theory " << even0 << '\n';
        out << "odd   freq(0) " << summary.odd.frequency(0) << "  theory " << odd0 << '\n';
    }
    return summary.violations == 0 ? kSuccess : kNumericalFailure;
}

int cmd_reproduce(const RunConfig& c, std::ostream& out) {
    std::vector<int> which;
    if (c.example == 0) {
        which = {1, 2, 3, 4, 5};
    } else {
        which = {c.example};
    }
    bool all = true;
    json doc = json::array();
    for (int n : which) {
        const auto rep = reproduce_example(n);
        all = all && rep.pass();
        if (c.out == "json") {
            json rows = json::array();
            for (const auto& r : rep.rows) {
                rows.push_back({{"name", r.name},
                                {"expected", r.expected},
                                {"got", r.got},
                                {"tol", r.tol},
                                {"status", r.informational ? "INFO" : (r.pass() ? "PASS" : "FAIL")}});
            }
            doc.push_back({{"example", n}, {"title", rep.title}, {"pass", rep.pass()}, {"rows", rows}});
            continue;
        }
        out << "Example " << n << ": " << rep.title << '\n';
        out << std::left << std::setw(40) << "  quantity" << std::setw(22) << "expected" << std::setw(22) << "got"
            << std::setw(10) << "tol" << "status\n";
        for (const auto& r : rep.rows) {
            out << "  " << std::setw(38) << r.name << std::setprecision(15) << std::setw(22) << r.expected
                << std::setw(22) << r.got << std::setprecision(2) << std::setw(10) << r.tol
                << (r.informational ? "INFO" : (r.pass() ? "PASS" : "FAIL")) << '\n';
        }
        out << std::right << (rep.pass() ? "PASS\n\n" : "FAIL\n\n");
    }
    if (c.out == "json") out << doc.dump(2) << '\n';
    return all ? kSuccess : kReproduceFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gibbs measures of the countable-spin hard-core model on Cayley trees", "hcgibbs"};
    app.require_subcommand(1);
    RunConfig c;

    const std::vector<std::string> formats{"json", "csv", "text"};
    const std::vector<std::string> measures{"mu0", "mu1", "mu2"};
    auto common = [&](CLI::App* sub) {
        sub->add_option("--k", c.k, "tree order (>= 2)")->check(CLI::Range(2, 64));
        sub->add_option("--tol", c.tol, "root residual / series tail tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--out", c.out, "output format")->check(CLI::IsMember(formats));
    };
    auto with_activities = [&](CLI::App* sub) { sub->add_option("--activities", c.activities, "activity-spec JSON"); };
    auto with_measure = [&](CLI::App* sub) {
        sub->add_option("--measure", c.measure, "mu0 (TI), mu1 or mu2 (two-periodic)")->check(CLI::IsMember(measures));
    };

    auto* phase = app.add_subcommand("phase", "classify the phase regime and list the fixed points");
    common(phase);
    with_activities(phase);
    phase->add_option("--lambda", c.lambda, "total activity sum")->check(CLI::PositiveNumber);

    auto* boundary = app.add_subcommand("boundary-law", "boundary-law values over an index range");
    common(boundary);
    with_activities(boundary);
    with_measure(boundary);
    boundary->add_option("--range", c.range, "print z(i) for |i| <= range")->check(CLI::NonNegativeNumber);

    auto* chain = app.add_subcommand("chain", "transition kernel, stationary vector and residual");
    common(chain);
    with_activities(chain);
    with_measure(chain);
    chain->add_option("--truncate", c.truncate, "truncation level N (default: automatic)")->check(CLI::PositiveNumber);

    auto* simulate = app.add_subcommand("simulate", "sample admissible configurations on the ball V_n");
    common(simulate);
    with_activities(simulate);
    with_measure(simulate);
    simulate->add_option("--depth", c.depth, "ball radius n")->check(CLI::Range(0, 24));
    simulate->add_option("--samples", c.samples, "number of samples")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", c.seed, "base seed");

    auto* reproduce = app.add_subcommand("reproduce", "rerun the worked examples and check their values");
    reproduce->add_option("--example", c.example, "example number (default: all)")->check(CLI::Range(1, 5));
    reproduce->add_option("--out", c.out, "output format")->check(CLI::IsMember(std::vector<std::string>{"json", "text"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (*phase) return cmd_phase(c, out);
        if (*boundary) return cmd_boundary_law(c, out);
        if (*chain) return cmd_chain(c, out);
        if (*simulate) return cmd_simulate(c, out);
        if (*reproduce) return cmd_reproduce(c, out);
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kUsageError;
    } catch (const TruncationError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        if (!e.trace().empty()) err << e.trace() << '\n';
        return kNumericalFailure;
    } catch (const DivergenceError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kUsageError;
}

}  // namespace hcgibbs::cli
