#include "hcgibbs/simulate.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

#include "hcgibbs/chain.hpp"
#include "hcgibbs/errors.hpp"

namespace hcgibbs {

const char* to_string(Measure m) noexcept {
    switch (m) {
        case Measure::Mu0:
            return "mu0";
        case Measure::Mu1:
            return "mu1";
        case Measure::Mu2:
            return "mu2";
    }
    return "?";
}

const char* to_string(Parity p) noexcept {
    switch (p) {
        case Parity::Even:
            return "even";
        case Parity::Odd:
            return "odd";
        case Parity::All:
            return "all";
    }
    return "?";
}

TreeBall::TreeBall(int k, int depth) : k_(k), depth_(depth) {
    if (k < 2) throw DomainError("tree order k must be >= 2");
    if (depth < 0) throw DomainError("depth must be >= 0");
}

std::size_t TreeBall::level_size(int level) const {
    if (level == 0) return 1;
    std::size_t n = static_cast<std::size_t>(k_) + 1;
    for (int m = 1; m < level; ++m) n *= static_cast<std::size_t>(k_);
    return n;
}

std::size_t TreeBall::vertex_count() const {
    std::size_t n = 0;
    for (int m = 0; m <= depth_; ++m) n += level_size(m);
    return n;
}

MeasureSpec MeasureSpec::translation_invariant(const BoundaryLaw& law) {
    return MeasureSpec(Measure::Mu0, law, law, std::nullopt);
}

MeasureSpec MeasureSpec::periodic(const PeriodicLawPair& pair, Measure branch) {
    if (branch == Measure::Mu0) throw DomainError("periodic measure branch must be mu1 or mu2");
    PeriodicLawPair p = branch == Measure::Mu1 ? pair : pair.swapped();
    return MeasureSpec(branch, p.even, p.odd, p);
}

namespace {

StationaryDist parity_stationary(const MeasureSpec& m, const std::optional<PeriodicLawPair>& pair, Parity p,
                                 double tol) {
    if (!pair) return stationary_ti(m.law_for(Parity::Even), tol);
    // stationary_periodic(pair) is the odd-parity marginal
    return p == Parity::Odd ? stationary_periodic(*pair, tol) : stationary_periodic(pair->swapped(), tol);
}

}  // namespace

Eigen::VectorXd MeasureSpec::marginal(Parity p, long truncation, double tol) const {
    return parity_stationary(*this, pair_, p, tol).truncated(truncation);
}

double MeasureSpec::marginal_zero(Parity p, double tol) const { return parity_stationary(*this, pair_, p, tol)(0); }

SpinTable::SpinTable(const Eigen::VectorXd& distribution) : truncation_((distribution.size() - 1) / 2) {
    spins_.reserve(distribution.size());
    cdf_.reserve(distribution.size());
    double acc = 0.0;
    auto push = [&](long s) {
        acc += distribution(s + truncation_);
        spins_.push_back(s);
        cdf_.push_back(acc);
    };
    push(0);
    for (long j = 1; j <= truncation_; ++j) {
        push(j);
        push(-j);
    }
    for (double& c : cdf_) c /= acc;
}

long SpinTable::draw(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return it == cdf_.end() ? spins_.back() : spins_[static_cast<std::size_t>(it - cdf_.begin())];
}

double SpinTable::probability(long spin) const {
    const auto it = std::find(spins_.begin(), spins_.end(), spin);
    if (it == spins_.end()) return 0.0;
    const auto i = static_cast<std::size_t>(it - spins_.begin());
    return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
}

namespace {

// SplitMix64 finaliser
std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double vertex_uniform(std::uint64_t seed, int level, std::size_t index) noexcept {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(level));
    h = mix64(h ^ static_cast<std::uint64_t>(index));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::uint64_t batch_seed(std::uint64_t base, std::uint64_t i) noexcept { return mix64(mix64(base) ^ i); }

TreeSampler::TreeSampler(MeasureSpec measure, double tol) : measure_(std::move(measure)) {
    const long n_even = required_truncation(measure_.law_for(Parity::Even), tol);
    const long n_odd = required_truncation(measure_.law_for(Parity::Odd), tol);
    child_even_ = SpinTable(single_step_row(measure_.law_for(Parity::Even), n_even));
    child_odd_ = SpinTable(single_step_row(measure_.law_for(Parity::Odd), n_odd));
    root_ = SpinTable(measure_.marginal(Parity::Even, std::max(n_even, n_odd), tol));
}

TreeSample TreeSampler::sample(int depth, std::uint64_t seed) const {
    TreeSample s{TreeBall(measure_.k(), depth), measure_.tag(), seed, {}};
    s.spins.resize(static_cast<std::size_t>(depth) + 1);
    s.spins[0] = {root_.draw(vertex_uniform(seed, 0, 0))};
    for (int level = 1; level <= depth; ++level) {
        const SpinTable& table = level % 2 == 0 ? child_even_ : child_odd_;
        const auto& parents = s.spins[level - 1];
        auto& row = s.spins[level];
        row.resize(s.ball.level_size(level));
        const std::size_t fan = s.ball.child_count(level - 1);
        for (std::size_t p = 0; p < parents.size(); ++p) {
            const std::size_t first = s.ball.first_child(level - 1, p);
            for (std::size_t c = 0; c < fan; ++c) {
                const std::size_t idx = first + c;
                row[idx] = parents[p] != 0 ? 0 : table.draw(vertex_uniform(seed, level, idx));
            }
        }
    }
    return s;
}

TreeSample sample_tree(const MeasureSpec& measure, int depth, std::uint64_t seed, double tol) {
    return TreeSampler(measure, tol).sample(depth, seed);
}

bool admissibility_check(const TreeSample& sample) {
    for (int level = 1; level < static_cast<int>(sample.spins.size()); ++level) {
        const auto& row = sample.spins[level];
        for (std::size_t i = 0; i < row.size(); ++i) {
            const long parent = sample.spins[level - 1][sample.ball.parent(level, i)];
            if (parent != 0 && row[i] != 0) return false;
        }
    }
    return true;
}

OccupationCounts& OccupationCounts::merge(const OccupationCounts& other) {
    for (const auto& [s, n] : other.counts) counts[s] += n;
    total += other.total;
    return *this;
}

std::map<long, double> OccupationCounts::frequencies() const {
    std::map<long, double> f;
    if (total == 0) return f;
    for (const auto& [s, n] : counts) f[s] = static_cast<double>(n) / static_cast<double>(total);
    return f;
}

double OccupationCounts::frequency(long spin) const {
    const auto it = counts.find(spin);
    return it == counts.end() || total == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

OccupationCounts count_occupation(const TreeSample& sample, Parity parity) {
    OccupationCounts c;
    for (int level = 0; level < static_cast<int>(sample.spins.size()); ++level) {
        const bool even = level % 2 == 0;
        if (parity == Parity::Even && !even) continue;
        if (parity == Parity::Odd && even) continue;
        for (long s : sample.spins[level]) c.add(s);
    }
    return c;
}

std::map<long, double> empirical_marginals(std::span<const TreeSample> samples, Parity parity) {
    if (samples.empty()) throw DomainError("empirical marginals need at least one sample");
    OccupationCounts c;
    for (const auto& s : samples) {
        if (s.measure != samples.front().measure) throw DomainError("samples mix different measures");
        c.merge(count_occupation(s, parity));
    }
    return c.frequencies();
}

SimulationSummary& SimulationSummary::merge(const SimulationSummary& other) {
    samples += other.samples;
    violations += other.violations;
    root.merge(other.root);
    even.merge(other.even);
    odd.merge(other.odd);
    return *this;
}

SimulationSummary simulate_batch(const TreeSampler& sampler, int depth, std::uint64_t count, std::uint64_t base_seed,
                                 unsigned threads) {
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
    std::vector<SimulationSummary> parts(threads);
    auto work = [&](unsigned w) {
        SimulationSummary& part = parts[w];
        part.measure = sampler.measure().tag();
        for (std::uint64_t i = w; i < count; i += threads) {
            const TreeSample s = sampler.sample(depth, batch_seed(base_seed, i));
            ++part.samples;
            if (!admissibility_check(s)) ++part.violations;
            part.root.add(s.spins[0][0]);
            part.even.merge(count_occupation(s, Parity::Even));
            part.odd.merge(count_occupation(s, Parity::Odd));
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
        work(0);
    }
    SimulationSummary total = parts[0];
    for (unsigned w = 1; w < threads; ++w) total.merge(parts[w]);
    total.measure = sampler.measure().tag();
    return total;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("HCGIBBS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace hcgibbs
