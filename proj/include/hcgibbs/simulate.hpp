#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hcgibbs/boundary.hpp"
#include "hcgibbs/chain.hpp"

namespace hcgibbs {

enum class Measure { Mu0, Mu1, Mu2 };
enum class Parity { Even, Odd, All };

const char* to_string(Measure m) noexcept;
const char* to_string(Parity p) noexcept;

/// Ball V_n of the Cayley tree of order k. Vertices are addressed (level, index); the root
/// (0,0) has k+1 successors, every other vertex k. Children of (m,i), m >= 1, are
/// (m+1, i·k + c) for c < k.
class TreeBall {
public:
    TreeBall(int k, int depth);

    int k() const noexcept { return k_; }
    int depth() const noexcept { return depth_; }

    /// |W_m| = (k+1)k^{m-1}, |W_0| = 1
    std::size_t level_size(int level) const;
    std::size_t vertex_count() const;
    std::size_t child_count(int level) const noexcept { return level == 0 ? k_ + 1 : k_; }
    std::size_t first_child(int level, std::size_t index) const noexcept { return level == 0 ? 0 : index * k_; }
    std::size_t parent(int level, std::size_t index) const noexcept { return level <= 1 ? 0 : index / k_; }

private:
    int k_;
    int depth_;
};

struct TreeSample {
    TreeBall ball;
    Measure measure;
    std::uint64_t seed;
    /// spins[level][index]
    std::vector<std::vector<long>> spins;

    long spin(int level, std::size_t index) const { return spins.at(level).at(index); }
};

/// Which chain to run. Mu0 uses one law on both parities; Mu1 puts pair.even on even
/// vertices, Mu2 the swap.
class MeasureSpec {
public:
    static MeasureSpec translation_invariant(const BoundaryLaw& law);
    static MeasureSpec periodic(const PeriodicLawPair& pair, Measure branch);

    Measure tag() const noexcept { return tag_; }
    int k() const noexcept { return even_.k(); }
    const BoundaryLaw& law_for(Parity p) const noexcept { return p == Parity::Odd ? odd_ : even_; }

    /// Stationary marginal on vertices of the given parity (Even or Odd).
    Eigen::VectorXd marginal(Parity p, long truncation, double tol) const;
    double marginal_zero(Parity p, double tol) const;

private:
    MeasureSpec(Measure tag, BoundaryLaw even, BoundaryLaw odd, std::optional<PeriodicLawPair> pair)
        : tag_(tag), even_(std::move(even)), odd_(std::move(odd)), pair_(std::move(pair)) {}

    Measure tag_;
    BoundaryLaw even_;
    BoundaryLaw odd_;
    std::optional<PeriodicLawPair> pair_;
};

/// Inverse-CDF table over spins ordered 0, 1, -1, 2, -2, ...
class SpinTable {
public:
    SpinTable() = default;
    explicit SpinTable(const Eigen::VectorXd& distribution);

    long draw(double u) const;
    double probability(long spin) const;
    long truncation() const noexcept { return truncation_; }

private:
    long truncation_ = 0;
    std::vector<long> spins_;
    std::vector<double> cdf_;
};

/// Uniform in [0,1) for a vertex, derived only from (seed, level, index).
double vertex_uniform(std::uint64_t seed, int level, std::size_t index) noexcept;

/// Seed of the i-th sample in a batch.
std::uint64_t batch_seed(std::uint64_t base, std::uint64_t i) noexcept;

class TreeSampler {
public:
    /// tol bounds the tail mass dropped by truncation of each sampled distribution.
    explicit TreeSampler(MeasureSpec measure, double tol = 1e-12);

    TreeSample sample(int depth, std::uint64_t seed) const;

    const MeasureSpec& measure() const noexcept { return measure_; }
    const SpinTable& root_table() const noexcept { return root_; }
    const SpinTable& child_table(Parity p) const noexcept { return p == Parity::Odd ? child_odd_ : child_even_; }

private:
    MeasureSpec measure_;
    SpinTable root_;
    SpinTable child_even_;
    SpinTable child_odd_;
};

TreeSample sample_tree(const MeasureSpec& measure, int depth, std::uint64_t seed, double tol = 1e-12);

bool admissibility_check(const TreeSample& sample);

/// Mergeable occupation counts.
struct OccupationCounts {
    std::map<long, std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(long spin, std::uint64_t n = 1) {
        counts[spin] += n;
        total += n;
    }
    OccupationCounts& merge(const OccupationCounts& other);
    std::map<long, double> frequencies() const;
    double frequency(long spin) const;
};

OccupationCounts count_occupation(const TreeSample& sample, Parity parity);

/// Pooled frequencies over all vertices of the given parity. Throws DomainError on an empty
/// list or mixed measure tags.
std::map<long, double> empirical_marginals(std::span<const TreeSample> samples, Parity parity);

struct SimulationSummary {
    Measure measure = Measure::Mu0;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    OccupationCounts root;
    OccupationCounts even;
    OccupationCounts odd;

    SimulationSummary& merge(const SimulationSummary& other);
};

/// Draws `count` samples with seeds batch_seed(base_seed, i) on up to `threads` workers and
/// accumulates parity-resolved counts; result is independent of the thread count.
SimulationSummary simulate_batch(const TreeSampler& sampler, int depth, std::uint64_t count, std::uint64_t base_seed,
                                 unsigned threads = 1);

/// Worker cap from HCGIBBS_THREADS, else hardware concurrency.
unsigned default_thread_count();

}  // namespace hcgibbs
