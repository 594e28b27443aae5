#pragma once

#include <cstddef>
#include <cstdint>

namespace edgematch {

/// p: chance that a significant reference edge goes undetected in the new
/// image. m: number of candidate couples (equal first/second group sizes).
struct ProbabilityParams {
    double p = 0.0;
    std::uint64_t m = 0;

    void validate() const;
};

/// Chance that none of the m couples survives detection: [1 - (1-p)^2]^m.
double miss_probability(const ProbabilityParams& params);

/// Average number of couples tried before one survives: (1-p)^-2.
/// Throws Error(Domain) for p = 1.
double expected_trials(double p);

// Three-edge couples (collinear bases needing a third edge). A couple
// survives only when all three edges are detected: (1-p)^3. This variant is
// a modeling choice layered on the two-edge case.
double miss_probability_three_edge(const ProbabilityParams& params);
double expected_trials_three_edge(double p);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t misses = 0;
    std::uint64_t trials = 0;
};

struct MonteCarloOptions {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    /// Edges per couple: 2 (basis pair) or 3 (three-edge basis).
    int edges_per_couple = 2;
    /// 0 picks std::thread::hardware_concurrency(). The estimate does not
    /// depend on this value.
    unsigned threads = 0;
};

/// Simulates the independent-dropout model: each of m couples is detected
/// only if all its edges are; a trial misses when no couple is detected.
/// Work is split into fixed chunks with per-chunk seeds, so the result is a
/// pure function of (params, trials, seed, edges_per_couple).
MonteCarloEstimate monte_carlo_miss(const ProbabilityParams& params, const MonteCarloOptions& opts = {});

} // namespace edgematch
