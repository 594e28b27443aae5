#include "edgematch/probability.hpp"

#include "edgematch/errors.hpp"
#include "edgematch/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace edgematch {

namespace {

constexpr std::uint64_t kChunkTrials = 1 << 16;

void check_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "p must lie in [0,1]");
}

} // namespace

void ProbabilityParams::validate() const { check_p(p); }

double miss_probability(const ProbabilityParams& params) {
    params.validate();
    const double q = 1.0 - params.p;
    return std::pow(1.0 - q * q, static_cast<double>(params.m));
}

double expected_trials(double p) {
    check_p(p);
    if (p == 1.0) throw Error(Errc::Domain, "expected_trials is undefined for p = 1");
    return std::pow(1.0 - p, -2.0);
}

double miss_probability_three_edge(const ProbabilityParams& params) {
    params.validate();
    const double q = 1.0 - params.p;
    return std::pow(1.0 - q * q * q, static_cast<double>(params.m));
}

double expected_trials_three_edge(double p) {
    check_p(p);
    if (p == 1.0) throw Error(Errc::Domain, "expected_trials is undefined for p = 1");
    return std::pow(1.0 - p, -3.0);
}

MonteCarloEstimate monte_carlo_miss(const ProbabilityParams& params, const MonteCarloOptions& opts) {
    params.validate();
    if (opts.trials < 1) throw Error(Errc::InvalidArgument, "trials must be >= 1");
    if (opts.edges_per_couple != 2 && opts.edges_per_couple != 3) {
        throw Error(Errc::InvalidArgument, "edges_per_couple must be 2 or 3");
    }

    const std::uint64_t chunks = (opts.trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<std::uint64_t> chunk_misses(chunks, 0);

    const auto run_chunk = [&](std::uint64_t c) {
        Rng rng(mix_seed(opts.seed, c));
        const std::uint64_t begin = c * kChunkTrials;
        const std::uint64_t end = std::min(opts.trials, begin + kChunkTrials);
        std::uint64_t misses = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            bool found = false;
            // Stop at the first detected couple; later draws cannot change the trial.
            for (std::uint64_t k = 0; k < params.m && !found; ++k) {
                bool detected = true;
                for (int e = 0; e < opts.edges_per_couple; ++e) {
                    if (rng.bernoulli(params.p)) detected = false;
                }
                found = detected;
            }
            if (!found) ++misses;
        }
        chunk_misses[c] = misses;
    };

    unsigned threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
    if (threads <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back([&] {
                for (std::uint64_t c = next++; c < chunks; c = next++) run_chunk(c);
            });
        }
    }

    MonteCarloEstimate out;
    out.trials = opts.trials;
    for (auto m : chunk_misses) out.misses += m;
    out.estimate = static_cast<double>(out.misses) / static_cast<double>(opts.trials);
    out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(opts.trials));
    return out;
}

} // namespace edgematch
