#pragma once

#include "edgematch/edge_model.hpp"
#include "edgematch/hypothesis.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace edgematch {

struct VerifyConfig {
    double eps_pos = 3.0;   ///< A-frame pixels
    double eps_theta = 0.2; ///< radians
    std::size_t probe_count = 20;
    double miss_factor = 0.9;
    double prune_threshold = 0.3;
    double accept_score = 0.4;
    /// Counts (A couple, N couple) hypotheses: 50 A-couple trials at the
    /// default fan-out of 10 compatible N couples each.
    std::size_t max_branches = 500;
    /// Carried through configs and results for reproducibility bookkeeping;
    /// the branch search itself is deterministic and draws nothing from it.
    std::uint64_t seed = 1;
    /// Least-squares re-fit of shift and scale on the matched pairs of each
    /// surviving branch (two rounds).
    bool refine = true;

    void validate() const;
};

using IndexPair = std::pair<std::size_t, std::size_t>; ///< (A index, N index)

struct Coincidences {
    std::vector<IndexPair> pairs;
    std::size_t a_count = 0;
    std::size_t n_visible = 0;
    double score = 0.0;

    std::size_t matched() const { return pairs.size(); }
};

/// Greedy one-to-one coincidence count of N (mapped by T) against A. N edges
/// falling outside A's frame take no part. score = 2m / (|A| + |N visible|).
Coincidences count_coincidences(const EdgeSet& a, const SpatialIndex& index_a, const EdgeSet& n, const Transform& t,
                                const VerifyConfig& cfg);

struct ProbeOutcome {
    double confidence = 0.0;
    bool pruned = false;
    std::size_t hits = 0;
    std::size_t misses = 0;
};

/// Probes the probe_count most confident A edges (ties by index) that are
/// not in `exclude` and land inside N's frame under T^-1. A miss multiplies
/// confidence by miss_factor; the branch is pruned as soon as confidence
/// drops below prune_threshold.
ProbeOutcome sequential_verify(const EdgeSet& a, const EdgeSet& n, const SpatialIndex& index_n, const Transform& t,
                               double initial_confidence, const VerifyConfig& cfg,
                               std::span<const std::size_t> exclude = {});

struct MatchResult {
    bool decided = false;
    double score = 0.0;
    std::optional<Transform> transform;
    std::vector<IndexPair> matched_pairs;
    std::size_t matched = 0;
    std::size_t a_count = 0;
    std::size_t n_visible = 0;
    std::size_t branches_tried = 0;
    double confidence = 0.0;
    /// Basis couples behind the reported transform (A indices, N indices).
    std::optional<IndexPair> basis_a;
    std::optional<IndexPair> basis_n;
};

/// Hypothesize-and-verify search over A's basis couples (best quality
/// first), fanning out to every compatible N couple. Stops after
/// max_branches branches or at the first branch scoring >= accept_score.
MatchResult match(const EdgeSet& a, const EdgeSet& n, const HypothesisConfig& hyp_cfg = {},
                  const VerifyConfig& ver_cfg = {});

/// Least-squares shift + scale taking the N side of `pairs` onto the A side.
/// Empty when fewer than two pairs or the N points coincide.
std::optional<Transform> fit_transform(const EdgeSet& a, const EdgeSet& n, std::span<const IndexPair> pairs);

} // namespace edgematch
