#include "edgematch/verification.hpp"

#include "edgematch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace edgematch {

void VerifyConfig::validate() const {
    if (!(eps_pos > 0.0)) throw Error(Errc::InvalidArgument, "eps_pos must be > 0");
    if (!(eps_theta > 0.0)) throw Error(Errc::InvalidArgument, "eps_theta must be > 0");
    if (!(miss_factor > 0.0 && miss_factor < 1.0)) throw Error(Errc::InvalidArgument, "miss_factor must be in (0,1)");
    if (!(prune_threshold >= 0.0 && prune_threshold < 1.0)) {
        throw Error(Errc::InvalidArgument, "prune_threshold must be in [0,1)");
    }
    if (!(accept_score > 0.0 && accept_score < 1.0)) throw Error(Errc::InvalidArgument, "accept_score must be in (0,1)");
}

namespace {

std::vector<std::size_t> by_confidence(const EdgeSet& set) {
    std::vector<std::size_t> order(set.edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return set.edges[l].confidence > set.edges[r].confidence;
    });
    return order;
}

} // namespace

Coincidences count_coincidences(const EdgeSet& a, const SpatialIndex& index_a, const EdgeSet& n, const Transform& t,
                                const VerifyConfig& cfg) {
    Coincidences out;
    out.a_count = a.edges.size();

    std::vector<char> a_taken(a.edges.size(), 0);
    for (std::size_t k : by_confidence(n)) {
        const Edge& e = n.edges[k];
        const double x = t.map_x(e.x);
        const double y = t.map_y(e.y);
        if (!a.contains(x, y)) continue;
        ++out.n_visible;

        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        index_a.for_each_candidate(x, y, cfg.eps_pos, [&](std::size_t i) {
            if (a_taken[i]) return;
            const Edge& c = a.edges[i];
            const double d = std::hypot(c.x - x, c.y - y);
            if (d > cfg.eps_pos || angular_distance(c.theta, e.theta) > cfg.eps_theta) return;
            if (d < best_d || (d == best_d && i < best)) {
                best_d = d;
                best = i;
            }
        });
        if (std::isfinite(best_d)) {
            a_taken[best] = 1;
            out.pairs.emplace_back(best, k);
        }
    }

    const std::size_t denom = out.a_count + out.n_visible;
    out.score = denom == 0 ? 0.0 : 2.0 * static_cast<double>(out.pairs.size()) / static_cast<double>(denom);
    return out;
}

ProbeOutcome sequential_verify(const EdgeSet& a, const EdgeSet& n, const SpatialIndex& index_n, const Transform& t,
                               double initial_confidence, const VerifyConfig& cfg,
                               std::span<const std::size_t> exclude) {
    ProbeOutcome out;
    out.confidence = initial_confidence;
    if (out.confidence < cfg.prune_threshold) {
        out.pruned = true;
        return out;
    }

    const double radius_n = cfg.eps_pos / t.s; // eps_pos is an A-frame length
    std::size_t probed = 0;
    for (std::size_t i : by_confidence(a)) {
        if (probed >= cfg.probe_count) break;
        if (std::find(exclude.begin(), exclude.end(), i) != exclude.end()) continue;
        const Edge& e = a.edges[i];
        const double x = t.unmap_x(e.x);
        const double y = t.unmap_y(e.y);
        if (!n.contains(x, y)) continue;
        ++probed;

        bool hit = false;
        index_n.for_each_candidate(x, y, radius_n, [&](std::size_t k) {
            if (hit) return;
            const Edge& c = n.edges[k];
            hit = std::hypot(c.x - x, c.y - y) <= radius_n && angular_distance(c.theta, e.theta) <= cfg.eps_theta;
        });
        if (hit) {
            ++out.hits;
            continue;
        }
        ++out.misses;
        out.confidence *= cfg.miss_factor;
        if (out.confidence < cfg.prune_threshold) {
            out.pruned = true;
            break;
        }
    }
    return out;
}

std::optional<Transform> fit_transform(const EdgeSet& a, const EdgeSet& n, std::span<const IndexPair> pairs) {
    if (pairs.size() < 2) return std::nullopt;
    double ax = 0, ay = 0, nx = 0, ny = 0;
    for (const auto& [ia, in] : pairs) {
        ax += a.edges[ia].x;
        ay += a.edges[ia].y;
        nx += n.edges[in].x;
        ny += n.edges[in].y;
    }
    const double inv = 1.0 / static_cast<double>(pairs.size());
    ax *= inv;
    ay *= inv;
    nx *= inv;
    ny *= inv;
    double cross = 0, spread = 0;
    for (const auto& [ia, in] : pairs) {
        const double dnx = n.edges[in].x - nx;
        const double dny = n.edges[in].y - ny;
        cross += dnx * (a.edges[ia].x - ax) + dny * (a.edges[ia].y - ay);
        spread += dnx * dnx + dny * dny;
    }
    if (!(spread > 0.0)) return std::nullopt;
    const double s = cross / spread;
    if (!(s > 0.0)) return std::nullopt;
    return Transform{s, ax - s * nx, ay - s * ny};
}

MatchResult match(const EdgeSet& a, const EdgeSet& n, const HypothesisConfig& hyp_cfg, const VerifyConfig& ver_cfg) {
    hyp_cfg.validate();
    ver_cfg.validate();

    MatchResult result;
    result.a_count = a.edges.size();

    const SpatialIndex index_a(a, ver_cfg.eps_pos);
    const SpatialIndex index_n(n, ver_cfg.eps_pos);
    const auto bases = enumerate_basis_pairs(a, hyp_cfg);

    struct Branch {
        Transform transform;
        Coincidences counts;
        double confidence = 0.0;
        IndexPair basis_a;
        IndexPair basis_n;
    };
    std::optional<Branch> best;
    std::size_t ordinal = 0;
    bool accepted = false;

    for (const BasisPair& basis : bases) {
        if (accepted || ordinal >= ver_cfg.max_branches) break;
        for (const CompatiblePair& cp : find_compatible_pairs(n, a, basis, hyp_cfg)) {
            if (ordinal >= ver_cfg.max_branches) break;
            ++ordinal;

            const std::size_t exclude[] = {basis.i, basis.j};
            const ProbeOutcome probe =
                sequential_verify(a, n, index_n, cp.transform, basis.quality, ver_cfg, exclude);
            if (probe.pruned) continue;

            Branch branch{cp.transform, count_coincidences(a, index_a, n, cp.transform, ver_cfg), probe.confidence,
                          {basis.i, basis.j}, {cp.n1, cp.n2}};
            if (ver_cfg.refine) {
                for (int round = 0; round < 2; ++round) {
                    const auto fitted = fit_transform(a, n, branch.counts.pairs);
                    if (!fitted) break;
                    auto recount = count_coincidences(a, index_a, n, *fitted, ver_cfg);
                    // The fit is a better estimate than the two-edge basis; greedy
                    // matching noise may cost it a few pairs, but not more than 1%.
                    const std::size_t floor = branch.counts.matched() - branch.counts.matched() / 100;
                    if (recount.matched() < floor) break;
                    branch.transform = *fitted;
                    branch.counts = std::move(recount);
                }
            }
            // Strictly greater keeps the lowest ordinal on ties.
            if (!best || branch.counts.score > best->counts.score) best = std::move(branch);
            if (best->counts.score >= ver_cfg.accept_score) {
                accepted = true;
                break;
            }
        }
    }

    result.branches_tried = ordinal;
    if (!best) return result;

    result.decided = best->counts.score >= ver_cfg.accept_score;
    result.score = best->counts.score;
    result.transform = best->transform;
    result.matched_pairs = best->counts.pairs;
    result.matched = best->counts.matched();
    result.n_visible = best->counts.n_visible;
    result.confidence = best->confidence;
    result.basis_a = best->basis_a;
    result.basis_n = best->basis_n;
    return result;
}

} // namespace edgematch
