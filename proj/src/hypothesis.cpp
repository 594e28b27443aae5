#include "edgematch/hypothesis.hpp"

#include "edgematch/errors.hpp"

#include <algorithm>
#include <cmath>

namespace edgematch {

void HypothesisConfig::validate() const {
    if (!(eps_theta > 0.0 && eps_phi > 0.0)) throw Error(Errc::InvalidArgument, "tolerances must be > 0");
    if (!(min_sep_angle > 0.0)) throw Error(Errc::InvalidArgument, "min_sep_angle must be > 0");
    if (!(s_min > 0.0 && s_min <= 1.0 && s_max >= 1.0)) {
        throw Error(Errc::InvalidArgument, "scale range must satisfy 0 < s_min <= 1 <= s_max");
    }
    if (min_dist && !(*min_dist >= 0.0)) throw Error(Errc::InvalidArgument, "min_dist must be >= 0");
}

double pair_quality(const Edge& e1, const Edge& e2, double frame_diag) {
    const double dist = std::hypot(e2.x - e1.x, e2.y - e1.y);
    const double spread = frame_diag > 0.0 ? std::min(dist / (0.5 * frame_diag), 1.0) : 0.0;
    return e1.confidence * e2.confidence * spread * std::sin(line_separation(e1.theta, e2.theta));
}

std::vector<BasisPair> enumerate_basis_pairs(const EdgeSet& a, const HypothesisConfig& cfg) {
    cfg.validate();
    const double min_dist = cfg.effective_min_dist(a);
    const double diag = a.diagonal();

    std::vector<std::size_t> reliable;
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        if (a.edges[i].reliable) reliable.push_back(i);
    }

    std::vector<BasisPair> pairs;
    for (std::size_t p = 0; p < reliable.size(); ++p) {
        const Edge& e1 = a.edges[reliable[p]];
        for (std::size_t q = p + 1; q < reliable.size(); ++q) {
            const Edge& e2 = a.edges[reliable[q]];
            const double dist = std::hypot(e2.x - e1.x, e2.y - e1.y);
            if (dist < min_dist || dist <= 0.0) continue;
            if (line_separation(e1.theta, e2.theta) < cfg.min_sep_angle) continue;
            const double phi = wrap_angle(std::atan2(e2.y - e1.y, e2.x - e1.x));
            if (line_separation(e1.theta, phi) < cfg.min_sep_angle &&
                line_separation(e2.theta, phi) < cfg.min_sep_angle) {
                continue;
            }
            pairs.push_back({reliable[p], reliable[q], phi, dist, pair_quality(e1, e2, diag)});
        }
    }

    const auto better = [](const BasisPair& l, const BasisPair& r) {
        if (l.quality != r.quality) return l.quality > r.quality;
        if (l.i != r.i) return l.i < r.i;
        return l.j < r.j;
    };
    if (pairs.size() > cfg.max_basis_A) {
        std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(cfg.max_basis_A), pairs.end(),
                          better);
        pairs.resize(cfg.max_basis_A);
    } else {
        std::sort(pairs.begin(), pairs.end(), better);
    }
    return pairs;
}

std::vector<CompatiblePair> find_compatible_pairs(const EdgeSet& n, const EdgeSet& a, const BasisPair& basis,
                                                  const HypothesisConfig& cfg) {
    const Edge& a1 = a.edges[basis.i];
    const Edge& a2 = a.edges[basis.j];

    // One orientation pass over N yields both candidate lists; the pair loop
    // then only touches edges that can possibly match.
    std::vector<std::size_t> first, second;
    for (std::size_t k = 0; k < n.edges.size(); ++k) {
        if (angular_distance(n.edges[k].theta, a1.theta) <= cfg.eps_theta) first.push_back(k);
        if (angular_distance(n.edges[k].theta, a2.theta) <= cfg.eps_theta) second.push_back(k);
    }

    std::vector<CompatiblePair> out;
    for (std::size_t k1 : first) {
        const Edge& n1 = n.edges[k1];
        for (std::size_t k2 : second) {
            if (k1 == k2) continue;
            const Edge& n2 = n.edges[k2];
            const double ddx = n2.x - n1.x;
            const double ddy = n2.y - n1.y;
            const double dist_n = std::hypot(ddx, ddy);
            if (!(dist_n > 0.0)) continue;
            if (angular_distance(std::atan2(ddy, ddx), basis.phi) > cfg.eps_phi) continue;
            const double s = basis.dist / dist_n;
            if (s < cfg.s_min || s > cfg.s_max) continue;
            const Transform t{s, a1.x - s * n1.x, a1.y - s * n1.y};
            const double residual = std::hypot(t.map_x(n2.x) - a2.x, t.map_y(n2.y) - a2.y);
            out.push_back({k1, k2, t, residual});
        }
    }

    const auto better = [](const CompatiblePair& l, const CompatiblePair& r) {
        if (l.residual != r.residual) return l.residual < r.residual;
        if (l.n1 != r.n1) return l.n1 < r.n1;
        return l.n2 < r.n2;
    };
    if (out.size() > cfg.max_pairs_N) {
        std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(cfg.max_pairs_N), out.end(), better);
        out.resize(cfg.max_pairs_N);
    } else {
        std::sort(out.begin(), out.end(), better);
    }
    return out;
}

} // namespace edgematch
