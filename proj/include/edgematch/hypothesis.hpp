#pragma once

#include "edgematch/edge_model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace edgematch {

/// Two edges of one set elected as a candidate frame. phi is the direction
/// from edge i to edge j, so (i, j) and (j, i) are different couples.
struct BasisPair {
    std::size_t i = 0;
    std::size_t j = 0;
    double phi = 0.0;
    double dist = 0.0;
    double quality = 0.0;
};

/// Shift + isotropic scale taking an N-frame point p to s*p + t in the A frame.
struct Transform {
    double s = 1.0;
    double tx = 0.0;
    double ty = 0.0;

    double map_x(double x) const { return s * x + tx; }
    double map_y(double y) const { return s * y + ty; }
    double unmap_x(double x) const { return (x - tx) / s; }
    double unmap_y(double y) const { return (y - ty) / s; }

    Transform inverse() const { return {1.0 / s, -tx / s, -ty / s}; }

    friend bool operator==(const Transform&, const Transform&) = default;
};

struct HypothesisConfig {
    double eps_theta = 0.15;
    double eps_phi = 0.15;
    double min_sep_angle = 0.35;
    /// Minimum basis separation in pixels; unset means 15% of the frame diagonal.
    std::optional<double> min_dist;
    double s_min = 0.5;
    double s_max = 2.0;
    std::size_t max_basis_A = 300;
    std::size_t max_pairs_N = 10;

    double effective_min_dist(const EdgeSet& set) const {
        return min_dist ? *min_dist : 0.15 * set.diagonal();
    }
    void validate() const;
};

/// c1 * c2 * min(dist / (diag/2), 1) * sin(line separation).
double pair_quality(const Edge& e1, const Edge& e2, double frame_diag);

/// Admissible couples of reliable edges (i < j), best quality first, ties by
/// (i, j), truncated to max_basis_A. A couple is rejected when its edges are
/// closer than min_dist, closer than min_sep_angle in line orientation, or
/// both run along the joining axis (within min_sep_angle of phi).
std::vector<BasisPair> enumerate_basis_pairs(const EdgeSet& a, const HypothesisConfig& cfg);

struct CompatiblePair {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    Transform transform;
    double residual = 0.0; ///< |s p_N2 + t - p_A2|, A-frame pixels
};

/// Couples of N whose orientations and axis slope agree with `basis` of A.
/// Scale is dist_A / dist_N; the shift maps N1 exactly onto A1. At most
/// max_pairs_N results, smallest residual first, ties by (n1, n2).
std::vector<CompatiblePair> find_compatible_pairs(const EdgeSet& n, const EdgeSet& a, const BasisPair& basis,
                                                  const HypothesisConfig& cfg);

} // namespace edgematch
