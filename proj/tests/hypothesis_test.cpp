#include "edgematch/errors.hpp"
#include "edgematch/hypothesis.hpp"
#include "edgematch/synth.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

namespace edgematch {
namespace {

constexpr double kPi = std::numbers::pi;

Edge edge(double x, double y, double theta, double c = 1.0, bool reliable = true) {
    return {x, y, theta, 0.0, c, reliable};
}

// Orientation distance by the cosine route, independent of wrap arithmetic.
double cos_distance(double a, double b) { return std::acos(std::clamp(std::cos(a - b), -1.0, 1.0)); }

EdgeSet random_set(std::mt19937_64& gen, std::size_t n, int w, int h) {
    std::uniform_real_distribution<double> ux(0, w), uy(0, h), ut(0, 2 * kPi), uc(0.3, 1.0);
    EdgeSet s{w, h, {}};
    for (std::size_t k = 0; k < n; ++k) s.edges.push_back(edge(ux(gen), uy(gen), ut(gen), uc(gen), gen() % 4 != 0));
    return s;
}

TEST(PairQuality, Examples) {
    const double diag = 200.0;
    EXPECT_EQ(pair_quality(edge(0, 0, 0.3), edge(50, 0, 0.3), diag), 0.0);
    EXPECT_NEAR(pair_quality(edge(0, 0, 0.0), edge(100, 0, kPi / 2), diag), 1.0, 1e-12);
    EXPECT_NEAR(pair_quality(edge(0, 0, 0.0), edge(10, 0, kPi), diag), 0.0, 1e-12);
    // Distance saturates at half the diagonal.
    EXPECT_NEAR(pair_quality(edge(0, 0, 0.0), edge(180, 0, kPi / 2), diag), 1.0, 1e-12);
    EXPECT_NEAR(pair_quality(edge(0, 0, 0.0, 0.5), edge(50, 0, kPi / 2, 0.8), diag), 0.5 * 0.8 * 0.5, 1e-12);
    EXPECT_EQ(pair_quality(edge(5, 5, 0.0), edge(5, 5, kPi / 2), diag), 0.0);
}

TEST(PairQuality, BoundedProperty) {
    std::mt19937_64 gen(11);
    const EdgeSet s = random_set(gen, 60, 128, 96);
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (i == j) continue;
            const double q = pair_quality(s.edges[i], s.edges[j], s.diagonal());
            EXPECT_GE(q, 0.0);
            EXPECT_LE(q, 1.0);
            EXPECT_NEAR(q, pair_quality(s.edges[j], s.edges[i], s.diagonal()), 1e-12);
        }
    }
}

TEST(EnumerateBasisPairs, SingleEdgeGivesNothing) {
    EXPECT_TRUE(enumerate_basis_pairs(EdgeSet{100, 100, {edge(10, 10, 0.0)}}, {}).empty());
    EXPECT_TRUE(enumerate_basis_pairs(EdgeSet{100, 100, {}}, {}).empty());
}

TEST(EnumerateBasisPairs, TwoPerpendicularEdges) {
    const EdgeSet s{100, 100, {edge(10, 10, 0.0), edge(60, 70, kPi / 2)}};
    const auto pairs = enumerate_basis_pairs(s, {});
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].i, 0u);
    EXPECT_EQ(pairs[0].j, 1u);
    EXPECT_NEAR(pairs[0].dist, std::hypot(50.0, 60.0), 1e-12);
    EXPECT_NEAR(pairs[0].phi, std::atan2(60.0, 50.0), 1e-12);
}

TEST(EnumerateBasisPairs, Exclusions) {
    HypothesisConfig cfg;
    // Too close.
    EXPECT_TRUE(enumerate_basis_pairs(EdgeSet{100, 100, {edge(10, 10, 0.0), edge(15, 10, kPi / 2)}}, cfg).empty());
    // Nearly parallel lines.
    EXPECT_TRUE(enumerate_basis_pairs(EdgeSet{100, 100, {edge(10, 10, 0.1), edge(60, 70, kPi + 0.2)}}, cfg).empty());
    // Unreliable partner.
    EXPECT_TRUE(
        enumerate_basis_pairs(EdgeSet{100, 100, {edge(10, 10, 0.0), edge(60, 70, kPi / 2, 1.0, false)}}, cfg).empty());
    // Both edges lie along the joining axis (phi = 0): one at 0.2, one at -0.2 mod pi.
    EXPECT_TRUE(enumerate_basis_pairs(EdgeSet{100, 100, {edge(10, 50, 0.2), edge(80, 50, kPi - 0.2)}}, cfg).empty());
    // Only one of them along the axis is fine.
    EXPECT_EQ(enumerate_basis_pairs(EdgeSet{100, 100, {edge(10, 50, 0.2), edge(80, 50, kPi / 2)}}, cfg).size(), 1u);
}

struct OracleBasis {
    std::size_t i, j;
    double quality;
};

std::vector<OracleBasis> brute_force_bases(const EdgeSet& s, const HypothesisConfig& cfg) {
    const double diag = std::sqrt(double(s.width) * s.width + double(s.height) * s.height);
    const double min_dist = cfg.min_dist.value_or(0.15 * diag);
    const double sin_min = std::sin(cfg.min_sep_angle);
    std::vector<OracleBasis> all;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const Edge& a = s.edges[i];
            const Edge& b = s.edges[j];
            if (!a.reliable || !b.reliable) continue;
            const double d = std::hypot(b.x - a.x, b.y - a.y);
            if (d < min_dist) continue;
            // Line separation below a <= pi/2 is exactly |sin| below sin(a).
            if (std::fabs(std::sin(a.theta - b.theta)) < sin_min) continue;
            const double phi = std::atan2(b.y - a.y, b.x - a.x);
            if (std::fabs(std::sin(a.theta - phi)) < sin_min && std::fabs(std::sin(b.theta - phi)) < sin_min) continue;
            const double q = a.confidence * b.confidence * std::min(2.0 * d / diag, 1.0) *
                             std::fabs(std::sin(a.theta - b.theta));
            all.push_back({i, j, q});
        }
    }
    std::sort(all.begin(), all.end(), [](const OracleBasis& l, const OracleBasis& r) {
        return std::tie(r.quality, l.i, l.j) < std::tie(l.quality, r.i, r.j);
    });
    if (all.size() > cfg.max_basis_A) all.resize(cfg.max_basis_A);
    return all;
}

TEST(EnumerateBasisPairs, MatchesBruteForce) {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const EdgeSet s = random_set(gen, 20, 160, 120);
        HypothesisConfig cfg;
        cfg.max_basis_A = trial % 2 == 0 ? 300 : 25;
        if (trial % 3 == 0) cfg.min_dist = 5.0;
        const auto got = enumerate_basis_pairs(s, cfg);
        const auto want = brute_force_bases(s, cfg);
        ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
        for (std::size_t k = 0; k < got.size(); ++k) {
            EXPECT_EQ(got[k].i, want[k].i);
            EXPECT_EQ(got[k].j, want[k].j);
            EXPECT_NEAR(got[k].quality, want[k].quality, 1e-12);
        }
    }
}

TEST(EnumerateBasisPairs, TiesBreakByIndex) {
    // Four identical couples: quality ties everywhere, order must be (i, j).
    EdgeSet s{100, 100, {}};
    for (int k = 0; k < 4; ++k) s.edges.push_back(edge(10, 10, k % 2 == 0 ? 0.0 : kPi / 2));
    s.edges[1].x = s.edges[3].x = 70;
    s.edges[1].y = s.edges[3].y = 70;
    const auto pairs = enumerate_basis_pairs(s, {});
    ASSERT_EQ(pairs.size(), 4u);
    const std::vector<std::pair<std::size_t, std::size_t>> want{{0, 1}, {0, 3}, {1, 2}, {2, 3}};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(std::pair(pairs[k].i, pairs[k].j), want[k]);
    }
}

BasisPair basis_of(const EdgeSet& a, std::size_t i, std::size_t j) {
    const Edge& e1 = a.edges[i];
    const Edge& e2 = a.edges[j];
    return {i, j, wrap_angle(std::atan2(e2.y - e1.y, e2.x - e1.x)), std::hypot(e2.x - e1.x, e2.y - e1.y),
            pair_quality(e1, e2, a.diagonal())};
}

TEST(FindCompatiblePairs, SelfContainsIdentity) {
    std::mt19937_64 gen(3);
    EdgeSet a = random_set(gen, 40, 128, 128);
    for (Edge& e : a.edges) e.reliable = true;
    const auto bases = enumerate_basis_pairs(a, {});
    ASSERT_FALSE(bases.empty());
    for (std::size_t b = 0; b < std::min<std::size_t>(bases.size(), 20); ++b) {
        const auto pairs = find_compatible_pairs(a, a, bases[b], {});
        ASSERT_FALSE(pairs.empty());
        // Zero residual sorts first; ties only with other exact fits.
        EXPECT_EQ(pairs[0].residual, 0.0);
        const bool has_identity = std::any_of(pairs.begin(), pairs.end(), [&](const CompatiblePair& p) {
            return p.n1 == bases[b].i && p.n2 == bases[b].j && p.transform == Transform{1.0, 0.0, 0.0};
        });
        EXPECT_TRUE(has_identity);
    }
}

TEST(FindCompatiblePairs, RecoversConstructedTransform) {
    const EdgeSet a{100, 100, {edge(20, 25, 0.4), edge(50, 65, 2.0)}};
    const Transform truth{0.5, 10.0, 5.0};
    EdgeSet n{200, 200, {}};
    for (const Edge& e : a.edges) n.edges.push_back(edge(truth.unmap_x(e.x), truth.unmap_y(e.y), e.theta));
    EXPECT_EQ(n.edges[0].x, 20.0);
    EXPECT_EQ(n.edges[1].y, 120.0);
    const auto pairs = find_compatible_pairs(n, a, basis_of(a, 0, 1), {});
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].n1, 0u);
    EXPECT_EQ(pairs[0].n2, 1u);
    EXPECT_DOUBLE_EQ(pairs[0].transform.s, 0.5);
    EXPECT_DOUBLE_EQ(pairs[0].transform.tx, 10.0);
    EXPECT_DOUBLE_EQ(pairs[0].transform.ty, 5.0);
    EXPECT_NEAR(pairs[0].residual, 0.0, 1e-12);
}

TEST(FindCompatiblePairs, NoOrientationMatchGivesNothing) {
    const EdgeSet a{100, 100, {edge(20, 25, 0.4), edge(50, 65, 2.0)}};
    const EdgeSet n{100, 100, {edge(20, 25, 1.2), edge(50, 65, 2.0), edge(70, 10, 4.0)}};
    EXPECT_TRUE(find_compatible_pairs(n, a, basis_of(a, 0, 1), {}).empty());
}

TEST(FindCompatiblePairs, ScaleRangeIsEnforced) {
    const EdgeSet a{300, 300, {edge(0, 0, 0.4), edge(100, 0, 2.0)}};
    HypothesisConfig cfg;
    // dist_N = 40 gives s = 2.5 and dist_N = 210 gives s < 0.5.
    EXPECT_TRUE(find_compatible_pairs(EdgeSet{300, 300, {edge(0, 0, 0.4), edge(40, 0, 2.0)}}, a, basis_of(a, 0, 1), cfg)
                    .empty());
    EXPECT_TRUE(
        find_compatible_pairs(EdgeSet{300, 300, {edge(0, 0, 0.4), edge(210, 0, 2.0)}}, a, basis_of(a, 0, 1), cfg)
            .empty());
    EXPECT_EQ(
        find_compatible_pairs(EdgeSet{300, 300, {edge(0, 0, 0.4), edge(50, 0, 2.0)}}, a, basis_of(a, 0, 1), cfg).size(),
        1u);
}

struct OracleCompat {
    std::size_t n1, n2;
    Transform t;
    double residual;
};

std::vector<OracleCompat> exhaustive_compatible(const EdgeSet& n, const EdgeSet& a, const BasisPair& b,
                                                const HypothesisConfig& cfg) {
    const Edge& a1 = a.edges[b.i];
    const Edge& a2 = a.edges[b.j];
    std::vector<OracleCompat> all;
    for (std::size_t k1 = 0; k1 < n.size(); ++k1) {
        for (std::size_t k2 = 0; k2 < n.size(); ++k2) {
            if (k1 == k2) continue;
            const Edge& n1 = n.edges[k1];
            const Edge& n2 = n.edges[k2];
            if (cos_distance(n1.theta, a1.theta) > cfg.eps_theta) continue;
            if (cos_distance(n2.theta, a2.theta) > cfg.eps_theta) continue;
            if (cos_distance(std::atan2(n2.y - n1.y, n2.x - n1.x), b.phi) > cfg.eps_phi) continue;
            const double s = b.dist / std::hypot(n2.x - n1.x, n2.y - n1.y);
            if (s < cfg.s_min || s > cfg.s_max) continue;
            const Transform t{s, a1.x - s * n1.x, a1.y - s * n1.y};
            all.push_back({k1, k2, t, std::hypot(s * n2.x + t.tx - a2.x, s * n2.y + t.ty - a2.y)});
        }
    }
    std::sort(all.begin(), all.end(), [](const OracleCompat& l, const OracleCompat& r) {
        return std::tie(l.residual, l.n1, l.n2) < std::tie(r.residual, r.n1, r.n2);
    });
    if (all.size() > cfg.max_pairs_N) all.resize(cfg.max_pairs_N);
    return all;
}

TEST(FindCompatiblePairs, MatchesExhaustiveFiltering) {
    std::mt19937_64 gen(17);
    std::size_t nonempty = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const EdgeSet a = random_set(gen, 30, 128, 128);
        const EdgeSet n = random_set(gen, 50, 160, 140);
        HypothesisConfig cfg;
        cfg.eps_theta = 0.5;
        cfg.eps_phi = 0.5;
        cfg.max_pairs_N = trial % 2 == 0 ? 10 : 1000;
        const auto bases = enumerate_basis_pairs(a, cfg);
        for (std::size_t b = 0; b < std::min<std::size_t>(bases.size(), 5); ++b) {
            const auto got = find_compatible_pairs(n, a, bases[b], cfg);
            const auto want = exhaustive_compatible(n, a, bases[b], cfg);
            ASSERT_EQ(got.size(), want.size());
            if (!got.empty()) ++nonempty;
            for (std::size_t k = 0; k < got.size(); ++k) {
                EXPECT_EQ(got[k].n1, want[k].n1);
                EXPECT_EQ(got[k].n2, want[k].n2);
                EXPECT_EQ(got[k].transform, want[k].t);
                EXPECT_NEAR(got[k].residual, want[k].residual, 1e-9);
            }
        }
    }
    EXPECT_GT(nonempty, 20u);
}

TEST(FindCompatiblePairs, PerItemInvariants) {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 10; ++trial) {
        const EdgeSet a = random_set(gen, 40, 200, 200);
        const EdgeSet n = random_set(gen, 80, 200, 200);
        HypothesisConfig cfg;
        const auto bases = enumerate_basis_pairs(a, cfg);
        for (std::size_t b = 0; b < std::min<std::size_t>(bases.size(), 10); ++b) {
            const Edge& a1 = a.edges[bases[b].i];
            const Edge& a2 = a.edges[bases[b].j];
            const auto pairs = find_compatible_pairs(n, a, bases[b], cfg);
            EXPECT_LE(pairs.size(), cfg.max_pairs_N);
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                const auto& p = pairs[k];
                const Edge& n1 = n.edges[p.n1];
                const Edge& n2 = n.edges[p.n2];
                EXPECT_NEAR(p.transform.map_x(n1.x), a1.x, 1e-9);
                EXPECT_NEAR(p.transform.map_y(n1.y), a1.y, 1e-9);
                EXPECT_NEAR(std::hypot(p.transform.map_x(n2.x) - a2.x, p.transform.map_y(n2.y) - a2.y), p.residual,
                            1e-9);
                // Shift + scale preserves angles, so both orientation residuals are as filtered.
                EXPECT_LE(angular_distance(n1.theta, a1.theta), cfg.eps_theta);
                EXPECT_LE(angular_distance(n2.theta, a2.theta), cfg.eps_theta);
                EXPECT_GE(p.transform.s, cfg.s_min);
                EXPECT_LE(p.transform.s, cfg.s_max);
                if (k > 0) EXPECT_LE(pairs[k - 1].residual, p.residual);
            }
            EXPECT_EQ(pairs.size(), find_compatible_pairs(n, a, bases[b], cfg).size());
        }
    }
}

TEST(HypothesisConfig, Validation) {
    HypothesisConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.s_min = 1.2;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.eps_theta = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.min_sep_angle = -1.0;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(TransformTest, InverseRoundTrip) {
    const Transform t{1.12, -13.5, 40.25};
    const Transform inv = t.inverse();
    EXPECT_NEAR(inv.map_x(t.map_x(17.0)), 17.0, 1e-12);
    EXPECT_NEAR(inv.map_y(t.map_y(-3.0)), -3.0, 1e-12);
    EXPECT_NEAR(t.unmap_x(t.map_x(5.5)), 5.5, 1e-12);
}

} // namespace
} // namespace edgematch
