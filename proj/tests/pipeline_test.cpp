#include "edgematch/spectral_edges.hpp"
#include "edgematch/synth.hpp"
#include "edgematch/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace edgematch {
namespace {

// A face-like arrangement of shapes, drawn in N coordinates as the A-frame
// layout pulled back through t (p_N = (p_A - t) / s).
GrayImage render_scene(const Transform& t, int width, int height) {
    struct Part {
        ShapeKind kind;
        double cx, cy, sx, sy, v;
    };
    const Part parts[] = {
        {ShapeKind::Rect, 128, 130, 70, 90, 0.6},  // head
        {ShapeKind::Disk, 100, 100, 14, 14, 0.1},  // eyes
        {ShapeKind::Disk, 156, 100, 14, 14, 0.1},
        {ShapeKind::Disk, 100, 100, 5, 5, 0.9},
        {ShapeKind::Disk, 156, 100, 5, 5, 0.9},
        {ShapeKind::Rect, 128, 140, 6, 20, 0.8},   // nose
        {ShapeKind::Rect, 128, 185, 30, 6, 0.2},   // mouth
        {ShapeKind::Disk, 80, 180, 9, 9, 0.35},
        {ShapeKind::Rect, 185, 60, 12, 8, 0.9},
    };
    std::vector<Shape> shapes;
    for (const Part& p : parts) {
        shapes.push_back({p.kind, t.unmap_x(p.cx), t.unmap_y(p.cy), p.sx / t.s, p.sy / t.s, p.v});
    }
    return render_shapes(width, height, shapes, 0.3);
}

TEST(Pipeline, RenderedSelfMatch) {
    const GrayImage img = render_scene({}, 256, 256);
    const EdgeSet a = extract_edges(img, {});
    ASSERT_GT(a.size(), 200u);
    const MatchResult r = match(a, a);
    ASSERT_TRUE(r.decided);
    EXPECT_NEAR(r.transform->s, 1.0, 0.01);
    EXPECT_LE(std::hypot(r.transform->tx, r.transform->ty), 0.5);
    EXPECT_GE(r.score, 0.95);
}

TEST(Pipeline, RenderedRescaledView) {
    const EdgeSet a = extract_edges(render_scene({}, 256, 256), {});
    for (const Transform truth : {Transform{1.12, -10.0, -6.0}, Transform{0.85, 20.0, 15.0}}) {
        const EdgeSet n = extract_edges(render_scene(truth, 300, 300), {});
        const MatchResult r = match(a, n);
        ASSERT_TRUE(r.decided) << "s " << truth.s << " score " << r.score;
        EXPECT_NEAR(r.transform->s, truth.s, 0.02 * truth.s);
        // Compare where the transforms send the probe-frame center.
        EXPECT_LE(std::hypot(r.transform->map_x(150) - truth.map_x(150), r.transform->map_y(150) - truth.map_y(150)),
                  3.0);
    }
}

TEST(Pipeline, DifferentScenesReject) {
    const EdgeSet a = extract_edges(render_scene({}, 256, 256), {});
    const EdgeSet other = extract_edges(
        render_shapes(256, 256,
                      {Shape::disk(60, 70, 25, 0.9), Shape::rect(170, 160, 40, 20, 0.1), Shape::disk(190, 60, 12, 0.7),
                       Shape::rect(70, 200, 15, 30, 0.8)},
                      0.4),
        {});
    const MatchResult r = match(a, other);
    EXPECT_FALSE(r.decided) << r.score;
}

} // namespace
} // namespace edgematch
