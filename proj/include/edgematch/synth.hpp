#pragma once

#include "edgematch/edge_model.hpp"
#include "edgematch/hypothesis.hpp"
#include "edgematch/image_io.hpp"

#include <cstdint>
#include <vector>

namespace edgematch {

struct CorruptionSpec {
    double dropout = 0.0;
    double jitter_pos = 0.0;   ///< std-dev per axis, N-frame pixels
    double jitter_theta = 0.0; ///< std-dev, radians
    double clutter_frac = 0.0; ///< spurious edges per surviving edge
    std::uint64_t seed = 1;

    void validate() const;
};

/// n edges uniform over the frame, theta uniform in [0, 2pi), confidence
/// uniform in [0.5, 1], reliable, zero curvature.
EdgeSet random_edge_set(std::size_t n, int width, int height, std::uint64_t seed);

/// Builds a probe set for reference A: every surviving edge is placed at
/// (p_A - t) / s plus jitter, so matching N against A should recover T.
/// Clutter (round(clutter_frac * survivors) uniform edges) is appended, then
/// anything outside the out_width x out_height frame is dropped.
EdgeSet corrupt_and_transform(const EdgeSet& a, const Transform& t, const CorruptionSpec& spec, int out_width,
                              int out_height);

enum class ShapeKind { Disk, Rect };

/// Disk: center (cx, cy), radius sx. Rect: center (cx, cy), half-extents
/// (sx, sy). Coordinates put pixel centers on integers.
struct Shape {
    ShapeKind kind = ShapeKind::Disk;
    double cx = 0.0;
    double cy = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    double intensity = 1.0;

    static Shape disk(double cx, double cy, double r, double intensity) {
        return {ShapeKind::Disk, cx, cy, r, r, intensity};
    }
    static Shape rect(double cx, double cy, double half_w, double half_h, double intensity) {
        return {ShapeKind::Rect, cx, cy, half_w, half_h, intensity};
    }
};

/// 4x4 supersampled rasterization over a uniform background; later shapes
/// paint over earlier ones. Throws Error(ShapeOutOfFrame) for shapes whose
/// extent leaves [-0.5, width-0.5] x [-0.5, height-0.5].
GrayImage render_shapes(int width, int height, const std::vector<Shape>& shapes, double background = 0.0);

} // namespace edgematch
