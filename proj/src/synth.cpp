#include "edgematch/synth.hpp"

#include "edgematch/errors.hpp"
#include "edgematch/random.hpp"

#include <cmath>

namespace edgematch {

namespace {

// Keeps a uniform draw in [0, extent) after floating-point scaling.
double below(double v, double extent) { return v < extent ? v : std::nextafter(extent, 0.0); }

Edge random_edge(Rng& rng, int width, int height) {
    Edge e;
    e.x = below(rng.uniform() * width, width);
    e.y = below(rng.uniform() * height, height);
    e.theta = wrap_angle(rng.uniform() * kTwoPi);
    e.kappa = 0.0;
    e.confidence = rng.uniform(0.5, 1.0);
    e.reliable = true;
    return e;
}

} // namespace

void CorruptionSpec::validate() const {
    if (!(dropout >= 0.0 && dropout <= 1.0)) throw Error(Errc::InvalidArgument, "dropout must be in [0,1]");
    if (!(jitter_pos >= 0.0 && jitter_theta >= 0.0)) throw Error(Errc::InvalidArgument, "jitter must be >= 0");
    if (!(clutter_frac >= 0.0)) throw Error(Errc::InvalidArgument, "clutter_frac must be >= 0");
}

EdgeSet random_edge_set(std::size_t n, int width, int height, std::uint64_t seed) {
    if (width < 1 || height < 1) throw Error(Errc::InvalidArgument, "frame must be at least 1x1");
    Rng rng(seed);
    EdgeSet set;
    set.width = width;
    set.height = height;
    set.edges.reserve(n);
    for (std::size_t i = 0; i < n; ++i) set.edges.push_back(random_edge(rng, width, height));
    return set;
}

EdgeSet corrupt_and_transform(const EdgeSet& a, const Transform& t, const CorruptionSpec& spec, int out_width,
                              int out_height) {
    spec.validate();
    if (!(t.s > 0.0)) throw Error(Errc::InvalidArgument, "transform scale must be > 0");
    if (out_width < 1 || out_height < 1) throw Error(Errc::InvalidArgument, "frame must be at least 1x1");

    Rng rng(spec.seed);
    EdgeSet n;
    n.width = out_width;
    n.height = out_height;

    std::size_t survivors = 0;
    for (const Edge& src : a.edges) {
        // Fixed draw count per edge keeps later edges independent of earlier outcomes.
        const bool dropped = rng.bernoulli(spec.dropout);
        const double jx = rng.normal() * spec.jitter_pos;
        const double jy = rng.normal() * spec.jitter_pos;
        const double jt = rng.normal() * spec.jitter_theta;
        if (dropped) continue;
        ++survivors;
        Edge e = src;
        e.x = t.unmap_x(src.x) + jx;
        e.y = t.unmap_y(src.y) + jy;
        e.theta = wrap_angle(src.theta + jt);
        if (n.contains(e.x, e.y)) n.edges.push_back(e);
    }

    const auto clutter = static_cast<std::size_t>(std::llround(spec.clutter_frac * static_cast<double>(survivors)));
    for (std::size_t i = 0; i < clutter; ++i) n.edges.push_back(random_edge(rng, out_width, out_height));
    return n;
}

GrayImage render_shapes(int width, int height, const std::vector<Shape>& shapes, double background) {
    if (width < 1 || height < 1) throw Error(Errc::InvalidArgument, "frame must be at least 1x1");
    if (!(background >= 0.0 && background <= 1.0)) throw Error(Errc::InvalidArgument, "background outside [0,1]");
    for (const Shape& s : shapes) {
        const bool inside = s.cx - s.sx >= -0.5 && s.cx + s.sx <= width - 0.5 && s.cy - s.sy >= -0.5 &&
                            s.cy + s.sy <= height - 0.5;
        if (!inside || !(s.sx > 0.0 && s.sy > 0.0)) {
            throw Error(Errc::ShapeOutOfFrame, "shape extends outside the frame");
        }
        if (!(s.intensity >= 0.0 && s.intensity <= 1.0)) {
            throw Error(Errc::InvalidArgument, "shape intensity outside [0,1]");
        }
    }

    constexpr int kSub = 4;
    GrayImage img(width, height, background);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int sy = 0; sy < kSub; ++sy) {
                const double py = y - 0.5 + (sy + 0.5) / kSub;
                for (int sx = 0; sx < kSub; ++sx) {
                    const double px = x - 0.5 + (sx + 0.5) / kSub;
                    double value = background;
                    for (const Shape& s : shapes) {
                        const double dx = px - s.cx;
                        const double dy = py - s.cy;
                        const bool hit = s.kind == ShapeKind::Disk
                                             ? dx * dx + dy * dy <= s.sx * s.sx
                                             : std::fabs(dx) <= s.sx && std::fabs(dy) <= s.sy;
                        if (hit) value = s.intensity;
                    }
                    acc += value;
                }
            }
            img.at(x, y) = acc / (kSub * kSub);
        }
    }
    return img;
}

} // namespace edgematch
