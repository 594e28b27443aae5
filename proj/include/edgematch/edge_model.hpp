#pragma once

#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace edgematch {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2pi).
double wrap_angle(double a) noexcept;

/// Circular distance between two orientations, in [0, pi].
double angular_distance(double a, double b) noexcept;

/// Separation of two orientations taken modulo pi, in [0, pi/2]. Parallel and
/// anti-parallel lines both give 0.
double line_separation(double a, double b) noexcept;

struct Edge {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;      ///< tangent orientation, [0, 2pi); bright side is fixed relative to it
    double kappa = 0.0;      ///< signed isophote curvature, 1/px
    double confidence = 0.0; ///< [0, 1]
    bool reliable = false;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct EdgeSet {
    int width = 0;
    int height = 0;
    std::vector<Edge> edges;

    std::size_t size() const { return edges.size(); }
    bool empty() const { return edges.empty(); }
    bool contains(double x, double y) const {
        return x >= 0.0 && y >= 0.0 && x < width && y < height;
    }
    double diagonal() const;

    /// Throws Error(EdgeSetRange) on any broken invariant.
    void validate() const;

    friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
};

// EDGESET v1 text format:
//   EDGESET 1\n
//   <width> <height> <count>\n
//   x y theta kappa confidence reliable\n   (count lines, 6 fractional digits)
std::string serialize(const EdgeSet& set);
EdgeSet parse_edgeset(std::string_view text);

/// Rounds every real field to the 6-digit serialization grid.
EdgeSet quantize(const EdgeSet& set);

EdgeSet read_edgeset_file(const std::string& path);
void write_edgeset_file(const std::string& path, const EdgeSet& set);

/// Uniform grid over the frame of one EdgeSet. Immutable once built.
class SpatialIndex {
public:
    SpatialIndex() = default;
    SpatialIndex(const EdgeSet& set, double cell_size);

    double cell_size() const { return cell_size_; }
    int cells_x() const { return cells_x_; }
    int cells_y() const { return cells_y_; }

    /// Indices of edges within `radius` of (x, y) whose orientation is within
    /// `eps_theta` of `theta`, in ascending order. `set` must be the set the
    /// index was built from.
    std::vector<std::size_t> query_near(const EdgeSet& set, double x, double y, double radius,
                                        double theta, double eps_theta) const;

    /// Visits candidate indices (unfiltered, bucket order) in cells overlapping
    /// the query disk.
    template <typename Fn>
    void for_each_candidate(double x, double y, double radius, Fn&& fn) const;

    const std::vector<std::size_t>& bucket(int cx, int cy) const {
        return buckets_[static_cast<std::size_t>(cy) * cells_x_ + cx];
    }

private:
    double cell_size_ = 1.0;
    int cells_x_ = 0;
    int cells_y_ = 0;
    std::vector<std::vector<std::size_t>> buckets_;
};

SpatialIndex build_index(const EdgeSet& set, double cell_size);

std::vector<std::size_t> query_near(const SpatialIndex& idx, const EdgeSet& set, double x, double y,
                                    double radius, double theta, double eps_theta);

template <typename Fn>
void SpatialIndex::for_each_candidate(double x, double y, double radius, Fn&& fn) const {
    if (cells_x_ == 0 || cells_y_ == 0) return;
    const auto clamp_cell = [](double v, int n) {
        if (v < 0.0) return 0;
        if (v >= n - 1) return n - 1;
        return static_cast<int>(v);
    };
    const double lo_x = (x - radius) / cell_size_;
    const double hi_x = (x + radius) / cell_size_;
    const double lo_y = (y - radius) / cell_size_;
    const double hi_y = (y + radius) / cell_size_;
    if (hi_x < 0.0 || hi_y < 0.0 || lo_x >= cells_x_ || lo_y >= cells_y_) return;
    const int x0 = clamp_cell(lo_x, cells_x_);
    const int x1 = clamp_cell(hi_x, cells_x_);
    const int y0 = clamp_cell(lo_y, cells_y_);
    const int y1 = clamp_cell(hi_y, cells_y_);
    for (int cy = y0; cy <= y1; ++cy) {
        for (int cx = x0; cx <= x1; ++cx) {
            for (std::size_t i : bucket(cx, cy)) fn(i);
        }
    }
}

} // namespace edgematch
