#include "edgematch/edge_model.hpp"

#include "edgematch/errors.hpp"
#include "edgematch/image_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace edgematch {

double wrap_angle(double a) noexcept {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r + 0.0; // folds -0.0 to +0.0
}

double angular_distance(double a, double b) noexcept {
    const double d = std::fmod(std::fabs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

double line_separation(double a, double b) noexcept {
    const double d = angular_distance(a, b);
    return std::min(d, std::numbers::pi - d);
}

double EdgeSet::diagonal() const {
    return std::hypot(static_cast<double>(width), static_cast<double>(height));
}

void EdgeSet::validate() const {
    if (width < 1 || height < 1) {
        throw Error(Errc::EdgeSetRange, "edge set frame must be at least 1x1");
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        const auto fail = [i](const char* what) {
            throw Error(Errc::EdgeSetRange, "edge " + std::to_string(i) + ": " + what);
        };
        if (!contains(e.x, e.y)) fail("position outside frame");
        if (!(e.theta >= 0.0 && e.theta < kTwoPi)) fail("theta outside [0, 2pi)");
        if (!(e.confidence >= 0.0 && e.confidence <= 1.0)) fail("confidence outside [0, 1]");
        if (!std::isfinite(e.kappa)) fail("kappa not finite");
    }
}

namespace {

constexpr int kDigits = 6;
constexpr double kGrid = 1e-6;

void append_fixed(std::string& out, double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, kDigits);
    out.append(buf.data(), res.ptr);
}

double quantize_value(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, kDigits);
    double q = 0.0;
    std::from_chars(buf.data(), res.ptr, q);
    return q;
}

// Positions within half a grid step of the far border would print as the
// border itself; keep them on the last in-frame grid point.
double clamp_position(double v, int extent) {
    const double limit = static_cast<double>(extent) - kGrid;
    return v > limit ? limit : v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
T parse_number(std::string_view tok, const char* what) {
    T value{};
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw Error(Errc::EdgeSetMalformed, std::string("EDGESET: bad number for ") + what + ": '" +
                                                std::string(tok) + "'");
    }
    return value;
}

} // namespace

std::string serialize(const EdgeSet& set) {
    std::string out = "EDGESET 1\n";
    out += std::to_string(set.width) + ' ' + std::to_string(set.height) + ' ' + std::to_string(set.edges.size()) + '\n';
    for (const Edge& e : set.edges) {
        append_fixed(out, clamp_position(e.x, set.width));
        out += ' ';
        append_fixed(out, clamp_position(e.y, set.height));
        out += ' ';
        append_fixed(out, e.theta);
        out += ' ';
        append_fixed(out, e.kappa);
        out += ' ';
        append_fixed(out, e.confidence);
        out += e.reliable ? " 1\n" : " 0\n";
    }
    return out;
}

EdgeSet quantize(const EdgeSet& set) {
    EdgeSet q = set;
    for (Edge& e : q.edges) {
        e.x = quantize_value(clamp_position(e.x, set.width));
        e.y = quantize_value(clamp_position(e.y, set.height));
        e.theta = quantize_value(e.theta);
        e.kappa = quantize_value(e.kappa);
        e.confidence = quantize_value(e.confidence);
    }
    return q;
}

EdgeSet parse_edgeset(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    if (lines.empty()) {
        throw Error(Errc::EdgeSetMalformed, "EDGESET: empty input");
    }

    const auto magic = split_ws(lines[0]);
    if (magic.empty() || magic[0] != "EDGESET") {
        throw Error(Errc::EdgeSetMalformed, "EDGESET: missing magic");
    }
    if (magic.size() != 2 || magic[1] != "1") {
        throw Error(Errc::EdgeSetVersion, "EDGESET: unsupported version");
    }
    if (lines.size() < 2) {
        throw Error(Errc::EdgeSetFieldCount, "EDGESET: missing dimension line");
    }
    const auto dims = split_ws(lines[1]);
    if (dims.size() != 3) {
        throw Error(Errc::EdgeSetFieldCount, "EDGESET: dimension line needs 3 fields");
    }
    EdgeSet set;
    set.width = parse_number<int>(dims[0], "width");
    set.height = parse_number<int>(dims[1], "height");
    const auto count = parse_number<std::size_t>(dims[2], "count");
    if (set.width < 1 || set.height < 1) {
        throw Error(Errc::EdgeSetRange, "EDGESET: frame must be at least 1x1");
    }

    std::size_t body_lines = lines.size() - 2;
    // A final newline leaves one empty trailing piece.
    while (body_lines > 0 && split_ws(lines[1 + body_lines]).empty()) --body_lines;
    if (body_lines != count) {
        throw Error(Errc::EdgeSetFieldCount, "EDGESET: header count " + std::to_string(count) +
                                                 " but " + std::to_string(body_lines) + " edge lines");
    }

    set.edges.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto f = split_ws(lines[2 + k]);
        if (f.size() != 6) {
            throw Error(Errc::EdgeSetFieldCount, "EDGESET: edge line " + std::to_string(k) + " needs 6 fields");
        }
        Edge e;
        e.x = parse_number<double>(f[0], "x");
        e.y = parse_number<double>(f[1], "y");
        e.theta = parse_number<double>(f[2], "theta");
        e.kappa = parse_number<double>(f[3], "kappa");
        e.confidence = parse_number<double>(f[4], "confidence");
        if (f[5] == "1") {
            e.reliable = true;
        } else if (f[5] == "0") {
            e.reliable = false;
        } else {
            throw Error(Errc::EdgeSetRange, "EDGESET: reliable flag must be 0 or 1");
        }
        set.edges.push_back(e);
    }
    set.validate();
    return set;
}

EdgeSet read_edgeset_file(const std::string& path) {
    return parse_edgeset(read_file_text(path));
}

void write_edgeset_file(const std::string& path, const EdgeSet& set) {
    write_file_text(path, serialize(set));
}

SpatialIndex::SpatialIndex(const EdgeSet& set, double cell_size) : cell_size_(cell_size) {
    if (!(cell_size > 0.0)) {
        throw Error(Errc::InvalidArgument, "cell_size must be > 0");
    }
    cells_x_ = std::max(1, static_cast<int>(std::ceil(set.width / cell_size)));
    cells_y_ = std::max(1, static_cast<int>(std::ceil(set.height / cell_size)));
    buckets_.resize(static_cast<std::size_t>(cells_x_) * cells_y_);
    for (std::size_t i = 0; i < set.edges.size(); ++i) {
        const int cx = std::clamp(static_cast<int>(std::floor(set.edges[i].x / cell_size)), 0, cells_x_ - 1);
        const int cy = std::clamp(static_cast<int>(std::floor(set.edges[i].y / cell_size)), 0, cells_y_ - 1);
        buckets_[static_cast<std::size_t>(cy) * cells_x_ + cx].push_back(i);
    }
}

std::vector<std::size_t> SpatialIndex::query_near(const EdgeSet& set, double x, double y, double radius,
                                                  double theta, double eps_theta) const {
    std::vector<std::size_t> out;
    for_each_candidate(x, y, radius, [&](std::size_t i) {
        const Edge& e = set.edges[i];
        if (std::hypot(e.x - x, e.y - y) <= radius && angular_distance(e.theta, theta) <= eps_theta) {
            out.push_back(i);
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

SpatialIndex build_index(const EdgeSet& set, double cell_size) {
    return SpatialIndex(set, cell_size);
}

std::vector<std::size_t> query_near(const SpatialIndex& idx, const EdgeSet& set, double x, double y,
                                    double radius, double theta, double eps_theta) {
    return idx.query_near(set, x, y, radius, theta, eps_theta);
}

} // namespace edgematch
