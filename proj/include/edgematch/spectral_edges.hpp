#pragma once

#include "edgematch/edge_model.hpp"
#include "edgematch/image_io.hpp"

#include <optional>
#include <vector>

namespace edgematch {

/// First and second partial derivatives of the Gaussian-smoothed image,
/// computed exactly for the band-limited periodic interpolant of the raster.
struct GradientField {
    int width = 0;
    int height = 0;
    double sigma = 0.0;
    std::vector<double> gx, gy;
    std::vector<double> fxx, fxy, fyy;
    /// Largest imaginary residue left by the inverse transforms, relative to
    /// the L2 norm of the input raster.
    double imag_residue = 0.0;

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

struct EdgeExtractionConfig {
    double sigma = 2.0;
    double mag_threshold_rel = 0.25;
    double curvature_max = 0.1;
    /// Defaults to ceil(4 sigma) when unset.
    std::optional<int> border_margin;

    int effective_border_margin() const;
    void validate() const;
};

/// Spectral differentiation: multiplies the DFT by i*u / i*v (first
/// partials) or -u^2, -uv, -v^2 (second partials), with u = 2 pi k / width,
/// after smoothing by exp(-sigma^2 (u^2+v^2) / 2). Nyquist bins of the
/// differentiation multipliers are zero. sigma = 0 disables smoothing.
/// Throws Error(ImageTooSmall) below 4x4.
GradientField spectral_gradient(const GrayImage& img, double sigma);

/// Isophote (level-line) curvature per pixel; 0 where |grad f| < 1e-9.
std::vector<double> isophote_curvature(const GradientField& field);

/// Gradient magnitude, non-maximum suppression along the gradient, relative
/// threshold, quadratic subpixel refinement. Edges come out in row-major
/// pixel order.
EdgeSet extract_edges(const GrayImage& img, const EdgeExtractionConfig& cfg = {});

} // namespace edgematch
