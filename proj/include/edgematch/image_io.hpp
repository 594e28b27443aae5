#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace edgematch {

/// Row-major grayscale raster, intensities in [0,1]. Pixel (x, y) has its
/// center at continuous coordinate (x, y); x grows rightward, y downward.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    std::size_t size() const { return pixels.size(); }

    /// Throws InvalidArgument if dimensions or intensities break the invariants.
    void validate() const;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Decodes a P2 or P5 PGM (maxval up to 65535, '#' comments allowed in the
/// header). Samples are divided by maxval.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Encodes with maxval 255; each sample is floor(255 v + 0.5).
std::vector<std::uint8_t> save_pgm(const GrayImage& img, bool ascii = false);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const GrayImage& img, bool ascii = false);

// Small file helpers shared by the CLI and the gallery.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_text(const std::filesystem::path& path, const std::string& text);

} // namespace edgematch
