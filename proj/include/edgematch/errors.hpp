#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgematch {

/// Distinguishes the failure reports raised across the library.
enum class Errc {
    // PGM decoding
    ImageBadMagic,
    ImageTruncated,
    ImageZeroDimension,
    ImageBadMaxval,
    ImageMalformed,
    // spectral analysis
    ImageTooSmall,
    // EDGESET v1 parsing
    EdgeSetVersion,
    EdgeSetFieldCount,
    EdgeSetRange,
    EdgeSetMalformed,
    // argument / domain checks
    InvalidArgument,
    Domain,
    ShapeOutOfFrame,
    // gallery
    GalleryDuplicateId,
    GalleryInvalidId,
    GalleryEmpty,
    GalleryCorrupt,
    Io,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace edgematch
