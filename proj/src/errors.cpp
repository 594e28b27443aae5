#include "edgematch/errors.hpp"

namespace edgematch {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::ImageBadMagic: return "image-bad-magic";
    case Errc::ImageTruncated: return "image-truncated";
    case Errc::ImageZeroDimension: return "image-zero-dimension";
    case Errc::ImageBadMaxval: return "image-bad-maxval";
    case Errc::ImageMalformed: return "image-malformed";
    case Errc::ImageTooSmall: return "image-too-small";
    case Errc::EdgeSetVersion: return "edgeset-version";
    case Errc::EdgeSetFieldCount: return "edgeset-field-count";
    case Errc::EdgeSetRange: return "edgeset-range";
    case Errc::EdgeSetMalformed: return "edgeset-malformed";
    case Errc::InvalidArgument: return "invalid-argument";
    case Errc::Domain: return "domain";
    case Errc::ShapeOutOfFrame: return "shape-out-of-frame";
    case Errc::GalleryDuplicateId: return "gallery-duplicate-id";
    case Errc::GalleryInvalidId: return "gallery-invalid-id";
    case Errc::GalleryEmpty: return "gallery-empty";
    case Errc::GalleryCorrupt: return "gallery-corrupt";
    case Errc::Io: return "io";
    }
    return "unknown";
}

} // namespace edgematch
