#include "edgematch/image_io.hpp"

#include "edgematch/errors.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace edgematch {

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h),
      pixels(static_cast<std::size_t>(w > 0 ? w : 0) * static_cast<std::size_t>(h > 0 ? h : 0), fill) {}

void GrayImage::validate() const {
    if (width < 1 || height < 1) {
        throw Error(Errc::InvalidArgument, "image dimensions must be >= 1");
    }
    if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw Error(Errc::InvalidArgument, "pixel count does not match width*height");
    }
    for (double v : pixels) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(Errc::InvalidArgument, "pixel intensity outside [0,1]");
        }
    }
}

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Reads an unsigned decimal; header fields may be separated by comments.
    std::uint64_t read_uint(const char* what, bool allow_comments = true) {
        if (allow_comments) {
            skip_space_and_comments();
        } else {
            while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
        }
        if (pos_ >= bytes_.size()) {
            throw Error(Errc::ImageTruncated, std::string("PGM truncated while reading ") + what);
        }
        if (!std::isdigit(bytes_[pos_])) {
            throw Error(Errc::ImageMalformed, std::string("PGM expected a number for ") + what);
        }
        std::uint64_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFULL) {
                throw Error(Errc::ImageMalformed, std::string("PGM value too large for ") + what);
            }
            ++pos_;
        }
        return value;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::uint8_t peek() const { return bytes_[pos_]; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw Error(Errc::ImageBadMagic, "not a P2/P5 PGM file");
    }
    const bool ascii = bytes[1] == '2';
    HeaderReader in(bytes);
    in.advance(2);
    if (in.remaining() > 0 && !std::isspace(in.peek()) && in.peek() != '#') {
        throw Error(Errc::ImageBadMagic, "not a P2/P5 PGM file");
    }

    const auto width = in.read_uint("width");
    const auto height = in.read_uint("height");
    const auto maxval = in.read_uint("maxval");
    if (width == 0 || height == 0) {
        throw Error(Errc::ImageZeroDimension, "PGM has a zero dimension");
    }
    if (maxval == 0 || maxval > 65535) {
        throw Error(Errc::ImageBadMaxval, "PGM maxval must be in [1, 65535]");
    }
    if (width > 1'000'000 || height > 1'000'000 || width * height > (1ULL << 31)) {
        throw Error(Errc::ImageMalformed, "PGM dimensions unreasonably large");
    }

    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    const double denom = static_cast<double>(maxval);
    const std::size_t count = img.size();

    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) {
            const auto v = in.read_uint("sample", false);
            if (v > maxval) {
                throw Error(Errc::ImageMalformed, "PGM sample exceeds maxval");
            }
            img.pixels[i] = static_cast<double>(v) / denom;
        }
        return img;
    }

    // Exactly one whitespace byte separates maxval from the binary raster.
    if (in.remaining() == 0) {
        throw Error(Errc::ImageTruncated, "PGM truncated before raster");
    }
    if (!std::isspace(in.peek())) {
        throw Error(Errc::ImageMalformed, "PGM header not terminated by whitespace");
    }
    in.advance(1);
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    if (in.remaining() < count * sample_bytes) {
        throw Error(Errc::ImageTruncated, "PGM raster truncated");
    }
    const auto* data = bytes.data() + in.pos();
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t v = 0;
        if (sample_bytes == 2) {
            v = (static_cast<std::uint32_t>(data[2 * i]) << 8) | data[2 * i + 1];
        } else {
            v = data[i];
        }
        if (v > maxval) {
            throw Error(Errc::ImageMalformed, "PGM sample exceeds maxval");
        }
        img.pixels[i] = static_cast<double>(v) / denom;
    }
    return img;
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img, bool ascii) {
    img.validate();
    std::ostringstream header;
    header << (ascii ? "P2" : "P5") << '\n' << img.width << ' ' << img.height << "\n255\n";
    const std::string head = header.str();

    std::vector<std::uint8_t> out(head.begin(), head.end());
    auto quantize = [](double v) {
        return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
    };
    if (!ascii) {
        out.reserve(out.size() + img.size());
        for (double v : img.pixels) out.push_back(quantize(v));
        return out;
    }
    std::string body;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (x > 0) body += ' ';
            body += std::to_string(quantize(img.at(x, y)));
        }
        body += '\n';
    }
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return load_pgm(bytes);
}

void write_pgm_file(const std::filesystem::path& path, const GrayImage& img, bool ascii) {
    write_file_bytes(path, save_pgm(img, ascii));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::Io, "cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file_text(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return {bytes.begin(), bytes.end()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::Io, "cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(Errc::Io, "write failed for " + path.string());
    }
}

void write_file_text(const std::filesystem::path& path, const std::string& text) {
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

} // namespace edgematch
