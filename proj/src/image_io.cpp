#include "omnitile/image_io.hpp"

#include "omnitile/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <fmt/format.h>
#include <png.h>

namespace omnitile {

namespace fs = std::filesystem;

namespace {

std::string lower_ext(const fs::path& path) {
    std::string ext = path.extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

std::vector<std::uint8_t> slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError(fmt::format("write to '{}' failed", path.string()));
    }
}

PlanarImage from_interleaved(const std::uint8_t* data, int w, int h, int channels) {
    PlanarImage img(w, h, channels == 1 ? ColorModel::Gray : ColorModel::RGB);
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    for (int c = 0; c < channels; ++c) {
        auto plane = img.plane(c);
        for (std::size_t i = 0; i < n; ++i) {
            plane[i] = data[i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)];
        }
    }
    return img;
}

std::vector<std::uint8_t> to_interleaved(const PlanarImage& img) {
    const auto channels = static_cast<std::size_t>(img.plane_count());
    const std::size_t n = static_cast<std::size_t>(img.width()) * static_cast<std::size_t>(img.height());
    std::vector<std::uint8_t> out(n * channels);
    for (std::size_t c = 0; c < channels; ++c) {
        const auto plane = img.plane(static_cast<int>(c));
        for (std::size_t i = 0; i < n; ++i) {
            out[i * channels + c] = plane[i];
        }
    }
    return out;
}

PlanarImage read_png(const fs::path& path) {
    const auto bytes = slurp(path);
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw FormatError(fmt::format("'{}': {}", path.string(), image.message));
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
    const png_color black{0, 0, 0};
    if (!png_image_finish_read(&image, &black, buf.data(), 0, nullptr)) {
        throw FormatError(fmt::format("'{}': {}", path.string(), image.message));
    }
    return from_interleaved(buf.data(), static_cast<int>(image.width), static_cast<int>(image.height),
                            color ? 3 : 1);
}

void write_png(const fs::path& path, const PlanarImage& img) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.plane_count() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    const auto data = to_interleaved(img);
    png_alloc_size_t size = 0;
    if (!png_image_write_get_memory_size(image, size, 0, data.data(), 0, nullptr)) {
        throw IoError(fmt::format("'{}': {}", path.string(), image.message));
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, data.data(), 0, nullptr)) {
        throw IoError(fmt::format("'{}': {}", path.string(), image.message));
    }
    out.resize(size);
    spill(path, out);
}

// Binary PNM header: magic, width, height, maxval, each separated by
// whitespace with '#' comments allowed, then one whitespace byte.
PlanarImage read_pnm(const fs::path& path) {
    const auto bytes = slurp(path);
    std::size_t pos = 0;
    auto bad = [&](const char* why) { return FormatError(fmt::format("'{}': {}", path.string(), why)); };
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') {
                    ++pos;
                }
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto number = [&]() -> long {
        skip_space();
        long v = 0;
        const std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(bytes[pos]) && v < 1'000'000) {
            v = v * 10 + (bytes[pos++] - '0');
        }
        if (pos == start) {
            throw bad("malformed PNM header");
        }
        return v;
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw bad("not a binary PGM (P5) or PPM (P6) file");
    }
    const int channels = bytes[1] == '5' ? 1 : 3;
    pos = 2;
    const long w = number();
    const long h = number();
    const long maxval = number();
    if (w <= 0 || h <= 0 || w >= 1'000'000 || h >= 1'000'000) {
        throw bad("invalid PNM dimensions");
    }
    if (maxval != 255) {
        throw bad("only 8-bit PNM (maxval 255) is supported");
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw bad("malformed PNM header");
    }
    ++pos;
    const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(channels);
    if (bytes.size() - pos < need) {
        throw bad("truncated PNM data");
    }
    return from_interleaved(bytes.data() + pos, static_cast<int>(w), static_cast<int>(h), channels);
}

void write_pnm(const fs::path& path, const PlanarImage& img, bool want_color) {
    if (want_color != (img.plane_count() == 3)) {
        throw FormatError(fmt::format("'{}': {} needs a {} image", path.string(), want_color ? "PPM" : "PGM",
                                      want_color ? "three-plane" : "gray"));
    }
    const std::string header = fmt::format("P{}\n{} {}\n255\n", want_color ? 6 : 5, img.width(), img.height());
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const auto data = to_interleaved(img);
    out.insert(out.end(), data.begin(), data.end());
    spill(path, out);
}

void check_yuv_size(int width, int height) {
    if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
        throw FormatError(fmt::format("YUV 4:2:0 needs positive even dimensions, got {}x{}", width, height));
    }
}

} // namespace

PlanarImage read_image(const fs::path& path) {
    const auto ext = lower_ext(path);
    if (ext == ".png") {
        return read_png(path);
    }
    if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") {
        return read_pnm(path);
    }
    throw FormatError(fmt::format("'{}': unsupported image extension '{}'", path.string(), ext));
}

void write_image(const fs::path& path, const PlanarImage& img) {
    if (img.empty()) {
        throw FormatError(fmt::format("'{}': refusing to write an empty image", path.string()));
    }
    if (img.model() == ColorModel::YCbCr) {
        throw FormatError(fmt::format("'{}': YCbCr images are written as .yuv", path.string()));
    }
    const auto ext = lower_ext(path);
    if (ext == ".png") {
        write_png(path, img);
    } else if (ext == ".ppm") {
        write_pnm(path, img, true);
    } else if (ext == ".pgm") {
        write_pnm(path, img, false);
    } else {
        throw FormatError(fmt::format("'{}': unsupported image extension '{}'", path.string(), ext));
    }
}

PlanarImage yuv420_to_planar(std::span<const std::uint8_t> data, int width, int height, ChromaUpsampling mode) {
    check_yuv_size(width, height);
    const std::size_t luma = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const int cw = width / 2;
    const int ch = height / 2;
    const std::size_t chroma = luma / 4;
    if (data.size() != luma + 2 * chroma) {
        throw FormatError(fmt::format("YUV frame of {}x{} needs {} bytes, got {}", width, height, luma + 2 * chroma,
                                      data.size()));
    }
    PlanarImage img(width, height, ColorModel::YCbCr);
    std::ranges::copy(data.subspan(0, luma), img.plane(0).begin());
    for (int c = 1; c <= 2; ++c) {
        const auto src = data.subspan(luma + static_cast<std::size_t>(c - 1) * chroma, chroma);
        auto dst = img.plane(c);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                if (mode == ChromaUpsampling::Replicate) {
                    dst[static_cast<std::size_t>(y) * width + x] = src[static_cast<std::size_t>(y / 2) * cw + x / 2];
                    continue;
                }
                // chroma sample centers sit at the middle of each 2x2 luma block
                const auto tap = bilinear_tap(cw, ch, {(x + 0.5) / 2.0, (y + 0.5) / 2.0}, false);
                dst[static_cast<std::size_t>(y) * width + x] = to_sample(apply_tap(src, tap));
            }
        }
    }
    return img;
}

std::vector<std::uint8_t> planar_to_yuv420(const PlanarImage& img) {
    if (img.model() != ColorModel::YCbCr) {
        throw FormatError("YUV output needs a YCbCr image");
    }
    const int w = img.width();
    const int h = img.height();
    check_yuv_size(w, h);
    std::vector<std::uint8_t> out(img.plane(0).begin(), img.plane(0).end());
    out.reserve(out.size() * 3 / 2);
    for (int c = 1; c <= 2; ++c) {
        for (int y = 0; y < h; y += 2) {
            for (int x = 0; x < w; x += 2) {
                const int sum = img.at(c, x, y) + img.at(c, x + 1, y) + img.at(c, x, y + 1) + img.at(c, x + 1, y + 1);
                out.push_back(static_cast<std::uint8_t>((sum + 2) / 4));
            }
        }
    }
    return out;
}

std::vector<PlanarImage> read_yuv420(const fs::path& path, int width, int height, ChromaUpsampling mode) {
    check_yuv_size(width, height);
    const auto bytes = slurp(path);
    const std::size_t frame = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3 / 2;
    if (bytes.empty() || bytes.size() % frame != 0) {
        throw FormatError(fmt::format("'{}': {} bytes is not a whole number of {}x{} 4:2:0 frames", path.string(),
                                      bytes.size(), width, height));
    }
    std::vector<PlanarImage> frames;
    for (std::size_t off = 0; off < bytes.size(); off += frame) {
        frames.push_back(yuv420_to_planar(std::span(bytes).subspan(off, frame), width, height, mode));
    }
    return frames;
}

void write_yuv420(const fs::path& path, std::span<const PlanarImage> frames) {
    std::vector<std::uint8_t> out;
    for (const auto& f : frames) {
        const auto bytes = planar_to_yuv420(f);
        out.insert(out.end(), bytes.begin(), bytes.end());
    }
    spill(path, out);
}

} // namespace omnitile
