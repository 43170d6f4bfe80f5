#pragma once

#include "omnitile/geometry.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace omnitile {

/// PNG (.png) or binary PNM (.ppm, .pgm), read as Gray or RGB. PNG alpha is
/// composited over black; 16-bit data is reduced to 8 bits. Throws IoError
/// or FormatError.
PlanarImage read_image(const std::filesystem::path& path);

/// Format picked from the extension. YCbCr images are rejected; write those
/// with write_yuv420.
void write_image(const std::filesystem::path& path, const PlanarImage& img);

enum class ChromaUpsampling {
    Bilinear,
    /// Each chroma sample fills its 2x2 block; planar_to_yuv420 undoes it
    /// exactly.
    Replicate,
};

/// Raw planar YUV 4:2:0, 8-bit, frames back to back, upsampled to full
/// resolution. Width and height must be even.
std::vector<PlanarImage> read_yuv420(const std::filesystem::path& path, int width, int height,
                                     ChromaUpsampling mode = ChromaUpsampling::Bilinear);

/// Chroma planes are downsampled by 2x2 averaging.
void write_yuv420(const std::filesystem::path& path, std::span<const PlanarImage> frames);

/// Full-resolution YCbCr frame from 4:2:0 planes.
PlanarImage yuv420_to_planar(std::span<const std::uint8_t> data, int width, int height,
                             ChromaUpsampling mode = ChromaUpsampling::Bilinear);
std::vector<std::uint8_t> planar_to_yuv420(const PlanarImage& img);

} // namespace omnitile
