#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace omnitile {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps a longitude into [-pi, pi).
double wrap_longitude(double lon);

/// Point on the unit sphere. lat in [-pi/2, pi/2], lon in [-pi, pi).
struct SphericalCoord {
    double lat = 0.0;
    double lon = 0.0;
};

/// Continuous raster position. Sample i has its center at i + 0.5.
struct PixelCoord {
    double x = 0.0;
    double y = 0.0;
};

enum class ColorModel { Gray, RGB, YCbCr };

/// Planar 8-bit raster with one (gray) or three full-resolution planes.
class PlanarImage {
public:
    PlanarImage() = default;
    PlanarImage(int width, int height, ColorModel model);
    PlanarImage(int width, int height, ColorModel model, std::span<const std::uint8_t> fill);

    int width() const { return width_; }
    int height() const { return height_; }
    int plane_count() const { return static_cast<int>(planes_.size()); }
    ColorModel model() const { return model_; }
    bool empty() const { return planes_.empty(); }

    std::span<std::uint8_t> plane(int p) { return planes_[static_cast<std::size_t>(p)]; }
    std::span<const std::uint8_t> plane(int p) const { return planes_[static_cast<std::size_t>(p)]; }

    std::uint8_t at(int p, int x, int y) const {
        return planes_[static_cast<std::size_t>(p)][static_cast<std::size_t>(y) * width_ + x];
    }
    std::uint8_t& at(int p, int x, int y) {
        return planes_[static_cast<std::size_t>(p)][static_cast<std::size_t>(y) * width_ + x];
    }

    /// Pixel value used for regions that carry no sphere content.
    std::array<std::uint8_t, 3> black_fill() const;

    bool operator==(const PlanarImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    ColorModel model_ = ColorModel::Gray;
    std::vector<std::vector<std::uint8_t>> planes_;
};

int plane_count_for(ColorModel model);

SphericalCoord equirect_to_sphere(PixelCoord p, int width, int height);
PixelCoord sphere_to_equirect(SphericalCoord s, int width, int height);

/// The four texels and weights of one bilinear lookup. Computing it once and
/// applying it to every plane keeps multi-plane resampling cheap.
struct BilinearTap {
    std::array<std::size_t, 4> offset{};
    std::array<double, 4> weight{};
};

/// Bilinear footprint of `p` in a width x height raster. Rows clamp at the
/// top and bottom edge; columns wrap when `wrap_x`, clamp otherwise.
BilinearTap bilinear_tap(int width, int height, PixelCoord p, bool wrap_x);

inline double apply_tap(std::span<const std::uint8_t> plane, const BilinearTap& tap) {
    return tap.weight[0] * plane[tap.offset[0]] + tap.weight[1] * plane[tap.offset[1]] +
           tap.weight[2] * plane[tap.offset[2]] + tap.weight[3] * plane[tap.offset[3]];
}

double bilinear_sample(const PlanarImage& img, int plane, PixelCoord p, bool wrap_x);

/// One value per plane of `img`.
std::vector<double> bilinear_sample(const PlanarImage& img, PixelCoord p, bool wrap_x);

/// Round to nearest and saturate into the 8-bit range.
std::uint8_t to_sample(double v);

} // namespace omnitile
