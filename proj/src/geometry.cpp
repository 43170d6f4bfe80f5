#include "omnitile/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omnitile {

double wrap_longitude(double lon) {
    if (lon >= -kPi && lon < kPi) {
        return lon;
    }
    double w = std::fmod(lon + kPi, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    w -= kPi;
    // fmod can land exactly on +pi after the shift
    return w >= kPi ? -kPi : w;
}

int plane_count_for(ColorModel model) { return model == ColorModel::Gray ? 1 : 3; }

PlanarImage::PlanarImage(int width, int height, ColorModel model)
    : width_(width), height_(height), model_(model) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("PlanarImage dimensions must be at least 1x1");
    }
    planes_.assign(static_cast<std::size_t>(plane_count_for(model)),
                   std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 0));
}

PlanarImage::PlanarImage(int width, int height, ColorModel model, std::span<const std::uint8_t> fill)
    : PlanarImage(width, height, model) {
    for (int p = 0; p < plane_count(); ++p) {
        const std::uint8_t v = p < static_cast<int>(fill.size()) ? fill[static_cast<std::size_t>(p)] : 0;
        std::ranges::fill(planes_[static_cast<std::size_t>(p)], v);
    }
}

std::array<std::uint8_t, 3> PlanarImage::black_fill() const {
    if (model_ == ColorModel::YCbCr) {
        return {0, 128, 128};
    }
    return {0, 0, 0};
}

SphericalCoord equirect_to_sphere(PixelCoord p, int width, int height) {
    const double x = std::clamp(p.x, 0.0, static_cast<double>(width));
    const double y = std::clamp(p.y, 0.0, static_cast<double>(height));
    return {kHalfPi - kPi * (y / height), wrap_longitude(kTwoPi * (x / width) - kPi)};
}

PixelCoord sphere_to_equirect(SphericalCoord s, int width, int height) {
    const double lon = wrap_longitude(s.lon);
    const double lat = std::clamp(s.lat, -kHalfPi, kHalfPi);
    return {(lon + kPi) / kTwoPi * width, (kHalfPi - lat) / kPi * height};
}

BilinearTap bilinear_tap(int width, int height, PixelCoord p, bool wrap_x) {
    // Shift to index space where texel i sits at integer i.
    double u = p.x - 0.5;
    double v = p.y - 0.5;

    int x0 = 0;
    int x1 = 0;
    double fx = 0.0;
    if (wrap_x) {
        const double fl = std::floor(u);
        fx = u - fl;
        long long xi = static_cast<long long>(fl) % width;
        if (xi < 0) {
            xi += width;
        }
        x0 = static_cast<int>(xi);
        x1 = x0 + 1 == width ? 0 : x0 + 1;
    } else {
        u = std::clamp(u, 0.0, static_cast<double>(width - 1));
        const double fl = std::floor(u);
        x0 = static_cast<int>(fl);
        x1 = std::min(x0 + 1, width - 1);
        fx = u - fl;
    }

    v = std::clamp(v, 0.0, static_cast<double>(height - 1));
    const double flv = std::floor(v);
    const int y0 = static_cast<int>(flv);
    const int y1 = std::min(y0 + 1, height - 1);
    const double fy = v - flv;

    const auto w = static_cast<std::size_t>(width);
    BilinearTap tap;
    tap.offset = {y0 * w + x0, y0 * w + x1, y1 * w + x0, y1 * w + x1};
    tap.weight = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};
    return tap;
}

double bilinear_sample(const PlanarImage& img, int plane, PixelCoord p, bool wrap_x) {
    return apply_tap(img.plane(plane), bilinear_tap(img.width(), img.height(), p, wrap_x));
}

std::vector<double> bilinear_sample(const PlanarImage& img, PixelCoord p, bool wrap_x) {
    const BilinearTap tap = bilinear_tap(img.width(), img.height(), p, wrap_x);
    std::vector<double> out(static_cast<std::size_t>(img.plane_count()));
    for (int c = 0; c < img.plane_count(); ++c) {
        out[static_cast<std::size_t>(c)] = apply_tap(img.plane(c), tap);
    }
    return out;
}

std::uint8_t to_sample(double v) {
    if (!(v > 0.0)) {
        return 0;
    }
    if (v >= 255.0) {
        return 255;
    }
    return static_cast<std::uint8_t>(std::lround(v));
}

} // namespace omnitile
