#include "omnitile/projector.hpp"

#include "omnitile/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace omnitile {

namespace {

// ceil() that forgives floating noise just above an integer, so that
// 1024/pi * 2*pi sizes to 2048 rather than 2049.
int ceil_px(double v) { return static_cast<int>(std::ceil(v - 1e-9 * std::max(1.0, std::abs(v)))); }

int even_up(int v) { return v + (v & 1); }

struct Vec3 {
    double x, y, z;
};

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// +z is north, lon 0 looks along +x, lon pi/2 along +y.
Vec3 to_vector(SphericalCoord s) {
    const double c = std::cos(s.lat);
    return {c * std::cos(s.lon), c * std::sin(s.lon), std::sin(s.lat)};
}

SphericalCoord to_spherical(const Vec3& v) {
    return {std::atan2(v.z, std::hypot(v.x, v.y)), wrap_longitude(std::atan2(v.y, v.x))};
}

struct CubeFace {
    Vec3 forward, right, down;
};

// Equatorial faces have longitude increasing to the right; the polar faces
// share their "down"/"up" edge with the +x face.
constexpr std::array<CubeFace, 6> kCubeFaces{{
    {{1, 0, 0}, {0, 1, 0}, {0, 0, -1}},   // +x
    {{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, // -x
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, -1}},  // +y
    {{0, -1, 0}, {1, 0, 0}, {0, 0, -1}},  // -y
    {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}},    // +z
    {{0, 0, -1}, {0, 1, 0}, {-1, 0, 0}},  // -z
}};

constexpr std::array<std::array<int, 2>, 6> kFaceCell{{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}}};

void write_pixel(PlanarImage& img, int x, int y, std::span<const double> v) {
    for (int c = 0; c < img.plane_count(); ++c) {
        img.at(c, x, y) = to_sample(v[static_cast<std::size_t>(c)]);
    }
}

void write_black(PlanarImage& img, int x, int y) {
    const auto fill = img.black_fill();
    for (int c = 0; c < img.plane_count(); ++c) {
        img.at(c, x, y) = fill[static_cast<std::size_t>(c)];
    }
}

} // namespace

double TileGeometry::cap_angle() const { return lat_hi - lat_lo; }

std::string kind_tag(const TileGeometry& tile) {
    const char* hemi = tile.hemisphere == Hemisphere::North ? "north" : "south";
    switch (tile.kind) {
    case TileKind::EquatorBand:
        return "equator";
    case TileKind::Ring:
        return fmt::format("ring:{}:{}", hemi, tile.ring_index);
    case TileKind::PoleCap:
        return fmt::format("pole:{}", hemi);
    }
    return "unknown";
}

TilePlan plan_tiles(const TileScheme& scheme, DensityRule density) {
    const double ppr = density.pixels_per_radian;
    if (!(ppr > 0.0) || !std::isfinite(ppr)) {
        throw std::invalid_argument(fmt::format("density {} px/rad must be positive", ppr));
    }
    const auto& cuts = scheme.cuts();
    const int n = scheme.cut_count();
    const double ext = scheme.overlap_extension();
    const int ext_rows = ext > 0.0 ? ceil_px(ppr * ext) : 0;

    auto check = [](const TileGeometry& t, int core_px) {
        if (core_px < 1 || t.width_px < 1 || t.height_px < 1) {
            throw GeometryMismatch(fmt::format("tile {} ({}) has zero size; cuts are degenerate at this density",
                                               t.id, kind_tag(t)));
        }
    };

    auto make_cap = [&](Hemisphere h) {
        TileGeometry t;
        t.kind = TileKind::PoleCap;
        t.hemisphere = h;
        t.shape = TileShape::DiscInSquare;
        const double rim = scheme.pole_latitude();
        if (h == Hemisphere::North) {
            t.core_lo = rim;
            t.core_hi = kHalfPi;
            t.lat_lo = rim - ext;
            t.lat_hi = kHalfPi;
        } else {
            t.core_lo = -kHalfPi;
            t.core_hi = -rim;
            t.lat_lo = -kHalfPi;
            t.lat_hi = -rim + ext;
        }
        const int radius = ceil_px(ppr * (kHalfPi - rim));
        t.width_px = t.height_px = 2 * (radius + ext_rows);
        check(t, radius);
        return t;
    };

    // Ring between |latitudes| inner < outer; i is the index of the outer cut.
    auto make_ring = [&](Hemisphere h, int i) {
        const double inner = cuts[static_cast<std::size_t>(i - 2)];
        const double outer = cuts[static_cast<std::size_t>(i - 1)];
        TileGeometry t;
        t.kind = TileKind::Ring;
        t.hemisphere = h;
        t.ring_index = i;
        if (h == Hemisphere::North) {
            t.core_lo = inner;
            t.core_hi = outer;
        } else {
            t.core_lo = -outer;
            t.core_hi = -inner;
        }
        t.lat_lo = t.core_lo - ext;
        t.lat_hi = t.core_hi + ext;
        t.width_px = even_up(ceil_px(ppr * kTwoPi * std::cos(inner)));
        const int core_rows = even_up(ceil_px(ppr * (outer - inner)));
        t.height_px = core_rows + 2 * ext_rows;
        check(t, core_rows);
        return t;
    };

    std::vector<TileGeometry> tiles;
    tiles.reserve(static_cast<std::size_t>(scheme.tile_count()));
    tiles.push_back(make_cap(Hemisphere::North));
    for (int i = n; i >= 2; --i) {
        tiles.push_back(make_ring(Hemisphere::North, i));
    }
    {
        TileGeometry band;
        band.kind = TileKind::EquatorBand;
        band.core_lo = -cuts[0];
        band.core_hi = cuts[0];
        band.lat_lo = band.core_lo - ext;
        band.lat_hi = band.core_hi + ext;
        band.width_px = even_up(ceil_px(ppr * kTwoPi));
        const int core_rows = even_up(ceil_px(ppr * 2.0 * cuts[0]));
        band.height_px = core_rows + 2 * ext_rows;
        band.id = static_cast<int>(tiles.size());
        check(band, core_rows);
        tiles.push_back(band);
    }
    for (int i = 2; i <= n; ++i) {
        tiles.push_back(make_ring(Hemisphere::South, i));
    }
    tiles.push_back(make_cap(Hemisphere::South));
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        tiles[i].id = static_cast<int>(i);
    }
    return TilePlan{scheme, density, std::move(tiles)};
}

namespace {

// Azimuthal-equidistant cap mapping, continued up to `guard` pixels past the
// disc rim.
std::optional<SphericalCoord> cap_inverse(const TileGeometry& tile, PixelCoord p, double guard) {
    const double r_px = tile.cap_radius_px();
    const double dx = p.x - r_px;
    const double dy = p.y - r_px;
    const double dist = std::hypot(dx, dy);
    if (dist > r_px + guard) {
        return std::nullopt;
    }
    const double rho = dist / r_px * tile.cap_angle();
    const bool north = tile.hemisphere == Hemisphere::North;
    const double lat = std::clamp(north ? kHalfPi - rho : -kHalfPi + rho, -kHalfPi, kHalfPi);
    if (dist == 0.0) {
        return SphericalCoord{lat, 0.0};
    }
    // lon = -pi points up the raster; north turns counterclockwise, south clockwise.
    const double turn = north ? std::atan2(-dx, -dy) : std::atan2(dx, -dy);
    return SphericalCoord{lat, wrap_longitude(turn - kPi)};
}

} // namespace

std::optional<SphericalCoord> tile_inverse(const TileGeometry& tile, PixelCoord p) {
    if (!(p.x >= 0.0 && p.x <= tile.width_px && p.y >= 0.0 && p.y <= tile.height_px)) {
        throw std::out_of_range(
            fmt::format("({}, {}) outside {}x{} tile {}", p.x, p.y, tile.width_px, tile.height_px, tile.id));
    }
    if (tile.shape == TileShape::Rect) {
        const double lon = wrap_longitude(kTwoPi * (p.x / tile.width_px) - kPi);
        const double lat = tile.lat_hi - (p.y / tile.height_px) * (tile.lat_hi - tile.lat_lo);
        return SphericalCoord{lat, lon};
    }

    return cap_inverse(tile, p, 0.0);
}

std::optional<SphericalCoord> tile_fill_position(const TileGeometry& tile, PixelCoord p) {
    if (tile.shape == TileShape::Rect) {
        return tile_inverse(tile, p);
    }
    return cap_inverse(tile, p, kCapGuardPx);
}

PixelCoord tile_forward(const TileGeometry& tile, SphericalCoord s) {
    if (tile.shape == TileShape::Rect) {
        const double x = (wrap_longitude(s.lon) + kPi) / kTwoPi * tile.width_px;
        const double y = (tile.lat_hi - s.lat) / (tile.lat_hi - tile.lat_lo) * tile.height_px;
        return {x, y};
    }
    const bool north = tile.hemisphere == Hemisphere::North;
    const double rho = north ? kHalfPi - s.lat : kHalfPi + s.lat;
    const double r_px = tile.cap_radius_px();
    const double dist = rho / tile.cap_angle() * r_px;
    const double turn = s.lon + kPi;
    const double dx = north ? -std::sin(turn) * dist : std::sin(turn) * dist;
    const double dy = -std::cos(turn) * dist;
    return {r_px + dx, r_px + dy};
}

void sample_tile_raster(const PlanarImage& img, const TileGeometry& tile, PixelCoord p, std::span<double> out) {
    if (tile.shape == TileShape::Rect) {
        const BilinearTap tap = bilinear_tap(img.width(), img.height(), p, true);
        for (int c = 0; c < img.plane_count(); ++c) {
            out[static_cast<std::size_t>(c)] = apply_tap(img.plane(c), tap);
        }
        return;
    }
    BilinearTap tap = bilinear_tap(img.width(), img.height(), p, false);
    const double r = tile.cap_radius_px();
    const auto w = static_cast<std::size_t>(img.width());
    double kept = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double cx = static_cast<double>(tap.offset[k] % w) + 0.5 - r;
        const double cy = static_cast<double>(tap.offset[k] / w) + 0.5 - r;
        if (std::hypot(cx, cy) > r) {
            tap.weight[k] = 0.0;
        }
        kept += tap.weight[k];
    }
    if (kept > 0.0) {
        for (auto& wt : tap.weight) {
            wt /= kept;
        }
    } else {
        // every neighbour is black fill; fall back to the plain lookup
        tap = bilinear_tap(img.width(), img.height(), p, false);
    }
    for (int c = 0; c < img.plane_count(); ++c) {
        out[static_cast<std::size_t>(c)] = apply_tap(img.plane(c), tap);
    }
}

void EquirectSource::sample(SphericalCoord s, std::span<double> out) const {
    const BilinearTap tap =
        bilinear_tap(image_.width(), image_.height(), sphere_to_equirect(s, image_.width(), image_.height()), true);
    for (int c = 0; c < image_.plane_count(); ++c) {
        out[static_cast<std::size_t>(c)] = apply_tap(image_.plane(c), tap);
    }
}

CubicSource::CubicSource(const PlanarImage& grid) : grid_(grid), face_(grid.width() / 3) {
    if (grid.width() != 3 * face_ || grid.height() != 2 * face_ || face_ < 1) {
        throw GeometryMismatch(fmt::format("cubic grid {}x{} is not 3x2 square faces", grid.width(), grid.height()));
    }
}

void CubicSource::sample(SphericalCoord s, std::span<double> out) const {
    const Vec3 d = to_vector(s);
    std::size_t face = 0;
    double best = -2.0;
    for (std::size_t f = 0; f < kCubeFaces.size(); ++f) {
        const double a = dot(d, kCubeFaces[f].forward);
        if (a > best) {
            best = a;
            face = f;
        }
    }
    const auto& cf = kCubeFaces[face];
    const double u = dot(d, cf.right) / best;
    const double v = dot(d, cf.down) / best;
    const double fx = std::clamp((u + 1.0) * 0.5 * face_, 0.5, face_ - 0.5);
    const double fy = std::clamp((v + 1.0) * 0.5 * face_, 0.5, face_ - 0.5);
    const PixelCoord p{kFaceCell[face][0] * face_ + fx, kFaceCell[face][1] * face_ + fy};
    const BilinearTap tap = bilinear_tap(grid_.width(), grid_.height(), p, false);
    for (int c = 0; c < grid_.plane_count(); ++c) {
        out[static_cast<std::size_t>(c)] = apply_tap(grid_.plane(c), tap);
    }
}

TileSetSource::TileSetSource(std::span<const PlanarImage> tiles, const TilePlan& plan, bool blend)
    : tiles_(tiles), plan_(plan), blend_(blend) {
    if (tiles.size() != plan.tiles.size()) {
        throw GeometryMismatch(
            fmt::format("tile set has {} images, plan expects {}", tiles.size(), plan.tiles.size()));
    }
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto& g = plan.tiles[i];
        if (tiles[i].empty() || tiles[i].width() != g.width_px || tiles[i].height() != g.height_px) {
            throw GeometryMismatch(fmt::format("tile {} ({}) is {}x{}, plan expects {}x{}", i, kind_tag(g),
                                               tiles[i].width(), tiles[i].height(), g.width_px, g.height_px));
        }
        if (tiles[i].model() != tiles[0].model()) {
            throw GeometryMismatch(fmt::format("tile {} color model differs from tile 0", i));
        }
    }
    for (std::size_t i = 0; i + 1 < plan.tiles.size(); ++i) {
        borders_.push_back(plan.tiles[i].core_lo);
    }
}

ColorModel TileSetSource::model() const { return tiles_[0].model(); }

int TileSetSource::core_tile(double lat) const {
    int idx = 0;
    for (double b : borders_) {
        if (lat < b) {
            ++idx;
        }
    }
    return idx;
}

void TileSetSource::sample_tile(int index, SphericalCoord s, std::span<double> out) const {
    const auto i = static_cast<std::size_t>(index);
    sample_tile_raster(tiles_[i], plan_.tiles[i], tile_forward(plan_.tiles[i], s), out);
}

double blend_weight(double lat, double border, double ext) {
    return std::clamp((lat - (border - ext)) / (2.0 * ext), 0.0, 1.0);
}

void TileSetSource::sample(SphericalCoord s, std::span<double> out) const {
    const double ext = plan_.scheme.overlap_extension();
    if (blend_ && ext > 0.0) {
        for (std::size_t k = 0; k < borders_.size(); ++k) {
            if (std::abs(s.lat - borders_[k]) < ext) {
                std::array<double, 3> upper{};
                std::array<double, 3> lower{};
                sample_tile(static_cast<int>(k), s, upper);
                sample_tile(static_cast<int>(k + 1), s, lower);
                const double w = blend_weight(s.lat, borders_[k], ext);
                for (std::size_t c = 0; c < out.size(); ++c) {
                    out[c] = w * upper[c] + (1.0 - w) * lower[c];
                }
                return;
            }
        }
    }
    sample_tile(core_tile(s.lat), s, out);
}

int cubic_face_size(DensityRule density) { return even_up(ceil_px(2.0 * density.pixels_per_radian)); }

PlanarImage render_equirect(const SphereSource& src, int width, int height) {
    PlanarImage out(width, height, src.model());
    detail::parallel_rows(height, [&](int y) {
        std::array<double, 3> v{};
        for (int x = 0; x < width; ++x) {
            src.sample(equirect_to_sphere({x + 0.5, y + 0.5}, width, height), v);
            write_pixel(out, x, y, v);
        }
    });
    return out;
}

PlanarImage render_cubic(const SphereSource& src, int face_px) {
    if (face_px < 1) {
        throw std::invalid_argument("cube face size must be >= 1");
    }
    PlanarImage out(3 * face_px, 2 * face_px, src.model());
    detail::parallel_rows(out.height(), [&](int y) {
        std::array<double, 3> v{};
        const int row = y / face_px;
        for (int x = 0; x < out.width(); ++x) {
            const int col = x / face_px;
            const auto face = static_cast<std::size_t>(row * 3 + col);
            const auto& cf = kCubeFaces[face];
            const double u = 2.0 * ((x - col * face_px) + 0.5) / face_px - 1.0;
            const double w = 2.0 * ((y - row * face_px) + 0.5) / face_px - 1.0;
            const Vec3 d{cf.forward.x + u * cf.right.x + w * cf.down.x, cf.forward.y + u * cf.right.y + w * cf.down.y,
                         cf.forward.z + u * cf.right.z + w * cf.down.z};
            src.sample(to_spherical(d), v);
            write_pixel(out, x, y, v);
        }
    });
    return out;
}

std::vector<PlanarImage> render_tiles(const SphereSource& src, const TilePlan& plan) {
    std::vector<PlanarImage> out;
    out.reserve(plan.tiles.size());
    for (const auto& tile : plan.tiles) {
        PlanarImage img(tile.width_px, tile.height_px, src.model());
        detail::parallel_rows(tile.height_px, [&](int y) {
            std::array<double, 3> v{};
            for (int x = 0; x < tile.width_px; ++x) {
                const auto s = tile_fill_position(tile, {x + 0.5, y + 0.5});
                if (!s) {
                    write_black(img, x, y);
                    continue;
                }
                src.sample(*s, v);
                write_pixel(img, x, y, v);
            }
        });
        out.push_back(std::move(img));
    }
    return out;
}

std::vector<PlanarImage> project_to_tiles(const PlanarImage& equirect, const TilePlan& plan) {
    return render_tiles(EquirectSource(equirect), plan);
}

PlanarImage project_to_cubic(const PlanarImage& equirect, int face_px) {
    return render_cubic(EquirectSource(equirect), face_px);
}

PlanarImage cubic_to_equirect(const PlanarImage& cubic, int width, int height) {
    return render_equirect(CubicSource(cubic), width, height);
}

PlanarImage tiles_to_equirect(std::span<const PlanarImage> tiles, const TilePlan& plan, int width, int height) {
    return render_equirect(TileSetSource(tiles, plan, false), width, height);
}

PlanarImage blend_overlaps(std::span<const PlanarImage> tiles, const TilePlan& plan, int width, int height) {
    return render_equirect(TileSetSource(tiles, plan, true), width, height);
}

} // namespace omnitile
