#pragma once

#include "omnitile/geometry.hpp"
#include "omnitile/scheme.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace omnitile {

/// On-sphere sampling density shared by every tile of a plan.
struct DensityRule {
    double pixels_per_radian = 0.0;

    /// Density of an equirectangular source with `height` rows.
    static DensityRule from_equirect_height(int height) { return {height / kPi}; }
};

enum class TileKind { EquatorBand, Ring, PoleCap };
enum class Hemisphere { North, South };
enum class TileShape { Rect, DiscInSquare };

/// One tile of a plan. Rect tiles map longitude linearly across the width
/// and latitude linearly down the height over [lat_lo, lat_hi]. Pole caps
/// are azimuthal-equidistant discs inscribed in a square raster.
struct TileGeometry {
    int id = 0;
    TileKind kind = TileKind::EquatorBand;
    Hemisphere hemisphere = Hemisphere::North;
    /// For rings, i such that the ring spans cuts theta_{i-1}..theta_i (i >= 2).
    int ring_index = 0;
    /// Latitude extent including overlap extension, radians.
    double lat_lo = 0.0;
    double lat_hi = 0.0;
    /// Latitude extent without overlap, radians.
    double core_lo = 0.0;
    double core_hi = 0.0;
    int width_px = 0;
    int height_px = 0;
    TileShape shape = TileShape::Rect;

    /// Angular radius of a pole cap disc including its overlap extension.
    double cap_angle() const;
    /// Pixel radius of a pole cap disc.
    double cap_radius_px() const { return 0.5 * width_px; }

    bool operator==(const TileGeometry&) const = default;
};

/// Stable textual tag: "equator", "ring:north:2", "pole:south", ...
std::string kind_tag(const TileGeometry& tile);

struct TilePlan {
    TileScheme scheme;
    DensityRule density;
    /// Ordered north to south: north cap, north rings, equator band, south
    /// rings, south cap. tiles[i].id == i.
    std::vector<TileGeometry> tiles;
};

/// Lays out the 2n+1 tiles of `scheme` at `density`. Pixel sizes round up,
/// rect tiles to even widths and core heights; each overlap extension adds
/// ceil(density*sigma*pi/2) rows. Throws GeometryMismatch for a tile that
/// would have no pixels, std::invalid_argument for a non-positive density.
TilePlan plan_tiles(const TileScheme& scheme, DensityRule density);

/// Sphere position of a continuous tile position, or nullopt for the
/// black-filled corners of a pole cap square. Throws std::out_of_range if
/// `p` lies outside the raster.
std::optional<SphericalCoord> tile_inverse(const TileGeometry& tile, PixelCoord p);

/// Width of the ring just outside a pole cap disc that still carries
/// (extrapolated) sphere content instead of black fill. 4:2:0 chroma
/// subsampling and bilinear upsampling reach at most 2*sqrt(2) px, so black
/// never leaks into texels inside the disc.
inline constexpr double kCapGuardPx = 3.0;

/// Sphere position a renderer writes at raster position `p`: tile_inverse
/// inside the tile, the continued cap mapping within kCapGuardPx of the
/// disc, nullopt in the black corners.
std::optional<SphericalCoord> tile_fill_position(const TileGeometry& tile, PixelCoord p);

/// Tile raster position of a sphere point. Meaningful for points inside the
/// tile's latitude extent; others map outside the disc or vertical range.
PixelCoord tile_forward(const TileGeometry& tile, SphericalCoord s);

/// Anything that can be sampled at a sphere point.
class SphereSource {
public:
    virtual ~SphereSource() = default;
    virtual ColorModel model() const = 0;
    /// Writes one value per plane into `out`.
    virtual void sample(SphericalCoord s, std::span<double> out) const = 0;
};

class EquirectSource final : public SphereSource {
public:
    explicit EquirectSource(const PlanarImage& image) : image_(image) {}
    ColorModel model() const override { return image_.model(); }
    void sample(SphericalCoord s, std::span<double> out) const override;

private:
    const PlanarImage& image_;
};

/// Six tangent cube faces stored as a 3x2 grid (+x, -x, +y / -y, +z, -z).
class CubicSource final : public SphereSource {
public:
    /// Throws GeometryMismatch unless the grid is 3*face x 2*face.
    explicit CubicSource(const PlanarImage& grid);
    ColorModel model() const override { return grid_.model(); }
    void sample(SphericalCoord s, std::span<double> out) const override;

private:
    const PlanarImage& grid_;
    int face_;
};

/// Reassembles the sphere from decoded tiles. With `blend`, each border's
/// shared band of width sigma*pi is a linear ramp from the lower tile to the
/// upper tile; otherwise each point reads from the tile whose core holds it.
class TileSetSource final : public SphereSource {
public:
    /// Throws GeometryMismatch if a tile is missing or has the wrong size.
    TileSetSource(std::span<const PlanarImage> tiles, const TilePlan& plan, bool blend);
    ColorModel model() const override;
    void sample(SphericalCoord s, std::span<double> out) const override;

    /// Index of the tile whose core extent holds `lat`.
    int core_tile(double lat) const;

private:
    void sample_tile(int index, SphericalCoord s, std::span<double> out) const;

    std::span<const PlanarImage> tiles_;
    const TilePlan& plan_;
    bool blend_;
    std::vector<double> borders_; // border latitudes, north to south
};

/// Masked bilinear lookup inside one tile raster: rect tiles wrap in x,
/// pole caps ignore texels whose centers fall outside the disc.
void sample_tile_raster(const PlanarImage& img, const TileGeometry& tile, PixelCoord p, std::span<double> out);

/// Cube face edge length for a density: the face center has density
/// face_px / 2 per unit tangent, rounded up to even.
int cubic_face_size(DensityRule density);

PlanarImage render_equirect(const SphereSource& src, int width, int height);
PlanarImage render_cubic(const SphereSource& src, int face_px);
std::vector<PlanarImage> render_tiles(const SphereSource& src, const TilePlan& plan);

/// Composition of the sphere mappings above: every destination pixel is
/// sampled from the source at its sphere position. Black-filled pole cap
/// corners get PlanarImage::black_fill().
std::vector<PlanarImage> project_to_tiles(const PlanarImage& equirect, const TilePlan& plan);
PlanarImage project_to_cubic(const PlanarImage& equirect, int face_px);
PlanarImage cubic_to_equirect(const PlanarImage& cubic, int width, int height);
PlanarImage tiles_to_equirect(std::span<const PlanarImage> tiles, const TilePlan& plan, int width, int height);

/// Equirectangular reconstruction with linear blending across every
/// border's shared overlap band.
PlanarImage blend_overlaps(std::span<const PlanarImage> tiles, const TilePlan& plan, int width, int height);

/// Linear blend weight of the upper tile at `lat` for a border at `border`
/// with half-width `ext`: 0 at border-ext, 1 at border+ext.
double blend_weight(double lat, double border, double ext);

} // namespace omnitile
