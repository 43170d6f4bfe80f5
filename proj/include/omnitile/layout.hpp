#pragma once

#include "omnitile/geometry.hpp"
#include "omnitile/projector.hpp"
#include "omnitile/scheme.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace omnitile {

/// Clockwise quarter turns applied to a tile when it is placed.
enum class Rotation { R0 = 0, R90 = 90, R180 = 180, R270 = 270 };

struct Placement {
    int tile_id = 0;
    std::string kind; // kind_tag() of the tile
    int x = 0;
    int y = 0;
    /// Tile raster size before rotation.
    int width = 0;
    int height = 0;
    Rotation rotation = Rotation::R0;
    double lat_lo_deg = 0.0;
    double lat_hi_deg = 0.0;

    int footprint_w() const;
    int footprint_h() const;

    bool operator==(const Placement&) const = default;
};

/// Scheme as recorded in a manifest: degrees, exactly as written.
struct SchemeRecord {
    std::vector<double> cuts_deg;
    PoleStyle pole = PoleStyle::Square;
    double sigma = 0.0;

    static SchemeRecord from_scheme(const TileScheme& scheme);
    TileScheme to_scheme() const;

    bool operator==(const SchemeRecord&) const = default;
};

struct LayoutManifest {
    int version = 1;
    int canvas_w = 0;
    int canvas_h = 0;
    double density_ppr = 0.0;
    SchemeRecord scheme;
    std::vector<Placement> placements;

    /// (canvas pixels - tile pixels) / tile pixels.
    double waste_ratio() const;

    bool operator==(const LayoutManifest&) const = default;
};

inline constexpr int kManifestVersion = 1;

/// Shelf packing of a tile list. The equator band, if present, is the top
/// shelf at full canvas width. Remaining tiles are turned landscape (90 deg
/// when taller than wide), sorted tallest first (ties by id) and laid left
/// to right, opening a new shelf when the row is full. Canvas sides round up
/// to multiples of 8.
struct ShelfPacking {
    int canvas_w = 0;
    int canvas_h = 0;
    std::vector<Placement> placements; // same order as the input tiles
};
ShelfPacking shelf_pack(std::span<const TileGeometry> tiles);

LayoutManifest pack(const TilePlan& plan);

/// Throws FormatError if placements are missing, duplicated, out of the
/// canvas or overlapping.
void validate_manifest(const LayoutManifest& m);

/// Tile plan described by a manifest. Throws GeometryMismatch if the
/// recorded tile sizes disagree with the plan derived from its scheme.
TilePlan plan_from_manifest(const LayoutManifest& m);

/// Writes tile images into one canvas; unused area is black fill.
PlanarImage compose_canvas(std::span<const PlanarImage> tiles, const LayoutManifest& m);

/// Cuts a canvas back into tile images, undoing rotations. Throws
/// GeometryMismatch if the canvas size differs from the manifest.
std::vector<PlanarImage> unpack(const PlanarImage& canvas, const LayoutManifest& m);

PlanarImage rotate_clockwise(const PlanarImage& img, Rotation rot);

std::string serialize_manifest(const LayoutManifest& m);
/// Throws FormatError on malformed documents.
LayoutManifest parse_manifest(std::string_view text);

std::string serialize_scheme(const SchemeRecord& s);
/// Accepts either a bare scheme object or a full manifest.
SchemeRecord parse_scheme(std::string_view text);

} // namespace omnitile
