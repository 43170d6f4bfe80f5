#include "omnitile/layout.hpp"

#include "omnitile/error.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

namespace omnitile {

namespace {

using ordered_json = nlohmann::ordered_json;

int round_up8(int v) { return (v + 7) / 8 * 8; }

bool quarter_turned(Rotation r) { return r == Rotation::R90 || r == Rotation::R270; }

Rotation parse_rotation(int deg) {
    switch (deg) {
    case 0:
        return Rotation::R0;
    case 90:
        return Rotation::R90;
    case 180:
        return Rotation::R180;
    case 270:
        return Rotation::R270;
    default:
        throw FormatError(fmt::format("rotation {} is not one of 0/90/180/270", deg));
    }
}

Rotation inverse(Rotation r) { return static_cast<Rotation>((360 - static_cast<int>(r)) % 360); }

ordered_json scheme_json(const SchemeRecord& s) {
    ordered_json j;
    j["cuts_deg"] = s.cuts_deg;
    j["pole"] = std::string(to_string(s.pole));
    j["sigma"] = s.sigma;
    return j;
}

SchemeRecord scheme_from_json(const ordered_json& j) {
    SchemeRecord s;
    s.cuts_deg = j.at("cuts_deg").get<std::vector<double>>();
    try {
        s.pole = parse_pole_style(j.at("pole").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    s.sigma = j.at("sigma").get<double>();
    return s;
}

template <class Fn>
auto guarded(std::string_view what, Fn&& fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(fmt::format("malformed {}: {}", what, e.what()));
    }
}

} // namespace

int Placement::footprint_w() const { return quarter_turned(rotation) ? height : width; }
int Placement::footprint_h() const { return quarter_turned(rotation) ? width : height; }

SchemeRecord SchemeRecord::from_scheme(const TileScheme& scheme) {
    return {scheme.cuts_degrees(), scheme.pole(), scheme.sigma()};
}

TileScheme SchemeRecord::to_scheme() const { return TileScheme::from_degrees(cuts_deg, pole, sigma); }

double LayoutManifest::waste_ratio() const {
    double tiles = 0.0;
    for (const auto& p : placements) {
        tiles += static_cast<double>(p.width) * p.height;
    }
    return (static_cast<double>(canvas_w) * canvas_h - tiles) / tiles;
}

ShelfPacking shelf_pack(std::span<const TileGeometry> tiles) {
    ShelfPacking out;
    out.placements.resize(tiles.size());
    int widest = 0;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto& t = tiles[i];
        auto& p = out.placements[i];
        p.tile_id = t.id;
        p.kind = kind_tag(t);
        p.width = t.width_px;
        p.height = t.height_px;
        p.rotation = t.height_px > t.width_px ? Rotation::R90 : Rotation::R0;
        p.lat_lo_deg = rad2deg(t.lat_lo);
        p.lat_hi_deg = rad2deg(t.lat_hi);
        widest = std::max(widest, p.footprint_w());
    }
    out.canvas_w = round_up8(widest);

    std::vector<std::size_t> order(tiles.size());
    std::iota(order.begin(), order.end(), 0);
    int y = 0;
    auto band = std::ranges::find_if(tiles, [](const TileGeometry& t) { return t.kind == TileKind::EquatorBand; });
    if (band != tiles.end()) {
        const auto bi = static_cast<std::size_t>(band - tiles.begin());
        out.placements[bi].x = 0;
        out.placements[bi].y = 0;
        y = out.placements[bi].footprint_h();
        std::erase(order, bi);
    }
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
        const auto& pa = out.placements[a];
        const auto& pb = out.placements[b];
        if (pa.footprint_h() != pb.footprint_h()) {
            return pa.footprint_h() > pb.footprint_h();
        }
        return pa.tile_id < pb.tile_id;
    });

    int x = 0;
    int shelf_h = 0;
    for (std::size_t i : order) {
        auto& p = out.placements[i];
        if (x > 0 && x + p.footprint_w() > out.canvas_w) {
            y += shelf_h;
            x = 0;
            shelf_h = 0;
        }
        p.x = x;
        p.y = y;
        x += p.footprint_w();
        shelf_h = std::max(shelf_h, p.footprint_h());
    }
    out.canvas_h = round_up8(y + shelf_h);
    return out;
}

LayoutManifest pack(const TilePlan& plan) {
    auto packing = shelf_pack(plan.tiles);
    LayoutManifest m;
    m.version = kManifestVersion;
    m.canvas_w = packing.canvas_w;
    m.canvas_h = packing.canvas_h;
    m.density_ppr = plan.density.pixels_per_radian;
    m.scheme = SchemeRecord::from_scheme(plan.scheme);
    m.placements = std::move(packing.placements);
    return m;
}

void validate_manifest(const LayoutManifest& m) {
    if (m.version != kManifestVersion) {
        throw FormatError(fmt::format("unsupported manifest version {}", m.version));
    }
    if (m.canvas_w < 1 || m.canvas_h < 1 || m.placements.empty()) {
        throw FormatError("manifest needs a non-empty canvas and at least one placement");
    }
    std::vector<bool> seen(m.placements.size(), false);
    for (const auto& p : m.placements) {
        if (p.tile_id < 0 || p.tile_id >= static_cast<int>(seen.size()) || seen[static_cast<std::size_t>(p.tile_id)]) {
            throw FormatError(fmt::format("tile id {} is out of range or placed twice", p.tile_id));
        }
        seen[static_cast<std::size_t>(p.tile_id)] = true;
        if (p.width < 1 || p.height < 1 || p.x < 0 || p.y < 0 || p.x + p.footprint_w() > m.canvas_w ||
            p.y + p.footprint_h() > m.canvas_h) {
            throw FormatError(fmt::format("tile {} does not fit inside the {}x{} canvas", p.tile_id, m.canvas_w,
                                          m.canvas_h));
        }
    }
    for (std::size_t i = 0; i < m.placements.size(); ++i) {
        for (std::size_t j = i + 1; j < m.placements.size(); ++j) {
            const auto& a = m.placements[i];
            const auto& b = m.placements[j];
            const bool apart = a.x + a.footprint_w() <= b.x || b.x + b.footprint_w() <= a.x ||
                               a.y + a.footprint_h() <= b.y || b.y + b.footprint_h() <= a.y;
            if (!apart) {
                throw FormatError(fmt::format("tiles {} and {} overlap on the canvas", a.tile_id, b.tile_id));
            }
        }
    }
}

TilePlan plan_from_manifest(const LayoutManifest& m) {
    validate_manifest(m);
    TilePlan plan = plan_tiles(m.scheme.to_scheme(), DensityRule{m.density_ppr});
    if (plan.tiles.size() != m.placements.size()) {
        throw GeometryMismatch(fmt::format("manifest places {} tiles, scheme defines {}", m.placements.size(),
                                           plan.tiles.size()));
    }
    for (const auto& p : m.placements) {
        const auto& t = plan.tiles[static_cast<std::size_t>(p.tile_id)];
        if (t.width_px != p.width || t.height_px != p.height || kind_tag(t) != p.kind) {
            throw GeometryMismatch(fmt::format("manifest tile {} ({} {}x{}) disagrees with scheme ({} {}x{})",
                                               p.tile_id, p.kind, p.width, p.height, kind_tag(t), t.width_px,
                                               t.height_px));
        }
    }
    return plan;
}

PlanarImage rotate_clockwise(const PlanarImage& img, Rotation rot) {
    if (rot == Rotation::R0) {
        return img;
    }
    const int w = img.width();
    const int h = img.height();
    const bool turned = quarter_turned(rot);
    PlanarImage out(turned ? h : w, turned ? w : h, img.model());
    for (int c = 0; c < img.plane_count(); ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const auto v = img.at(c, x, y);
                switch (rot) {
                case Rotation::R90:
                    out.at(c, h - 1 - y, x) = v;
                    break;
                case Rotation::R180:
                    out.at(c, w - 1 - x, h - 1 - y) = v;
                    break;
                case Rotation::R270:
                    out.at(c, y, w - 1 - x) = v;
                    break;
                case Rotation::R0:
                    break;
                }
            }
        }
    }
    return out;
}

PlanarImage compose_canvas(std::span<const PlanarImage> tiles, const LayoutManifest& m) {
    validate_manifest(m);
    if (tiles.size() != m.placements.size()) {
        throw GeometryMismatch(fmt::format("{} tile images for {} placements", tiles.size(), m.placements.size()));
    }
    const ColorModel model = tiles.front().model();
    const auto fill = PlanarImage(1, 1, model).black_fill();
    PlanarImage canvas(m.canvas_w, m.canvas_h, model, fill);
    for (const auto& p : m.placements) {
        const auto& tile = tiles[static_cast<std::size_t>(p.tile_id)];
        if (tile.width() != p.width || tile.height() != p.height || tile.model() != model) {
            throw GeometryMismatch(fmt::format("tile {} image is {}x{}, manifest says {}x{}", p.tile_id,
                                               tile.width(), tile.height(), p.width, p.height));
        }
        const PlanarImage placed = rotate_clockwise(tile, p.rotation);
        for (int c = 0; c < canvas.plane_count(); ++c) {
            for (int y = 0; y < placed.height(); ++y) {
                const auto src = placed.plane(c).subspan(static_cast<std::size_t>(y) * placed.width(),
                                                         static_cast<std::size_t>(placed.width()));
                std::ranges::copy(src, canvas.plane(c).begin() +
                                           static_cast<std::ptrdiff_t>((p.y + y)) * canvas.width() + p.x);
            }
        }
    }
    return canvas;
}

std::vector<PlanarImage> unpack(const PlanarImage& canvas, const LayoutManifest& m) {
    validate_manifest(m);
    if (canvas.width() != m.canvas_w || canvas.height() != m.canvas_h) {
        throw GeometryMismatch(fmt::format("canvas is {}x{}, manifest expects {}x{}", canvas.width(),
                                           canvas.height(), m.canvas_w, m.canvas_h));
    }
    std::vector<PlanarImage> tiles(m.placements.size());
    for (const auto& p : m.placements) {
        PlanarImage placed(p.footprint_w(), p.footprint_h(), canvas.model());
        for (int c = 0; c < canvas.plane_count(); ++c) {
            for (int y = 0; y < placed.height(); ++y) {
                const auto src = canvas.plane(c).subspan(static_cast<std::size_t>(p.y + y) * canvas.width() + p.x,
                                                         static_cast<std::size_t>(placed.width()));
                std::ranges::copy(src, placed.plane(c).begin() + static_cast<std::ptrdiff_t>(y) * placed.width());
            }
        }
        tiles[static_cast<std::size_t>(p.tile_id)] = rotate_clockwise(placed, inverse(p.rotation));
    }
    return tiles;
}

std::string serialize_scheme(const SchemeRecord& s) { return scheme_json(s).dump(2) + "\n"; }

SchemeRecord parse_scheme(std::string_view text) {
    return guarded("scheme", [&] {
        const auto j = ordered_json::parse(text);
        return scheme_from_json(j.contains("scheme") ? j.at("scheme") : j);
    });
}

std::string serialize_manifest(const LayoutManifest& m) {
    ordered_json j;
    j["version"] = m.version;
    j["canvas_w"] = m.canvas_w;
    j["canvas_h"] = m.canvas_h;
    j["density_ppr"] = m.density_ppr;
    j["scheme"] = scheme_json(m.scheme);
    j["placements"] = ordered_json::array();
    for (const auto& p : m.placements) {
        ordered_json e;
        e["id"] = p.tile_id;
        e["kind"] = p.kind;
        e["x"] = p.x;
        e["y"] = p.y;
        e["w"] = p.width;
        e["h"] = p.height;
        e["rot"] = static_cast<int>(p.rotation);
        e["lat_lo_deg"] = p.lat_lo_deg;
        e["lat_hi_deg"] = p.lat_hi_deg;
        j["placements"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

LayoutManifest parse_manifest(std::string_view text) {
    LayoutManifest m = guarded("manifest", [&] {
        const auto j = ordered_json::parse(text);
        LayoutManifest out;
        out.version = j.at("version").get<int>();
        out.canvas_w = j.at("canvas_w").get<int>();
        out.canvas_h = j.at("canvas_h").get<int>();
        out.density_ppr = j.at("density_ppr").get<double>();
        out.scheme = scheme_from_json(j.at("scheme"));
        for (const auto& e : j.at("placements")) {
            Placement p;
            p.tile_id = e.at("id").get<int>();
            p.kind = e.at("kind").get<std::string>();
            p.x = e.at("x").get<int>();
            p.y = e.at("y").get<int>();
            p.width = e.at("w").get<int>();
            p.height = e.at("h").get<int>();
            p.rotation = parse_rotation(e.at("rot").get<int>());
            p.lat_lo_deg = e.at("lat_lo_deg").get<double>();
            p.lat_hi_deg = e.at("lat_hi_deg").get<double>();
            out.placements.push_back(std::move(p));
        }
        return out;
    });
    validate_manifest(m);
    return m;
}

} // namespace omnitile
