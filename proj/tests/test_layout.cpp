#include "omnitile/error.hpp"
#include "omnitile/layout.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>

using namespace omnitile;

namespace {

PlanarImage noise(int w, int h, ColorModel model, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> d(0, 255);
    PlanarImage img(w, h, model);
    for (int c = 0; c < img.plane_count(); ++c) {
        for (auto& v : img.plane(c)) {
            v = static_cast<std::uint8_t>(d(rng));
        }
    }
    return img;
}

std::vector<PlanarImage> noise_tiles(const TilePlan& plan, ColorModel model) {
    std::vector<PlanarImage> out;
    for (const auto& t : plan.tiles) {
        out.push_back(noise(t.width_px, t.height_px, model, static_cast<unsigned>(t.id + 17)));
    }
    return out;
}

} // namespace

TEST_CASE("3 tiles at 45 deg pack into 2048x1024") {
    const auto plan = plan_tiles(TileScheme({kPi / 4}, PoleStyle::Square), DensityRule::from_equirect_height(1024));
    const auto m = pack(plan);
    CHECK(m.canvas_w == 2048);
    CHECK(m.canvas_h == 1024);
    const auto& band = m.placements[1];
    CHECK(band.kind == "equator");
    CHECK(band.x == 0);
    CHECK(band.y == 0);
    CHECK(m.placements[0].y == 512);
    CHECK(m.placements[2].y == 512);
    CHECK(m.placements[0].x == 0);
    CHECK(m.placements[2].x == 512);
    const double waste_px = 2048.0 * 1024 - (2048.0 * 512 + 2 * 512.0 * 512);
    CHECK(waste_px == 1024.0 * 512);
    CHECK(m.waste_ratio() == doctest::Approx(waste_px / (2048.0 * 512 + 2 * 512.0 * 512)));
}

TEST_CASE("a single tile packs without waste") {
    TileGeometry t;
    t.id = 0;
    t.width_px = 2048;
    t.height_px = 512;
    const auto p = shelf_pack(std::span(&t, 1));
    CHECK(p.canvas_w == 2048);
    CHECK(p.canvas_h == 512);
    CHECK(p.placements[0].x == 0);
    CHECK(p.placements[0].y == 0);
}

TEST_CASE("tall tiles are turned landscape") {
    std::vector<TileGeometry> tiles(2);
    tiles[0].id = 0;
    tiles[0].width_px = 64;
    tiles[0].height_px = 16;
    tiles[1].id = 1;
    tiles[1].width_px = 10;
    tiles[1].height_px = 40;
    const auto p = shelf_pack(tiles);
    CHECK(p.placements[1].rotation == Rotation::R90);
    CHECK(p.placements[1].footprint_w() == 40);
    CHECK(p.canvas_w == 64);
}

TEST_CASE("5-tile layout wastes more than 3-tile") {
    const auto density = DensityRule::from_equirect_height(1024);
    const auto three = pack(plan_tiles(TileScheme({kPi / 4}, PoleStyle::Square), density));
    const auto five = pack(plan_tiles(TileScheme::from_degrees({35.07, 53.17}, PoleStyle::Square), density));
    CHECK(five.waste_ratio() > three.waste_ratio());
    CHECK(five.canvas_w % 8 == 0);
    CHECK(five.canvas_h % 8 == 0);
}

TEST_CASE("packing invariants over many schemes") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.05, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 6;
        std::vector<double> cuts;
        for (int i = 0; i < n; ++i) {
            cuts.push_back(u(rng));
        }
        std::ranges::sort(cuts);
        if (std::ranges::adjacent_find(cuts, [](double a, double b) { return b - a < 0.02; }) != cuts.end()) {
            continue;
        }
        const auto plan = plan_tiles(TileScheme(cuts, PoleStyle::Square, 0.002), DensityRule{40.0 + trial});
        const auto m = pack(plan);
        CHECK_NOTHROW(validate_manifest(m));
        CHECK(pack(plan) == m);
        double tiles = 0.0;
        for (const auto& p : m.placements) {
            tiles += static_cast<double>(p.width) * p.height;
        }
        CHECK(static_cast<double>(m.canvas_w) * m.canvas_h >= tiles);

        const auto images = noise_tiles(plan, ColorModel::RGB);
        CHECK(unpack(compose_canvas(images, m), m) == images);
    }
}

TEST_CASE("rotated placements round-trip") {
    const auto plan = plan_tiles(TileScheme({kPi / 4}, PoleStyle::Square), DensityRule{50.0});
    auto m = pack(plan);
    // turn the caps by hand and move them onto their own shelves
    const int side = m.placements[0].width;
    m.placements[0].rotation = Rotation::R90;
    m.placements[2].rotation = Rotation::R270;
    m.placements[2].x = side;
    m.placements[1].rotation = Rotation::R180;
    validate_manifest(m);
    const auto images = noise_tiles(plan, ColorModel::Gray);
    const auto canvas = compose_canvas(images, m);
    const auto back = unpack(canvas, m);
    CHECK(back == images);
    CHECK(canvas.at(0, side - 1, m.placements[0].y) == images[0].at(0, 0, 0));
}

TEST_CASE("rotate_clockwise is a group action") {
    const auto img = noise(5, 3, ColorModel::RGB, 3);
    CHECK(rotate_clockwise(rotate_clockwise(img, Rotation::R90), Rotation::R270) == img);
    CHECK(rotate_clockwise(rotate_clockwise(img, Rotation::R180), Rotation::R180) == img);
    CHECK(rotate_clockwise(rotate_clockwise(img, Rotation::R90), Rotation::R90) == rotate_clockwise(img, Rotation::R180));
}

TEST_CASE("unpack rejects a truncated canvas") {
    const auto plan = plan_tiles(TileScheme({kPi / 4}, PoleStyle::Square), DensityRule{50.0});
    const auto m = pack(plan);
    PlanarImage small(m.canvas_w, m.canvas_h - 8, ColorModel::Gray);
    CHECK_THROWS_AS(unpack(small, m), GeometryMismatch);
}

TEST_CASE("manifest validation catches overlap and duplicates") {
    const auto plan = plan_tiles(TileScheme::from_degrees({35.0, 53.0}, PoleStyle::Square), DensityRule{60.0});
    auto m = pack(plan);
    auto overlap = m;
    overlap.placements[0].x = overlap.placements[2].x;
    overlap.placements[0].y = overlap.placements[2].y;
    CHECK_THROWS_AS(validate_manifest(overlap), FormatError);
    auto dup = m;
    dup.placements[1].tile_id = 0;
    CHECK_THROWS_AS(validate_manifest(dup), FormatError);
    auto outside = m;
    outside.placements[3].x = m.canvas_w;
    CHECK_THROWS_AS(validate_manifest(outside), FormatError);
}

TEST_CASE("manifest text round trip is bit exact") {
    const auto plan = plan_tiles(TileScheme::from_degrees({36.30, 54.18}, PoleStyle::Circle, 0.005),
                                 DensityRule::from_equirect_height(1080));
    const auto m = pack(plan);
    const std::string text = serialize_manifest(m);
    const auto parsed = parse_manifest(text);
    CHECK(parsed == m);
    CHECK(serialize_manifest(parsed) == text);

    const auto again = plan_from_manifest(parsed);
    REQUIRE(again.tiles.size() == plan.tiles.size());
    for (std::size_t i = 0; i < plan.tiles.size(); ++i) {
        CHECK(again.tiles[i].width_px == plan.tiles[i].width_px);
        CHECK(again.tiles[i].height_px == plan.tiles[i].height_px);
    }

    for (const char* key : {"\"version\"", "\"canvas_w\"", "\"canvas_h\"", "\"density_ppr\"", "\"cuts_deg\"",
                            "\"pole\"", "\"sigma\"", "\"placements\"", "\"kind\"", "\"rot\"", "\"lat_lo_deg\"",
                            "\"lat_hi_deg\""}) {
        CHECK(text.find(key) != std::string::npos);
    }
}

TEST_CASE("malformed manifests") {
    CHECK_THROWS_AS(parse_manifest("{"), FormatError);
    CHECK_THROWS_AS(parse_manifest("{\"version\": 1}"), FormatError);
    const auto plan = plan_tiles(TileScheme({kPi / 4}, PoleStyle::Square), DensityRule{50.0});
    auto m = pack(plan);
    m.version = 7;
    CHECK_THROWS_AS(parse_manifest(serialize_manifest(m)), FormatError);

    auto wrong = pack(plan);
    wrong.placements[0].width -= 2;
    wrong.placements[0].height -= 2;
    CHECK_THROWS_AS(plan_from_manifest(wrong), GeometryMismatch);
}

TEST_CASE("scheme documents") {
    const SchemeRecord s{{35.07, 53.17}, PoleStyle::Square, 0.003};
    const auto text = serialize_scheme(s);
    CHECK(parse_scheme(text) == s);
    CHECK(serialize_scheme(parse_scheme(text)) == text);
    const auto plan = plan_tiles(s.to_scheme(), DensityRule{30.0});
    CHECK(parse_scheme(serialize_manifest(pack(plan))) == SchemeRecord::from_scheme(s.to_scheme()));
    CHECK_THROWS_AS(parse_scheme("{\"cuts_deg\": [1], \"pole\": \"oval\", \"sigma\": 0}"), FormatError);
}
