#include "omnitile/error.hpp"
#include "omnitile/image_io.hpp"

#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

using namespace omnitile;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "omnitile_test_image_io";
    fs::create_directories(dir);
    return dir / name;
}

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

void write_bytes(const fs::path& p, std::string_view bytes) {
    std::ofstream(p, std::ios::binary) << bytes;
}

} // namespace

TEST_CASE("png and pnm round trips are lossless") {
    const auto rgb = noise(37, 19, ColorModel::RGB, 1);
    const auto gray = noise(20, 11, ColorModel::Gray, 2);
    for (const char* name : {"a.png", "a.ppm"}) {
        write_image(scratch(name), rgb);
        CHECK(read_image(scratch(name)) == rgb);
    }
    for (const char* name : {"g.png", "g.pgm"}) {
        write_image(scratch(name), gray);
        CHECK(read_image(scratch(name)) == gray);
    }
}

TEST_CASE("pnm header comments are skipped") {
    write_bytes(scratch("c.pgm"), std::string("P5\n# made by hand\n2 1\n255\n") + "\x07\xF0");
    const auto img = read_image(scratch("c.pgm"));
    CHECK(img.width() == 2);
    CHECK(img.at(0, 0, 0) == 7);
    CHECK(img.at(0, 1, 0) == 240);
}

TEST_CASE("image errors") {
    CHECK_THROWS_AS(read_image(scratch("missing.png")), IoError);
    write_bytes(scratch("junk.png"), "not a png");
    CHECK_THROWS_AS(read_image(scratch("junk.png")), FormatError);
    write_bytes(scratch("short.ppm"), "P6 4 4 255\n\x01\x02");
    CHECK_THROWS_AS(read_image(scratch("short.ppm")), FormatError);
    write_bytes(scratch("deep.pgm"), "P5 1 1 65535\n\x01\x02");
    CHECK_THROWS_AS(read_image(scratch("deep.pgm")), FormatError);
    CHECK_THROWS_AS(read_image(scratch("x.bmp")), FormatError);
    CHECK_THROWS_AS(write_image(scratch("y.png"), PlanarImage(4, 4, ColorModel::YCbCr)), FormatError);
    CHECK_THROWS_AS(write_image(scratch("g.ppm"), PlanarImage(4, 4, ColorModel::Gray)), FormatError);
}

TEST_CASE("yuv420 keeps luma and flat chroma exactly") {
    PlanarImage img = noise(16, 8, ColorModel::YCbCr, 4);
    std::ranges::fill(img.plane(1), 90);
    std::ranges::fill(img.plane(2), 200);
    const std::vector<PlanarImage> frames{img, noise(16, 8, ColorModel::YCbCr, 5)};
    write_yuv420(scratch("v.yuv"), frames);
    CHECK(fs::file_size(scratch("v.yuv")) == 2u * 16 * 8 * 3 / 2);
    const auto back = read_yuv420(scratch("v.yuv"), 16, 8);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == img);
    CHECK(std::ranges::equal(back[1].plane(0), frames[1].plane(0)));
}

TEST_CASE("yuv420 chroma is the 2x2 mean") {
    PlanarImage img(4, 2, ColorModel::YCbCr);
    // left block 10,20,30,40 -> 25; right block all 100
    img.at(1, 0, 0) = 10;
    img.at(1, 1, 0) = 20;
    img.at(1, 0, 1) = 30;
    img.at(1, 1, 1) = 40;
    for (int y = 0; y < 2; ++y) {
        for (int x = 2; x < 4; ++x) {
            img.at(1, x, y) = 100;
        }
    }
    const auto bytes = planar_to_yuv420(img);
    REQUIRE(bytes.size() == 12);
    CHECK(bytes[8] == 25);
    CHECK(bytes[9] == 100);
    const auto up = yuv420_to_planar(bytes, 4, 2);
    // outermost columns reproduce the block values, inner ones interpolate
    CHECK(up.at(1, 0, 0) == 25);
    CHECK(up.at(1, 3, 1) == 100);
    CHECK(up.at(1, 1, 0) == 44);
    CHECK(up.at(1, 2, 0) == 81);
}

TEST_CASE("yuv420 size checks") {
    write_bytes(scratch("odd.yuv"), std::string(10, '\0'));
    CHECK_THROWS_AS(read_yuv420(scratch("odd.yuv"), 4, 2), FormatError);
    CHECK_THROWS_AS(read_yuv420(scratch("odd.yuv"), 3, 2), FormatError);
    CHECK_THROWS_AS(read_yuv420(scratch("none.yuv"), 4, 2), IoError);
}

TEST_CASE("replicated chroma round-trips through 4:2:0") {
    const auto img = noise(8, 6, ColorModel::YCbCr, 9);
    const auto bytes = planar_to_yuv420(img);
    const auto rep = yuv420_to_planar(bytes, 8, 6, ChromaUpsampling::Replicate);
    CHECK(rep.at(1, 2, 4) == rep.at(1, 3, 5));
    CHECK(planar_to_yuv420(rep) == bytes);
}
