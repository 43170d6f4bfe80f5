#include "omnitile/error.hpp"
#include "omnitile/geometry.hpp"
#include "omnitile/scheme.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace omnitile;

// Reference values below were evaluated independently at 30 significant
// digits from the ring/cap area formulas.

TEST_CASE("hemisphere area: 3 tiles, square pole at 45 deg") {
    const TileScheme s({kPi / 4}, PoleStyle::Square);
    const auto r = area_report(s);
    CHECK(r.hemisphere_area == doctest::Approx(7.40220330081701896).epsilon(1e-14));
    CHECK(r.total_area == doctest::Approx(2 * 7.40220330081701896).epsilon(1e-14));
    CHECK(r.ratio_to_sphere == doctest::Approx(1.17809724509617246).epsilon(1e-14));
}

TEST_CASE("hemisphere area: 5 tiles, square pole, optimum cuts") {
    const auto s = TileScheme::from_degrees({35.07, 53.17}, PoleStyle::Square);
    const double ratio = area_report(s).ratio_to_sphere;
    CHECK(ratio == doctest::Approx(1.13368929187655044).epsilon(1e-13));
    CHECK(std::lround(100 * ratio) == 113);
}

TEST_CASE("hemisphere area: 3 tiles, circle pole at 32.70 deg") {
    const auto s = TileScheme::from_degrees({32.70}, PoleStyle::Circle);
    CHECK(area_report(s).hemisphere_area == doctest::Approx(6.72801176454584957).epsilon(1e-14));
}

TEST_CASE("overlap form with sigma = 0 equals the plain ring model") {
    const std::vector<double> cuts{0.3, 0.7, 1.1};
    for (auto pole : {PoleStyle::Circle, PoleStyle::Square}) {
        double plain = kTwoPi * cuts[0];
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            plain += kTwoPi * std::cos(cuts[i - 1]) * (cuts[i] - cuts[i - 1]);
        }
        const double radius = kHalfPi - cuts.back();
        plain += (pole == PoleStyle::Circle ? kPi : 4.0) * radius * radius;
        CHECK(std::abs(hemisphere_area(cuts, pole, 0.0) - plain) < 1e-15 * plain * 10);
    }
}

TEST_CASE("area strictly increases with overlap") {
    const std::vector<double> cuts{0.45, 0.8, 1.05};
    double prev = hemisphere_area(cuts, PoleStyle::Square, 0.0);
    for (double sigma = 0.001; sigma < 0.02; sigma += 0.001) {
        const double a = hemisphere_area(cuts, PoleStyle::Square, sigma);
        CHECK(a > prev);
        prev = a;
    }
}

TEST_CASE("circle pole area is below square pole area for identical cuts") {
    for (double t = 0.05; t < 1.5; t += 0.05) {
        const std::vector<double> cuts{t};
        CHECK(hemisphere_area(cuts, PoleStyle::Circle, 0.0) < hemisphere_area(cuts, PoleStyle::Square, 0.0));
    }
}

TEST_CASE("yu_pole_area values") {
    CHECK(yu_pole_area(kPi / 4) == doctest::Approx(3.48943209981943977).epsilon(1e-14));
    CHECK(yu_pole_area(kPi / 3) == doctest::Approx(kPi * kPi / 6).epsilon(1e-14));
    CHECK(yu_pole_area(kPi / 4) > pole_area(kPi / 4, PoleStyle::Square));
    CHECK(pole_area(kPi / 4, PoleStyle::Square) == doctest::Approx(2.46740110027233965));
    CHECK(pole_area(kPi / 4, PoleStyle::Circle) == doctest::Approx(1.93789229251873876));
    CHECK(pole_area(kPi / 4, PoleStyle::Square) > pole_area(kPi / 4, PoleStyle::Circle));
}

TEST_CASE("yu pole exceeds both flattened poles across the open interval") {
    for (double t = 0.01; t < kHalfPi - 0.01; t += 0.001) {
        const double yu = yu_pole_area(t);
        CHECK(yu > pole_area(t, PoleStyle::Square));
        CHECK(yu > pole_area(t, PoleStyle::Circle));
    }
}

TEST_CASE("yu_pole_area domain errors") {
    CHECK_THROWS_AS(yu_pole_area(0.0), std::domain_error);
    CHECK_THROWS_AS(yu_pole_area(kHalfPi), std::domain_error);
    CHECK_THROWS_AS(yu_pole_area(-0.2), std::domain_error);
}

TEST_CASE("baseline ratios") {
    CHECK(baseline_ratio(BaselineProjection::Equirectangular) == kPi / 2);
    CHECK(baseline_ratio(BaselineProjection::Cubic) == 6 / kPi);
    CHECK(std::lround(100 * baseline_ratio(BaselineProjection::Equirectangular)) == 157);
    const long cubic = std::lround(100 * baseline_ratio(BaselineProjection::Cubic));
    CHECK((cubic == 190 || cubic == 191));
}

TEST_CASE("yu-style 5-tile equal division") {
    const std::vector<double> cuts{kPi / 6, kPi / 3};
    CHECK(yu_scheme_ratio(cuts) == doctest::Approx(1.23884800445600277).epsilon(1e-14));
}

TEST_CASE("TileScheme validation names the violated bound") {
    CHECK_THROWS_AS(TileScheme({}, PoleStyle::Square), InvalidScheme);
    CHECK_THROWS_WITH_AS(TileScheme({0.0}, PoleStyle::Square), doctest::Contains("theta_1"), InvalidScheme);
    CHECK_THROWS_WITH_AS(TileScheme({0.5, 0.4}, PoleStyle::Square), doctest::Contains("theta_2"), InvalidScheme);
    CHECK_THROWS_WITH_AS(TileScheme({0.5, kHalfPi}, PoleStyle::Square), doctest::Contains("pi/2"), InvalidScheme);
    // overlap narrows the feasible interval
    CHECK_NOTHROW(TileScheme({0.01}, PoleStyle::Circle, 0.0));
    CHECK_THROWS_AS(TileScheme({0.01}, PoleStyle::Circle, 0.01), InvalidScheme);
    CHECK_THROWS_AS(TileScheme({1.56}, PoleStyle::Circle, 0.01), InvalidScheme);
    CHECK_THROWS_AS(TileScheme({0.5}, PoleStyle::Circle, -0.1), InvalidScheme);
}

TEST_CASE("TileScheme accessors") {
    const auto s = TileScheme::from_degrees({30.0, 60.0}, PoleStyle::Circle, 0.005);
    CHECK(s.tile_count() == 5);
    CHECK(s.cut_count() == 2);
    CHECK(s.pole_latitude() == doctest::Approx(kPi / 3));
    CHECK(s.overlap_extension() == doctest::Approx(0.005 * kPi / 2));
    CHECK(s.cuts_degrees()[0] == doctest::Approx(30.0));
    CHECK(parse_pole_style("square") == PoleStyle::Square);
    CHECK(to_string(PoleStyle::Circle) == "circle");
    CHECK_THROWS_AS(parse_pole_style("hexagon"), std::invalid_argument);
}
