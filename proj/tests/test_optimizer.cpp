#include "omnitile/error.hpp"
#include "omnitile/optimizer.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>

#include <fmt/format.h>

using namespace omnitile;

namespace {

std::string degrees_2dp(const OptimizationResult& r) {
    std::string out;
    for (double d : r.scheme.cuts_degrees()) {
        out += fmt::format("{:.2f} ", d);
    }
    return out;
}

// Brute-force oracle: hemisphere area of a 5-tile scheme without overlap,
// written out term by term, minimized over a 0.01 deg grid of ordered pairs.
std::pair<double, double> grid_search_two_cuts(double pole_coeff) {
    const double step = kPi / 180.0 / 100.0;
    const int count = 9000;
    std::vector<double> cosines(count);
    for (int i = 0; i < count; ++i) {
        cosines[static_cast<std::size_t>(i)] = std::cos(i * step);
    }
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> arg{0, 0};
    for (int i = 1; i < count; ++i) {
        const double t1 = i * step;
        for (int j = i + 1; j < count; ++j) {
            const double t2 = j * step;
            const double r = kHalfPi - t2;
            const double s = 2 * kPi * t1 + 2 * kPi * cosines[static_cast<std::size_t>(i)] * (t2 - t1) +
                             pole_coeff * r * r;
            if (s < best) {
                best = s;
                arg = {i, j};
            }
        }
    }
    return {arg.first / 100.0, arg.second / 100.0};
}

} // namespace

TEST_CASE("single cut matches the closed-form optimum") {
    for (double sigma : {0.0, 0.001, 0.003, 0.005, 0.007}) {
        CAPTURE(sigma);
        const auto circle = optimize_cuts(1, PoleStyle::Circle, sigma);
        const auto square = optimize_cuts(1, PoleStyle::Square, sigma);
        CHECK(circle.converged);
        CHECK(square.converged);
        CHECK(std::abs(circle.scheme.cuts()[0] - (kHalfPi - 1.0 + sigma * kHalfPi)) < 1e-6);
        CHECK(std::abs(square.scheme.cuts()[0] - (kPi / 4 + sigma * kHalfPi)) < 1e-6);
    }
}

TEST_CASE("published optimum angles at two decimals") {
    struct Row {
        int n;
        PoleStyle pole;
        double sigma;
        const char* expected;
    };
    const Row rows[] = {
        {1, PoleStyle::Circle, 0.0, "32.70 "},        {1, PoleStyle::Circle, 0.003, "32.97 "},
        {1, PoleStyle::Circle, 0.005, "33.15 "},      {2, PoleStyle::Circle, 0.0, "25.34 38.22 "},
        {2, PoleStyle::Circle, 0.003, "26.08 38.81 "}, {2, PoleStyle::Circle, 0.005, "26.58 39.21 "},
        {1, PoleStyle::Square, 0.0, "45.00 "},        {1, PoleStyle::Square, 0.003, "45.27 "},
        {1, PoleStyle::Square, 0.005, "45.45 "},      {2, PoleStyle::Square, 0.0, "35.07 53.17 "},
        {2, PoleStyle::Square, 0.003, "35.81 53.77 "}, {2, PoleStyle::Square, 0.005, "36.30 54.18 "},
    };
    for (const auto& row : rows) {
        const auto r = optimize_cuts(row.n, row.pole, row.sigma);
        CAPTURE(row.sigma);
        CHECK(r.converged);
        CHECK(degrees_2dp(r) == row.expected);
    }
}

TEST_CASE("two cuts agree with exhaustive 0.01 deg grid search") {
    for (auto [pole, coeff] : {std::pair{PoleStyle::Square, 4.0}, std::pair{PoleStyle::Circle, kPi}}) {
        const auto [g1, g2] = grid_search_two_cuts(coeff);
        const auto r = optimize_cuts(2, pole, 0.0);
        const auto deg = r.scheme.cuts_degrees();
        CHECK(std::abs(deg[0] - g1) <= 0.02);
        CHECK(std::abs(deg[1] - g2) <= 0.02);
    }
}

TEST_CASE("first-order conditions hold at the optimum") {
    for (int n = 1; n <= 8; ++n) {
        for (double sigma : {0.0, 0.002, 0.005}) {
            const auto r = optimize_cuts(n, PoleStyle::Square, sigma);
            CAPTURE(n);
            CAPTURE(sigma);
            CHECK(r.converged);
            CHECK(r.max_gradient < 1e-8);
            for (double g : numeric_gradient(r.scheme.cuts(), PoleStyle::Square, sigma, 1e-6)) {
                CHECK(std::abs(g) < 1e-8);
            }
        }
    }
}

TEST_CASE("analytic gradient agrees with central differences") {
    const std::vector<double> cuts{0.2, 0.55, 0.9, 1.2};
    for (auto pole : {PoleStyle::Circle, PoleStyle::Square}) {
        const auto a = hemisphere_area_gradient(cuts, pole, 0.004);
        const auto n = numeric_gradient(cuts, pole, 0.004, 1e-6);
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            CHECK(a[i] == doctest::Approx(n[i]).epsilon(1e-7));
        }
    }
}

TEST_CASE("optimal area is non-increasing in n without overlap and increasing in sigma") {
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 10; ++n) {
        const double a = optimize_cuts(n, PoleStyle::Square, 0.0).area.hemisphere_area;
        CHECK(a <= prev);
        prev = a;
        double prev_sigma = a;
        for (double sigma : {0.001, 0.003, 0.005, 0.007}) {
            const double as = optimize_cuts(n, PoleStyle::Square, sigma).area.hemisphere_area;
            CHECK(as > prev_sigma);
            prev_sigma = as;
        }
    }
}

TEST_CASE("converged cuts stay strictly inside the feasible region") {
    for (int n = 1; n <= 6; ++n) {
        const double sigma = 0.004;
        const auto r = optimize_cuts(n, PoleStyle::Circle, sigma);
        const auto& c = r.scheme.cuts();
        CHECK(c.front() > sigma * kHalfPi);
        CHECK(c.back() < kHalfPi - sigma * kHalfPi);
        for (std::size_t i = 1; i < c.size(); ++i) {
            CHECK(c[i] > c[i - 1]);
        }
    }
}

TEST_CASE("infeasible requests throw") {
    CHECK_THROWS_AS(optimize_cuts(0, PoleStyle::Square, 0.0), InfeasibleProblem);
    CHECK_THROWS_AS(optimize_cuts(1, PoleStyle::Square, -0.001), InfeasibleProblem);
    CHECK_THROWS_AS(optimize_cuts(3, PoleStyle::Square, 0.25), InfeasibleProblem);
    CHECK_NOTHROW(optimize_cuts(3, PoleStyle::Square, 0.2));
    CHECK_THROWS_AS(best_tilecount(0.0, PoleStyle::Square, 0), InfeasibleProblem);
}

TEST_CASE("best tile count without overlap uses the most cuts") {
    const auto r = best_tilecount(0.0, PoleStyle::Square, 5);
    CHECK(r.scheme.cut_count() == 5);
}

TEST_CASE("more overlap favours fewer tiles") {
    const int at_low = best_tilecount(0.001, PoleStyle::Square, 25).scheme.cut_count();
    const int at_high = best_tilecount(0.007, PoleStyle::Square, 25).scheme.cut_count();
    CHECK(at_high < at_low);
    CHECK(2 * at_low + 1 == 41);
    CHECK(2 * at_high + 1 == 9);
}

TEST_CASE("area_vs_tilecount") {
    const auto curve = area_vs_tilecount(2, PoleStyle::Square, 0.0);
    REQUIRE(curve.size() == 2u);
    CHECK(curve[0].first == 1);
    CHECK(curve[0].second == doctest::Approx(1.17809724509617246).epsilon(1e-10));
    CHECK(curve[1].second == doctest::Approx(1.13368929).epsilon(1e-7));

    const auto many = area_vs_tilecount(30, PoleStyle::Square, 0.0);
    CHECK(many.back().second > 1.0);
    CHECK(many.back().second < 1.025);
    // gap to the sphere keeps shrinking
    CHECK(many.back().second - 1.0 < 0.5 * (many[9].second - 1.0));

    const auto low = area_vs_tilecount(6, PoleStyle::Square, 0.001);
    const auto high = area_vs_tilecount(6, PoleStyle::Square, 0.007);
    for (std::size_t i = 0; i < low.size(); ++i) {
        CHECK(high[i].second > low[i].second);
    }
}
