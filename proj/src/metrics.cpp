#include "omnitile/metrics.hpp"

#include "omnitile/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace omnitile {

namespace {

// Fixed chunking keeps floating-point summation order independent of the
// number of worker threads.
constexpr std::size_t kChunk = 4096;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

void check_pair(const PlanarImage& ref, const PlanarImage& test, const SampleSet& samples) {
    if (samples.points.empty()) {
        throw std::invalid_argument("sphere metric needs a non-empty sample set");
    }
    if (ref.empty() || test.empty() || ref.plane_count() != test.plane_count() || ref.model() != test.model()) {
        throw std::invalid_argument("reference and test images must share a color model");
    }
}

double combine(const std::vector<double>& mse, const MetricOptions& opts) {
    if (!opts.include_chroma || mse.size() < 3) {
        return psnr_from_mse(mse[0]);
    }
    return (6.0 * psnr_from_mse(mse[0]) + psnr_from_mse(mse[1]) + psnr_from_mse(mse[2])) / 8.0;
}

// Coefficients c0..c3 of the least-squares cubic y(x).
Eigen::Vector4d fit_cubic(std::span<const double> x, std::span<const double> y) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), 4);
    Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        a(r, 0) = 1.0;
        a(r, 1) = x[i];
        a(r, 2) = x[i] * x[i];
        a(r, 3) = x[i] * x[i] * x[i];
        b(r) = y[i];
    }
    return a.colPivHouseholderQr().solve(b);
}

double integrate_cubic(const Eigen::Vector4d& c, double lo, double hi) {
    auto prim = [&](double x) { return x * (c(0) + x * (c(1) / 2.0 + x * (c(2) / 3.0 + x * c(3) / 4.0))); };
    return prim(hi) - prim(lo);
}

} // namespace

SampleSet build_sampleset(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("sample set needs at least 2 points");
    }
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    SampleSet s;
    s.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        s.points[i] = {std::asin(z), wrap_longitude(std::fmod(golden_angle * static_cast<double>(i), kTwoPi))};
    }
    return s;
}

WeightTable::WeightTable(std::array<double, kEntries> table) : table_(table) {
    double sum = 0.0;
    for (double w : table_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("latitude weights must be finite and non-negative");
        }
        sum += w;
    }
    if (!(sum > 0.0)) {
        throw std::invalid_argument("latitude weight table is all zero");
    }
    const double mean = sum / kEntries;
    for (double& w : table_) {
        w /= mean;
    }
}

WeightTable WeightTable::uniform() {
    std::array<double, kEntries> t{};
    t.fill(1.0);
    return WeightTable(t);
}

WeightTable WeightTable::cos_latitude() {
    std::array<double, kEntries> t{};
    for (int i = 0; i < kEntries; ++i) {
        t[static_cast<std::size_t>(i)] = std::max(0.0, std::cos(deg2rad(i - 90.0)));
    }
    return WeightTable(t);
}

WeightTable WeightTable::from_pairs(std::vector<std::pair<double, double>> pairs) {
    if (pairs.empty()) {
        throw std::invalid_argument("weight table needs at least one latitude/weight pair");
    }
    std::ranges::sort(pairs);
    std::array<double, kEntries> t{};
    for (int i = 0; i < kEntries; ++i) {
        const double lat = i - 90.0;
        double w = 0.0;
        if (lat <= pairs.front().first) {
            w = pairs.front().second;
        } else if (lat >= pairs.back().first) {
            w = pairs.back().second;
        } else {
            const auto hi = std::ranges::upper_bound(pairs, lat, {}, &std::pair<double, double>::first);
            const auto lo = hi - 1;
            const double f = (lat - lo->first) / (hi->first - lo->first);
            w = lo->second + f * (hi->second - lo->second);
        }
        t[static_cast<std::size_t>(i)] = w;
    }
    return WeightTable(t);
}

double WeightTable::at(double lat_rad) const {
    const double pos = std::clamp(rad2deg(lat_rad) + 90.0, 0.0, static_cast<double>(kEntries - 1));
    const auto i = static_cast<std::size_t>(std::min(std::floor(pos), static_cast<double>(kEntries - 2)));
    const double f = pos - static_cast<double>(i);
    return table_[i] + f * (table_[i + 1] - table_[i]);
}

WeightTable parse_weight_table(std::string_view text) {
    std::vector<std::pair<double, double>> pairs;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) {
            body = body.substr(0, hash);
        }
        if (trim(body).empty()) {
            continue;
        }
        std::istringstream fields{std::string(body)};
        double lat = 0.0;
        double w = 0.0;
        std::string extra;
        if (!(fields >> lat >> w) || (fields >> extra) || lat < -90.0 || lat > 90.0) {
            throw FormatError(fmt::format("weight table line {}: expected 'latitude_degrees weight'", lineno));
        }
        pairs.emplace_back(lat, w);
    }
    try {
        return WeightTable::from_pairs(std::move(pairs));
    } catch (const std::invalid_argument& e) {
        throw FormatError(fmt::format("weight table: {}", e.what()));
    }
}

double psnr_from_mse(double mse) {
    if (mse <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::vector<double> sphere_mse(const PlanarImage& ref, const PlanarImage& test, const SampleSet& samples,
                               std::span<const double> weights) {
    check_pair(ref, test, samples);
    if (!weights.empty() && weights.size() != samples.size()) {
        throw std::invalid_argument("one weight per sample point is required");
    }
    const auto planes = static_cast<std::size_t>(ref.plane_count());
    const std::size_t chunks = (samples.size() + kChunk - 1) / kChunk;
    // per chunk: one squared-error sum per plane, then the weight sum
    std::vector<double> partial(chunks * (planes + 1), 0.0);

    detail::parallel_rows(static_cast<int>(chunks), [&](int chunk) {
        const std::size_t begin = static_cast<std::size_t>(chunk) * kChunk;
        const std::size_t end = std::min(begin + kChunk, samples.size());
        double* acc = partial.data() + static_cast<std::size_t>(chunk) * (planes + 1);
        for (std::size_t i = begin; i < end; ++i) {
            const auto s = samples.points[i];
            const double w = weights.empty() ? 1.0 : weights[i];
            const auto tr = bilinear_tap(ref.width(), ref.height(), sphere_to_equirect(s, ref.width(), ref.height()), true);
            const auto tt =
                bilinear_tap(test.width(), test.height(), sphere_to_equirect(s, test.width(), test.height()), true);
            for (std::size_t c = 0; c < planes; ++c) {
                const double d = apply_tap(ref.plane(static_cast<int>(c)), tr) - apply_tap(test.plane(static_cast<int>(c)), tt);
                acc[c] += w * d * d;
            }
            acc[planes] += w;
        }
    });

    std::vector<double> sse(planes, 0.0);
    double wsum = 0.0;
    for (std::size_t k = 0; k < chunks; ++k) {
        for (std::size_t c = 0; c < planes; ++c) {
            sse[c] += partial[k * (planes + 1) + c];
        }
        wsum += partial[k * (planes + 1) + planes];
    }
    if (!(wsum > 0.0)) {
        throw std::invalid_argument("sample weights sum to zero");
    }
    for (double& v : sse) {
        v /= wsum;
    }
    return sse;
}

double spsnr(const PlanarImage& ref, const PlanarImage& test, const SampleSet& samples, MetricOptions opts) {
    return combine(sphere_mse(ref, test, samples), opts);
}

double lpsnr(const PlanarImage& ref, const PlanarImage& test, const SampleSet& samples, const WeightTable& weights,
             MetricOptions opts) {
    std::vector<double> w(samples.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = weights.at(samples.points[i].lat);
    }
    return combine(sphere_mse(ref, test, samples, w), opts);
}

double bd_rate(std::span<const RateQualityPoint> anchor, std::span<const RateQualityPoint> test) {
    if (anchor.size() < 4 || test.size() < 4) {
        throw std::invalid_argument(
            fmt::format("BD-rate needs at least 4 points per curve (got {} and {})", anchor.size(), test.size()));
    }
    auto split = [](std::span<const RateQualityPoint> curve, std::vector<double>& q, std::vector<double>& lr) {
        for (const auto& p : curve) {
            if (!(p.bitrate_kbps > 0.0) || !std::isfinite(p.quality_db)) {
                throw std::invalid_argument(fmt::format("invalid rate/quality point ({}, {})", p.bitrate_kbps,
                                                        p.quality_db));
            }
            q.push_back(p.quality_db);
            lr.push_back(std::log10(p.bitrate_kbps));
        }
    };
    std::vector<double> qa, ra, qt, rt;
    split(anchor, qa, ra);
    split(test, qt, rt);

    const double lo = std::max(*std::ranges::min_element(qa), *std::ranges::min_element(qt));
    const double hi = std::min(*std::ranges::max_element(qa), *std::ranges::max_element(qt));
    if (!(hi > lo)) {
        throw std::invalid_argument(fmt::format("quality ranges do not overlap ([{}, {}] empty)", lo, hi));
    }
    const auto fa = fit_cubic(qa, ra);
    const auto ft = fit_cubic(qt, rt);
    const double avg = (integrate_cubic(ft, lo, hi) - integrate_cubic(fa, lo, hi)) / (hi - lo);
    return (std::pow(10.0, avg) - 1.0) * 100.0;
}

std::vector<RateQualityPoint> parse_rd_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || trim(line) != "bitrate_kbps,psnr_db") {
        throw FormatError("RD curve CSV must start with the header 'bitrate_kbps,psnr_db'");
    }
    std::vector<RateQualityPoint> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto comma = body.find(',');
        if (comma == std::string_view::npos) {
            throw FormatError(fmt::format("RD curve line {}: expected 'bitrate,psnr'", lineno));
        }
        try {
            std::size_t used_rate = 0;
            std::size_t used_q = 0;
            const std::string rate(trim(body.substr(0, comma)));
            const std::string q(trim(body.substr(comma + 1)));
            RateQualityPoint p{std::stod(rate, &used_rate), std::stod(q, &used_q)};
            if (used_rate != rate.size() || used_q != q.size()) {
                throw std::invalid_argument("trailing characters");
            }
            out.push_back(p);
        } catch (const std::exception&) {
            throw FormatError(fmt::format("RD curve line {}: '{}' is not two numbers", lineno, body));
        }
    }
    return out;
}

} // namespace omnitile
