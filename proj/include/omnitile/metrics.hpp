#pragma once

#include "omnitile/geometry.hpp"

#include <array>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace omnitile {

/// Points spread approximately uniformly over the sphere.
struct SampleSet {
    std::vector<SphericalCoord> points;

    std::size_t size() const { return points.size(); }
};

inline constexpr std::size_t kDefaultSampleCount = 655362;

/// Fibonacci lattice with n points (n >= 2): z_i = 1 - (2i+1)/n, longitude
/// advancing by the golden angle.
SampleSet build_sampleset(std::size_t n = kDefaultSampleCount);

/// Latitude weights tabulated every degree from -90 to +90, normalized to a
/// mean of 1. Lookup interpolates linearly between entries.
class WeightTable {
public:
    static constexpr int kEntries = 181;

    static WeightTable uniform();
    /// cos(latitude), the default L-PSNR prior.
    static WeightTable cos_latitude();
    /// Resamples (latitude_deg, weight) pairs onto the 1 degree grid by
    /// linear interpolation (constant beyond the end points) and normalizes.
    /// Throws std::invalid_argument for negative weights, fewer than one
    /// pair, or an all-zero table.
    static WeightTable from_pairs(std::vector<std::pair<double, double>> pairs);

    double at(double lat_rad) const;
    std::span<const double> entries() const { return table_; }

private:
    explicit WeightTable(std::array<double, kEntries> table);
    std::array<double, kEntries> table_{};
};

/// Parses "latitude_degrees weight" lines; '#' starts a comment. Throws
/// FormatError on malformed lines.
WeightTable parse_weight_table(std::string_view text);

struct MetricOptions {
    /// Combine planes as (6*Y + Cb + Cr) / 8 instead of luma only.
    bool include_chroma = false;
};

/// PSNR for 8-bit samples; +infinity for zero error.
double psnr_from_mse(double mse);

/// Mean squared error per plane over the sample points, each image sampled
/// bilinearly at its own equirectangular position of the point. `weights`
/// may be empty (uniform) or hold one weight per point.
std::vector<double> sphere_mse(const PlanarImage& ref, const PlanarImage& test, const SampleSet& samples,
                               std::span<const double> weights = {});

/// Sphere PSNR over uniformly distributed sample points. Throws
/// std::invalid_argument for an empty sample set or incompatible images.
double spsnr(const PlanarImage& ref, const PlanarImage& test, const SampleSet& samples, MetricOptions opts = {});

/// Latitude-weighted sphere PSNR.
double lpsnr(const PlanarImage& ref, const PlanarImage& test, const SampleSet& samples, const WeightTable& weights,
             MetricOptions opts = {});

struct RateQualityPoint {
    double bitrate_kbps = 0.0;
    double quality_db = 0.0;
};

/// Bjontegaard delta rate in percent: cubic fits of log10(bitrate) against
/// quality, integrated over the common quality interval. Negative means the
/// test curve needs less rate for equal quality. Throws std::invalid_argument
/// for fewer than 4 points, non-positive bitrates or disjoint quality ranges.
double bd_rate(std::span<const RateQualityPoint> anchor, std::span<const RateQualityPoint> test);

/// Reads a CSV with header "bitrate_kbps,psnr_db". Throws FormatError.
std::vector<RateQualityPoint> parse_rd_csv(std::string_view text);

} // namespace omnitile
