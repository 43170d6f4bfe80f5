#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace omnitile {

enum class PoleStyle { Circle, Square };

std::string_view to_string(PoleStyle pole);
PoleStyle parse_pole_style(std::string_view text);

/// Latitude segmentation of the sphere, mirrored about the equator.
///
/// `cuts` holds the northern border latitudes theta_1 < ... < theta_n in
/// radians; the south hemisphere uses their negatives. The last cut is the
/// rim of the pole cap. `sigma` is the overlap as a fraction of the total
/// sphere height, so every internal border extends each adjacent tile by
/// sigma*pi/2 radians. A scheme with n cuts has 2n+1 tiles.
class TileScheme {
public:
    /// Validates sigma*pi/2 < theta_1 < ... < theta_n < pi/2 - sigma*pi/2.
    /// Throws InvalidScheme naming the first violated bound.
    TileScheme(std::vector<double> cuts, PoleStyle pole, double sigma = 0.0);

    static TileScheme from_degrees(const std::vector<double>& cuts_deg, PoleStyle pole, double sigma = 0.0);

    const std::vector<double>& cuts() const { return cuts_; }
    PoleStyle pole() const { return pole_; }
    double sigma() const { return sigma_; }

    int cut_count() const { return static_cast<int>(cuts_.size()); }
    int tile_count() const { return 2 * cut_count() + 1; }
    double pole_latitude() const { return cuts_.back(); }
    /// Extension of a tile past each internal border, sigma*pi/2.
    double overlap_extension() const;

    std::vector<double> cuts_degrees() const;

    bool operator==(const TileScheme&) const = default;

private:
    std::vector<double> cuts_;
    PoleStyle pole_;
    double sigma_;
};

/// Returns an empty string when the cut vector satisfies the ordering
/// constraints, otherwise a description of the first violation.
std::string check_cut_ordering(std::span<const double> cuts, double sigma);

/// Areas on the unit sphere. The sphere itself has area 4*pi.
struct AreaReport {
    double hemisphere_area = 0.0;
    double total_area = 0.0;
    double ratio_to_sphere = 0.0;
};

/// Pole cap area under the minimum-density rule, with the cap extended by
/// sigma*pi/2 past its rim: coefficient pi (disc) or 4 (bounding square)
/// times the squared angular radius.
double pole_area(double pole_latitude, PoleStyle pole, double sigma = 0.0);

/// Hemisphere area of the ring/cap model. Evaluates the overlap form for
/// every sigma; with sigma == 0 it is the plain ring sum plus pole term.
double hemisphere_area(std::span<const double> cuts, PoleStyle pole, double sigma);

AreaReport area_report(const TileScheme& scheme);

/// Pole area when the cap is unrolled as a ring of its rim circumference.
/// Requires 0 < pole_latitude < pi/2; throws std::domain_error otherwise.
double yu_pole_area(double pole_latitude);

/// Area ratio of a scheme whose rings follow the plain ring model but whose
/// pole cap is unrolled (yu_pole_area) instead of flattened.
double yu_scheme_ratio(std::span<const double> cuts);

enum class BaselineProjection { Equirectangular, Cubic };

/// Area ratio of a whole-sphere baseline at matched minimum sample density:
/// equirectangular pi/2, tangent cube 6/pi.
double baseline_ratio(BaselineProjection projection);

/// Minimal area ratio for every cut count 1..max_cuts, via optimize_cuts.
std::vector<std::pair<int, double>> area_vs_tilecount(int max_cuts, PoleStyle pole, double sigma);

} // namespace omnitile
