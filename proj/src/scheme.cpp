#include "omnitile/scheme.hpp"

#include "omnitile/error.hpp"
#include "omnitile/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace omnitile {

std::string_view to_string(PoleStyle pole) { return pole == PoleStyle::Circle ? "circle" : "square"; }

PoleStyle parse_pole_style(std::string_view text) {
    if (text == "circle") {
        return PoleStyle::Circle;
    }
    if (text == "square") {
        return PoleStyle::Square;
    }
    throw std::invalid_argument(fmt::format("unknown pole style '{}' (expected circle|square)", text));
}

std::string check_cut_ordering(std::span<const double> cuts, double sigma) {
    if (cuts.empty()) {
        return "scheme needs at least one cut latitude";
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        return fmt::format("overlap fraction sigma={} must be finite and >= 0", sigma);
    }
    const double ext = sigma * kHalfPi;
    if (!(cuts.front() > ext)) {
        return fmt::format("theta_1={:.6f} deg must exceed sigma*pi/2={:.6f} deg", rad2deg(cuts.front()),
                           rad2deg(ext));
    }
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (!(cuts[i] > cuts[i - 1])) {
            return fmt::format("theta_{}={:.6f} deg must exceed theta_{}={:.6f} deg", i + 1, rad2deg(cuts[i]), i,
                               rad2deg(cuts[i - 1]));
        }
    }
    if (!(cuts.back() < kHalfPi - ext)) {
        return fmt::format("theta_{}={:.6f} deg must be below pi/2 - sigma*pi/2={:.6f} deg", cuts.size(),
                           rad2deg(cuts.back()), rad2deg(kHalfPi - ext));
    }
    return {};
}

TileScheme::TileScheme(std::vector<double> cuts, PoleStyle pole, double sigma)
    : cuts_(std::move(cuts)), pole_(pole), sigma_(sigma) {
    if (auto why = check_cut_ordering(cuts_, sigma_); !why.empty()) {
        throw InvalidScheme("invalid tile scheme: " + why);
    }
}

TileScheme TileScheme::from_degrees(const std::vector<double>& cuts_deg, PoleStyle pole, double sigma) {
    std::vector<double> rad;
    rad.reserve(cuts_deg.size());
    for (double d : cuts_deg) {
        rad.push_back(deg2rad(d));
    }
    return TileScheme(std::move(rad), pole, sigma);
}

double TileScheme::overlap_extension() const { return sigma_ * kHalfPi; }

std::vector<double> TileScheme::cuts_degrees() const {
    std::vector<double> out;
    out.reserve(cuts_.size());
    for (double c : cuts_) {
        out.push_back(rad2deg(c));
    }
    return out;
}

double pole_area(double pole_latitude, PoleStyle pole, double sigma) {
    const double radius = kHalfPi - pole_latitude + sigma * kHalfPi;
    const double coeff = pole == PoleStyle::Circle ? kPi : 4.0;
    return coeff * radius * radius;
}

double hemisphere_area(std::span<const double> cuts, PoleStyle pole, double sigma) {
    // Equator half-band, then each ring widened by one full overlap band.
    double area = kTwoPi * (cuts[0] + sigma * kHalfPi);
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        area += kTwoPi * std::cos(cuts[i - 1]) * (cuts[i] - cuts[i - 1] + sigma * kPi);
    }
    return area + pole_area(cuts.back(), pole, sigma);
}

AreaReport area_report(const TileScheme& scheme) {
    AreaReport r;
    r.hemisphere_area = hemisphere_area(scheme.cuts(), scheme.pole(), scheme.sigma());
    r.total_area = 2.0 * r.hemisphere_area;
    r.ratio_to_sphere = r.total_area / (4.0 * kPi);
    return r;
}

double yu_pole_area(double pole_latitude) {
    if (!(pole_latitude > 0.0 && pole_latitude < kHalfPi)) {
        throw std::domain_error(fmt::format("pole latitude {} rad outside (0, pi/2)", pole_latitude));
    }
    return kTwoPi * (kHalfPi - pole_latitude) * std::cos(pole_latitude);
}

double yu_scheme_ratio(std::span<const double> cuts) {
    if (auto why = check_cut_ordering(cuts, 0.0); !why.empty()) {
        throw InvalidScheme("invalid tile scheme: " + why);
    }
    double area = kTwoPi * cuts[0];
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        area += kTwoPi * std::cos(cuts[i - 1]) * (cuts[i] - cuts[i - 1]);
    }
    area += yu_pole_area(cuts.back());
    return area / kTwoPi;
}

double baseline_ratio(BaselineProjection projection) {
    switch (projection) {
    case BaselineProjection::Equirectangular:
        // (2*pi) x pi raster over 4*pi
        return kHalfPi;
    case BaselineProjection::Cubic:
        // six 2x2 tangent faces over 4*pi
        return 6.0 / kPi;
    }
    return 0.0;
}

} // namespace omnitile
