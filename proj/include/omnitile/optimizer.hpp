#pragma once

#include "omnitile/geometry.hpp"
#include "omnitile/scheme.hpp"

#include <vector>

namespace omnitile {

struct OptimizerOptions {
    /// Lattice spacing of the seeding search, radians. Shrunk automatically
    /// when the feasible interval cannot hold n cuts at this spacing.
    double seed_step = deg2rad(1.0);
    /// Coordinate descent stops once no cut moves more than this in a sweep.
    double move_tolerance = 1e-10;
    int max_sweeps = 500;
    int max_newton_steps = 100;
    /// Bound on the central-difference gradient for `converged`.
    double gradient_tolerance = 1e-8;
    double fd_step = 1e-6;
};

struct OptimizationResult {
    TileScheme scheme;
    AreaReport area;
    int iterations = 0;
    bool converged = false;
    /// Largest |dS/dtheta_i| by central differences at the returned cuts.
    double max_gradient = 0.0;
};

/// Largest overlap fraction (exclusive) accepted for n cuts: 1/(n+1).
double overlap_limit(int cut_count);

/// Minimizes hemisphere area over n ordered cut latitudes for the given pole
/// style and overlap. Throws InfeasibleProblem if n < 1 or sigma is outside
/// [0, overlap_limit(n)). A result whose first-order check fails, or whose
/// cuts press against an ordering bound, comes back with converged == false.
OptimizationResult optimize_cuts(int cut_count, PoleStyle pole, double sigma, const OptimizerOptions& opts = {});

/// Runs optimize_cuts for n = 1..max_cuts and returns the smallest-area
/// result; ties go to the smaller n.
OptimizationResult best_tilecount(double sigma, PoleStyle pole, int max_cuts, const OptimizerOptions& opts = {});

/// Analytic gradient of hemisphere_area with respect to each cut.
std::vector<double> hemisphere_area_gradient(std::span<const double> cuts, PoleStyle pole, double sigma);

/// Central-difference gradient of hemisphere_area with step `h`.
std::vector<double> numeric_gradient(std::span<const double> cuts, PoleStyle pole, double sigma, double h);

} // namespace omnitile
