#include "omnitile/optimizer.hpp"

#include "omnitile/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace omnitile {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;
constexpr double kInteriorGap = 1e-7;

struct Problem {
    int n;
    double k;   // pole coefficient: pi for the disc, 4 for the bounding square
    double ext; // sigma*pi/2
    double lo;  // open bound for theta_1
    double hi;  // open bound for theta_n
    PoleStyle pole;
    double sigma;
};

Problem make_problem(int n, PoleStyle pole, double sigma) {
    return {n, pole == PoleStyle::Circle ? kPi : 4.0, sigma * kHalfPi, sigma * kHalfPi,
            kHalfPi - sigma * kHalfPi, pole, sigma};
}

double ring_term(double inner, double outer, double ext) {
    return kTwoPi * std::cos(inner) * (outer - inner + 2.0 * ext);
}

double pole_term(const Problem& pb, double rim) {
    const double radius = kHalfPi - rim + pb.ext;
    return pb.k * radius * radius;
}

// Terms of the hemisphere area that depend on cut i.
double local_objective(const Problem& pb, const std::vector<double>& cuts, int i, double x) {
    double v = i == 0 ? kTwoPi * (x + pb.ext) : ring_term(cuts[static_cast<std::size_t>(i - 1)], x, pb.ext);
    v += i + 1 < pb.n ? ring_term(x, cuts[static_cast<std::size_t>(i + 1)], pb.ext) : pole_term(pb, x);
    return v;
}

// Global minimum over a lattice of ordered tuples. The objective is a chain
// (each term couples neighbouring cuts only), so the lattice search is an
// exact dynamic program over (cut index, lattice point).
std::vector<double> lattice_seed(const Problem& pb, double step) {
    const double span = pb.hi - pb.lo;
    step = std::min(step, span / (2.0 * (pb.n + 1)));
    std::vector<double> grid;
    for (double x = pb.lo + step; x < pb.hi - 0.5 * step; x += step) {
        grid.push_back(x);
    }
    const std::size_t m = grid.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<std::vector<double>> cost(static_cast<std::size_t>(pb.n), std::vector<double>(m, inf));
    std::vector<std::vector<std::size_t>> from(static_cast<std::size_t>(pb.n), std::vector<std::size_t>(m, 0));
    for (std::size_t j = 0; j < m; ++j) {
        cost[0][j] = kTwoPi * (grid[j] + pb.ext);
    }
    for (std::size_t i = 1; i < cost.size(); ++i) {
        for (std::size_t j = i; j < m; ++j) {
            for (std::size_t p = i - 1; p < j; ++p) {
                const double c = cost[i - 1][p] + ring_term(grid[p], grid[j], pb.ext);
                if (c < cost[i][j]) {
                    cost[i][j] = c;
                    from[i][j] = p;
                }
            }
        }
    }
    std::size_t best = 0;
    double best_cost = inf;
    for (std::size_t j = 0; j < m; ++j) {
        const double c = cost.back()[j] + pole_term(pb, grid[j]);
        if (c < best_cost) {
            best_cost = c;
            best = j;
        }
    }
    std::vector<double> cuts(static_cast<std::size_t>(pb.n));
    for (std::size_t i = cuts.size(); i-- > 0;) {
        cuts[i] = grid[best];
        best = from[i][best];
    }
    return cuts;
}

double golden_section(const Problem& pb, const std::vector<double>& cuts, int i, double a, double b, double tol) {
    double c = b - kGoldenRatio * (b - a);
    double d = a + kGoldenRatio * (b - a);
    double fc = local_objective(pb, cuts, i, c);
    double fd = local_objective(pb, cuts, i, d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGoldenRatio * (b - a);
            fc = local_objective(pb, cuts, i, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGoldenRatio * (b - a);
            fd = local_objective(pb, cuts, i, d);
        }
    }
    return 0.5 * (a + b);
}

bool strictly_feasible(const Problem& pb, const std::vector<double>& cuts) {
    if (!(cuts.front() > pb.lo) || !(cuts.back() < pb.hi)) {
        return false;
    }
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (!(cuts[i] > cuts[i - 1])) {
            return false;
        }
    }
    return true;
}

double min_gap(const Problem& pb, const std::vector<double>& cuts) {
    double gap = std::min(cuts.front() - pb.lo, pb.hi - cuts.back());
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        gap = std::min(gap, cuts[i] - cuts[i - 1]);
    }
    return gap;
}

// Newton direction from the tridiagonal Hessian of the hemisphere area.
// Returns false if the Hessian is not positive definite at `cuts`.
bool newton_direction(const Problem& pb, const std::vector<double>& cuts, const std::vector<double>& grad,
                      std::vector<double>& dir) {
    const std::size_t n = cuts.size();
    std::vector<double> diag(n, 0.0);
    std::vector<double> off(n > 0 ? n - 1 : 0, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double s = std::sin(cuts[j]);
        const double c = std::cos(cuts[j]);
        diag[j] = kTwoPi * (2.0 * s - c * (cuts[j + 1] - cuts[j] + 2.0 * pb.ext));
        off[j] = -kTwoPi * s;
    }
    diag[n - 1] += 2.0 * pb.k;

    // Thomas algorithm; a non-positive pivot means no usable Newton step.
    std::vector<double> cp(n, 0.0);
    std::vector<double> dp(n, 0.0);
    double pivot = diag[0];
    if (!(pivot > 0.0)) {
        return false;
    }
    cp[0] = n > 1 ? off[0] / pivot : 0.0;
    dp[0] = -grad[0] / pivot;
    for (std::size_t j = 1; j < n; ++j) {
        pivot = diag[j] - off[j - 1] * cp[j - 1];
        if (!(pivot > 0.0)) {
            return false;
        }
        cp[j] = j + 1 < n ? off[j] / pivot : 0.0;
        dp[j] = (-grad[j] - off[j - 1] * dp[j - 1]) / pivot;
    }
    dir.assign(n, 0.0);
    dir[n - 1] = dp[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) {
        dir[j] = dp[j] - cp[j] * dir[j + 1];
    }
    return true;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

} // namespace

double overlap_limit(int cut_count) { return 1.0 / (cut_count + 1); }

std::vector<double> hemisphere_area_gradient(std::span<const double> cuts, PoleStyle pole, double sigma) {
    const Problem pb = make_problem(static_cast<int>(cuts.size()), pole, sigma);
    const std::size_t n = cuts.size();
    std::vector<double> g(n, 0.0);
    g[0] = kTwoPi;
    for (std::size_t j = 1; j < n; ++j) {
        g[j] += kTwoPi * std::cos(cuts[j - 1]);
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        g[j] -= kTwoPi * (std::sin(cuts[j]) * (cuts[j + 1] - cuts[j] + 2.0 * pb.ext) + std::cos(cuts[j]));
    }
    g[n - 1] -= 2.0 * pb.k * (kHalfPi - cuts[n - 1] + pb.ext);
    return g;
}

std::vector<double> numeric_gradient(std::span<const double> cuts, PoleStyle pole, double sigma, double h) {
    std::vector<double> x(cuts.begin(), cuts.end());
    std::vector<double> g(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + h;
        const double up = hemisphere_area(x, pole, sigma);
        x[i] = orig - h;
        const double down = hemisphere_area(x, pole, sigma);
        x[i] = orig;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

OptimizationResult optimize_cuts(int cut_count, PoleStyle pole, double sigma, const OptimizerOptions& opts) {
    if (cut_count < 1) {
        throw InfeasibleProblem(fmt::format("cut count n={} must be >= 1", cut_count));
    }
    if (!(sigma >= 0.0) || !(sigma < overlap_limit(cut_count))) {
        throw InfeasibleProblem(fmt::format("overlap sigma={} outside [0, 1/(n+1)={}) for n={} cuts", sigma,
                                            overlap_limit(cut_count), cut_count));
    }
    const Problem pb = make_problem(cut_count, pole, sigma);
    std::vector<double> cuts = lattice_seed(pb, opts.seed_step);

    int iterations = 0;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        ++iterations;
        double moved = 0.0;
        for (int i = 0; i < pb.n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const double a = i == 0 ? pb.lo : cuts[idx - 1];
            const double b = i + 1 == pb.n ? pb.hi : cuts[idx + 1];
            const double margin = 1e-9 * (b - a);
            const double x = golden_section(pb, cuts, i, a + margin, b - margin, opts.move_tolerance);
            moved = std::max(moved, std::abs(x - cuts[idx]));
            cuts[idx] = x;
        }
        if (moved < opts.move_tolerance) {
            break;
        }
    }

    // Golden section resolves a flat minimum only to about sqrt(eps); finish
    // with safeguarded Newton steps on the analytic gradient.
    std::vector<double> dir;
    for (int step = 0; step < opts.max_newton_steps; ++step) {
        const auto grad = hemisphere_area_gradient(cuts, pole, sigma);
        if (max_abs(grad) < 1e-13 || !newton_direction(pb, cuts, grad, dir)) {
            break;
        }
        ++iterations;
        const double f0 = hemisphere_area(cuts, pole, sigma);
        double t = 1.0;
        std::vector<double> trial(cuts.size());
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
            for (std::size_t j = 0; j < cuts.size(); ++j) {
                trial[j] = cuts[j] + t * dir[j];
            }
            if (strictly_feasible(pb, trial) &&
                hemisphere_area(trial, pole, sigma) <= f0 + 1e-14 * std::abs(f0)) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break;
        }
        double moved = 0.0;
        for (std::size_t j = 0; j < cuts.size(); ++j) {
            moved = std::max(moved, std::abs(trial[j] - cuts[j]));
        }
        cuts = trial;
        if (moved < 1e-15) {
            break;
        }
    }

    const double fd = max_abs(numeric_gradient(cuts, pole, sigma, opts.fd_step));
    const bool interior = min_gap(pb, cuts) > kInteriorGap;

    TileScheme scheme(cuts, pole, sigma);
    OptimizationResult result{scheme, area_report(scheme), iterations, fd < opts.gradient_tolerance && interior, fd};
    return result;
}

OptimizationResult best_tilecount(double sigma, PoleStyle pole, int max_cuts, const OptimizerOptions& opts) {
    if (max_cuts < 1) {
        throw InfeasibleProblem(fmt::format("max cut count {} must be >= 1", max_cuts));
    }
    OptimizationResult best = optimize_cuts(1, pole, sigma, opts);
    for (int n = 2; n <= max_cuts; ++n) {
        OptimizationResult r = optimize_cuts(n, pole, sigma, opts);
        const double a = r.area.hemisphere_area;
        const double b = best.area.hemisphere_area;
        if (a < b - 1e-12 * b) {
            best = std::move(r);
        }
    }
    return best;
}

std::vector<std::pair<int, double>> area_vs_tilecount(int max_cuts, PoleStyle pole, double sigma) {
    if (max_cuts < 1) {
        throw InfeasibleProblem(fmt::format("max cut count {} must be >= 1", max_cuts));
    }
    std::vector<std::pair<int, double>> out;
    out.reserve(static_cast<std::size_t>(max_cuts));
    for (int n = 1; n <= max_cuts; ++n) {
        out.emplace_back(n, optimize_cuts(n, pole, sigma).area.ratio_to_sphere);
    }
    return out;
}

} // namespace omnitile
