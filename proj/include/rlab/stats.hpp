#ifndef RLAB_STATS_HPP
#define RLAB_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "rlab/rng.hpp"

namespace rlab {

// Finite-scale estimates of the scaling exponents: every liminf/limsup
// quantity is reported as a regression slope over an explicit window,
// with envelope variants standing in for the inf/sup side.

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
    std::size_t window_lo = 0; // [lo, hi) index range used
    std::size_t window_hi = 0;
    std::size_t n_points = 0;
    std::size_t censored_count = 0;
};

// OLS of y against x over the index window [lo, hi). Needs >= 2 points;
// callers enforce their own minima.
ScalingFit linear_fit(std::span<const double> x, std::span<const double> y,
                      std::size_t lo, std::size_t hi);

// OLS on (log x, log y); usage_error listing offending indices if any
// coordinate in the window is nonpositive. Needs >= 4 points in window.
ScalingFit loglog_fit(std::span<const double> x, std::span<const double> y,
                      std::size_t lo, std::size_t hi);

// Envelope protocol shared by the recurrence and dimension fits: `lower` is
// least squares through the sliding-window-of-3 pointwise minima of y,
// `upper` through the maxima, `least_squares` through y itself. Inputs are
// already in log space.
struct EnvelopeFit {
    ScalingFit lower;
    ScalingFit upper;
    ScalingFit least_squares;
    bool envelopes_agree = false; // |slope_l - slope_u| <= max stderr
};

EnvelopeFit envelope_fits(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);                  // by value: scratch copy
double percentile(std::vector<double> values, double q);    // q in [0,1], linear interpolation

struct BootstrapInterval {
    double lo = 0.0;
    double hi = 0.0;
    double point = 0.0; // sample median
};

// Percentile bootstrap for the median; >= 30 values and B >= 200 required.
BootstrapInterval bootstrap_median_ci(std::span<const double> values, std::size_t b,
                                      double level, u64 seed);

// Compensated accumulation so that batched parallel reductions reproduce
// the sequential sum at emitted precision.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

} // namespace rlab

#endif
