#include "rlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlab/errors.hpp"

namespace rlab {

ScalingFit linear_fit(std::span<const double> x, std::span<const double> y,
                      std::size_t lo, std::size_t hi) {
    if (hi > x.size() || hi > y.size() || lo >= hi)
        throw usage_error("linear_fit: bad window");
    const std::size_t n = hi - lo;
    if (n < 2) throw usage_error("linear_fit: need at least 2 points");

    double sx = 0.0, sy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / double(n);
    const double my = sy / double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw usage_error("linear_fit: degenerate abscissa (all x equal)");

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.n_points = n;

    double ss_res = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r_squared = (syy == 0.0) ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
    fit.stderr_slope = (n > 2) ? std::sqrt(ss_res / double(n - 2) / sxx) : 0.0;
    return fit;
}

ScalingFit loglog_fit(std::span<const double> x, std::span<const double> y,
                      std::size_t lo, std::size_t hi) {
    if (hi > x.size() || hi > y.size() || lo >= hi)
        throw usage_error("loglog_fit: bad window");
    if (hi - lo < 4) throw usage_error("loglog_fit: need at least 4 points in window");

    std::string bad;
    for (std::size_t i = lo; i < hi; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            if (!bad.empty()) bad += ", ";
            bad += std::to_string(i);
        }
    }
    if (!bad.empty()) throw usage_error("loglog_fit: nonpositive data at indices " + bad);

    std::vector<double> lx(hi - lo), ly(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        lx[i - lo] = std::log(x[i]);
        ly[i - lo] = std::log(y[i]);
    }
    ScalingFit fit = linear_fit(lx, ly, 0, lx.size());
    fit.window_lo = lo;
    fit.window_hi = hi;
    return fit;
}

EnvelopeFit envelope_fits(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw usage_error("envelope_fits: length mismatch");
    if (n < 4) throw usage_error("envelopes: need at least 4 points");

    // full centered windows only: smoothing a clean power law then shifts
    // the line without bending it, so exact data keeps its exact slope
    std::vector<double> xs(n - 2), ymin(n - 2), ymax(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double lo = y[i - 1], hi = y[i - 1];
        for (std::size_t j = i; j <= i + 1; ++j) {
            lo = std::min(lo, y[j]);
            hi = std::max(hi, y[j]);
        }
        xs[i - 1] = x[i];
        ymin[i - 1] = lo;
        ymax[i - 1] = hi;
    }

    EnvelopeFit out;
    out.lower = linear_fit(xs, ymin, 0, xs.size());
    out.upper = linear_fit(xs, ymax, 0, xs.size());
    out.least_squares = linear_fit(x, y, 0, n);
    const double tol = std::max(out.lower.stderr_slope, out.upper.stderr_slope);
    out.envelopes_agree = std::abs(out.lower.slope - out.upper.slope) <= tol;
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw usage_error("median: empty input");
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (n % 2 == 1) return hi;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return 0.5 * (values[mid - 1] + hi);
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw usage_error("percentile: empty input");
    if (q < 0.0 || q > 1.0) throw usage_error("percentile: q outside [0,1]");
    std::sort(values.begin(), values.end());
    const double pos = q * double(values.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) return values.back();
    const double frac = pos - double(i);
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

BootstrapInterval bootstrap_median_ci(std::span<const double> values, std::size_t b,
                                      double level, u64 seed) {
    if (values.size() < 30)
        throw insufficient_data_error("bootstrap_median_ci: need >= 30 values", values.size(), 30);
    if (b < 200) throw usage_error("bootstrap_median_ci: need >= 200 resamples");
    if (!(level > 0.0) || !(level < 1.0)) throw usage_error("bootstrap_median_ci: bad level");

    Rng rng(seed);
    const std::size_t n = values.size();
    std::vector<double> medians(b);
    std::vector<double> scratch(n);
    for (std::size_t rep = 0; rep < b; ++rep) {
        for (std::size_t i = 0; i < n; ++i) scratch[i] = values[rng.below(n)];
        medians[rep] = median(scratch);
    }
    BootstrapInterval ci;
    const double tail = (1.0 - level) / 2.0;
    ci.lo = percentile(medians, tail);
    ci.hi = percentile(medians, 1.0 - tail);
    ci.point = median(std::vector<double>(values.begin(), values.end()));
    return ci;
}

} // namespace rlab
