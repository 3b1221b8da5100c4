#include "rlab/recurrence.hpp"

#include <cmath>
#include <string>

#include "rlab/errors.hpp"

namespace rlab {

namespace {

void check_grid(const std::vector<double>& radii) {
    if (radii.size() < 2) throw usage_error("RadiusGrid: need at least 2 radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !(radii[i] < 0.5))
            throw usage_error("RadiusGrid: radii must lie in (0, 1/2)");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw usage_error("RadiusGrid: radii must be strictly decreasing");
    }
}

} // namespace

RadiusGrid RadiusGrid::exponential(int m_min, int m_max) {
    if (m_min < 1 || m_max < m_min) throw usage_error("RadiusGrid: need 1 <= m_min <= m_max");
    RadiusGrid g;
    for (int m = m_min; m <= m_max; ++m) g.radii.push_back(std::exp(-static_cast<double>(m)));
    check_grid(g.radii);
    for (double r : g.radii) g.thresholds.push_back(radius_threshold(r));
    return g;
}

RadiusGrid RadiusGrid::geometric(double r0, double ratio, int count) {
    if (!(ratio > 0.0) || !(ratio < 1.0)) throw usage_error("RadiusGrid: ratio must be in (0,1)");
    if (count < 2) throw usage_error("RadiusGrid: need at least 2 radii");
    RadiusGrid g;
    double r = r0;
    for (int i = 0; i < count; ++i) {
        g.radii.push_back(r);
        r *= ratio;
    }
    check_grid(g.radii);
    for (double rr : g.radii) g.thresholds.push_back(radius_threshold(rr));
    return g;
}

std::size_t ReturnCurve::uncensored_count() const {
    std::size_t n = 0;
    for (bool c : censored)
        if (!c) ++n;
    return n;
}

ReturnCurve return_curve(const SystemSpec& sys, const TorusPoint& x,
                         const RadiusGrid& grid, u64 n_max) {
    if (n_max < 1) throw usage_error("return_curve: n_max must be >= 1");
    ReturnCurve curve;
    curve.base = x;
    curve.n_max = n_max;
    curve.tau.assign(grid.size(), kCensoredReturn);
    curve.censored.assign(grid.size(), true);

    // radii decrease, so at any step the still-unset radii form a suffix and
    // a distance below a small threshold is below all larger ones
    std::size_t next_unset = 0;
    TorusPoint y = x;
    for (u64 n = 1; n <= n_max && next_unset < grid.size(); ++n) {
        step_inplace(sys, y);
        const u64 d = dist_fixed(y, x);
        while (next_unset < grid.size() && d < grid.thresholds[next_unset]) {
            curve.tau[next_unset] = n;
            curve.censored[next_unset] = false;
            ++next_unset;
        }
    }
    return curve;
}

EnvelopeFit recurrence_rate_fit(const RadiusGrid& grid, const ReturnCurve& curve) {
    std::vector<double> lx, ly;
    std::size_t censored = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (curve.censored[i]) {
            ++censored;
            continue;
        }
        lx.push_back(-std::log(grid.radii[i])); // log(1/r)
        ly.push_back(std::log(static_cast<double>(curve.tau[i])));
    }
    if (lx.size() < 4) {
        std::string profile = std::to_string(censored) + " of " +
                              std::to_string(grid.size()) + " radii censored at n_max=" +
                              std::to_string(curve.n_max);
        throw insufficient_data_error("recurrence_rate_fit: " + profile, lx.size(), 4);
    }
    EnvelopeFit fit = envelope_fits(lx, ly);
    fit.lower.censored_count = censored;
    fit.upper.censored_count = censored;
    fit.least_squares.censored_count = censored;
    return fit;
}

LongFlyReport long_fly_check(const SystemSpec& sys, const TorusPoint& x, double r,
                             double delta, double epsilon, const MeasureModel& measure,
                             u64 n_budget) {
    if (!(delta > 0.0)) throw usage_error("long_fly_check: delta must be > 0");
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw usage_error("long_fly_check: epsilon in (0,1)");

    LongFlyReport rep;
    rep.x = x;
    rep.r = r;
    rep.delta = delta;
    rep.epsilon = epsilon;

    const double mu = measure.radial_cdf(x, r, 3.0); // mu(B(x, 3r)), saturating
    if (!(mu > 0.0)) throw usage_error("long_fly_check: ball has zero measure");
    rep.n_lo = static_cast<u64>(std::ceil(std::pow(r, -delta)));
    if (rep.n_lo < 1) rep.n_lo = 1;
    const double hi = std::pow(mu, -1.0 + epsilon);
    rep.n_hi = static_cast<u64>(std::floor(hi));

    if (rep.n_hi < rep.n_lo) {
        rep.vacuous = true;
        rep.pass = true;
        return rep;
    }

    const u64 threshold = radius_threshold(r);
    const u64 scan_to = std::min(rep.n_hi, n_budget);
    TorusPoint y = x;
    for (u64 n = 1; n <= scan_to; ++n) {
        step_inplace(sys, y);
        if (n < rep.n_lo) continue;
        if (dist_fixed(y, x) < threshold) {
            // a violation inside the budget settles the verdict even when
            // the full window does not fit
            rep.pass = false;
            rep.first_violation = n;
            return rep;
        }
    }
    if (rep.n_hi > n_budget)
        throw capacity_error("long_fly_check: window [" + std::to_string(rep.n_lo) + ", " +
                             std::to_string(rep.n_hi) + "] exceeds budget " +
                             std::to_string(n_budget) + "; partial verdict: no violation up to " +
                             std::to_string(scan_to));
    rep.pass = true;
    return rep;
}

} // namespace rlab
