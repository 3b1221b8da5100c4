#ifndef RLAB_RECURRENCE_HPP
#define RLAB_RECURRENCE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rlab/measure.hpp"
#include "rlab/systems.hpp"

namespace rlab {

// First return times tau_r(x) = min{ n >= 1 : d(f^n x, x) < r } over a
// geometric radius grid, computed in one exact forward pass; slopes of
// log tau against log(1/r) estimate the recurrence rate.

struct RadiusGrid {
    std::vector<double> radii;    // strictly decreasing, in (0, 1/2)
    std::vector<u64> thresholds;  // ceil(r * 2^64), so d < r is exact

    static RadiusGrid exponential(int m_min, int m_max);                // e^-m
    static RadiusGrid geometric(double r0, double ratio, int count);    // r0 * ratio^i

    std::size_t size() const { return radii.size(); }
};

constexpr u64 kCensoredReturn = 0;

struct ReturnCurve {
    TorusPoint base;
    std::vector<u64> tau;       // per radius; kCensoredReturn when censored
    std::vector<bool> censored;
    u64 n_max = 0;

    std::size_t uncensored_count() const;
};

ReturnCurve return_curve(const SystemSpec& sys, const TorusPoint& x,
                         const RadiusGrid& grid, u64 n_max);

// Envelope fits of log tau against log(1/r); censored radii are excluded,
// >= 4 uncensored points required.
EnvelopeFit recurrence_rate_fit(const RadiusGrid& grid, const ReturnCurve& curve);

struct LongFlyReport {
    TorusPoint x;
    double r = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    u64 n_lo = 0; // ceil(r^-delta)
    // floor(mu(B(x,3r))^(-1+eps)): the covering ball 3r is what the mixing
    // bound controls at a fixed scale; the r-ball window holds only in the
    // limit after adjusting delta and epsilon
    u64 n_hi = 0;
    bool vacuous = false; // window empty: pass by default, flagged
    bool pass = false;
    u64 first_violation = 0; // violating n if !pass; re-checkable exactly
};

// Scans n in [n_lo, n_hi] for a return d(f^n x, x) < r; a clean scan is a
// pass. The window must fit the iteration budget.
LongFlyReport long_fly_check(const SystemSpec& sys, const TorusPoint& x, double r,
                             double delta, double epsilon, const MeasureModel& measure,
                             u64 n_budget = 200000000ULL);

} // namespace rlab

#endif
