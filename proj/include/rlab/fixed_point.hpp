#ifndef RLAB_FIXED_POINT_HPP
#define RLAB_FIXED_POINT_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/rng.hpp"

namespace rlab {

// Points of the k-torus stored as k unsigned 64-bit fractions: coordinate i
// represents coords[i] / 2^64 in [0,1). Group operations (wrapping add,
// integer matrix multiply) are exact; ball membership d(x,y) < r reduces to
// an integer comparison once r is converted to a threshold.

constexpr std::uint32_t kMaxDim = 8;

struct TorusPoint {
    std::array<u64, kMaxDim> c{};
    std::uint32_t k = 0;

    TorusPoint() = default;

    explicit TorusPoint(std::uint32_t dim) : k(dim) {
        if (dim < 1 || dim > kMaxDim) throw usage_error("TorusPoint: dimension out of range");
    }

    u64& operator[](std::uint32_t i) { return c[i]; }
    u64 operator[](std::uint32_t i) const { return c[i]; }

    bool operator==(const TorusPoint& o) const {
        if (k != o.k) return false;
        for (std::uint32_t i = 0; i < k; ++i)
            if (c[i] != o.c[i]) return false;
        return true;
    }
};

inline double fixed_to_real(u64 u) { return static_cast<double>(u) * 0x1.0p-64; }

// floor(frac(x) * 2^64); round-trip error <= 2^-64 per coordinate
inline u64 real_to_fixed(double x) {
    double f = x - std::floor(x);
    long double v = static_cast<long double>(f) * 0x1.0p64L;
    if (v >= 0x1.0p64L) return 0; // frac rounded up to 1.0
    return static_cast<u64>(v);
}

// exact when den is a power of two; otherwise nearest lattice point below
inline u64 fraction_to_fixed(u64 num, u64 den) {
    if (den == 0 || num >= den) throw usage_error("fraction_to_fixed: need num < den, den > 0");
    return static_cast<u64>((static_cast<u128>(num) << 64) / den);
}

inline TorusPoint point_from_reals(const std::vector<double>& xs) {
    TorusPoint p(static_cast<std::uint32_t>(xs.size()));
    for (std::uint32_t i = 0; i < p.k; ++i) p[i] = real_to_fixed(xs[i]);
    return p;
}

inline TorusPoint random_point(Rng& rng, std::uint32_t k) {
    TorusPoint p(k);
    for (std::uint32_t i = 0; i < k; ++i) p[i] = rng.next_u64();
    return p;
}

// d(x,y) < r  <=>  dist_fixed(x,y) < radius_threshold(r).
// ceil(r * 2^64) is exact: scaling a double by a power of two is lossless.
inline u64 radius_threshold(double r) {
    if (!(r > 0.0) || r > 0.5) throw usage_error("radius_threshold: r must be in (0, 1/2]");
    return static_cast<u64>(std::ceil(r * 0x1.0p64));
}

// circle distance |u - v| with wraparound, in lattice units (result <= 2^63)
inline u64 wrap_distance(u64 a, u64 b) {
    u64 d = a - b;
    u64 e = 0 - d;
    return d < e ? d : e;
}

// max-metric distance in lattice units
inline u64 dist_fixed(const TorusPoint& x, const TorusPoint& y) {
    if (x.k != y.k) throw usage_error("dist_fixed: dimension mismatch");
    u64 m = 0;
    for (std::uint32_t i = 0; i < x.k; ++i) {
        u64 d = wrap_distance(x[i], y[i]);
        if (d > m) m = d;
    }
    return m;
}

inline double torus_distance(const TorusPoint& x, const TorusPoint& y) {
    return fixed_to_real(dist_fixed(x, y));
}

inline TorusPoint translate(const TorusPoint& x, const TorusPoint& t) {
    if (x.k != t.k) throw usage_error("translate: dimension mismatch");
    TorusPoint r(x.k);
    for (std::uint32_t i = 0; i < x.k; ++i) r[i] = x[i] + t[i];
    return r;
}

// uniform point in the open max-metric ball B(x, r); offsets stay strictly
// inside the threshold so membership is exact
inline TorusPoint random_point_in_ball(Rng& rng, const TorusPoint& x, double r) {
    const u64 t = radius_threshold(r);
    TorusPoint p(x.k);
    for (std::uint32_t i = 0; i < x.k; ++i) {
        const u64 span = 2 * (t - 1) + 1;   // offsets in [-(t-1), t-1]
        const u64 off = rng.below(span);
        p[i] = x[i] + off - (t - 1);
    }
    return p;
}

} // namespace rlab

#endif
