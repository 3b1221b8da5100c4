#include "rlab/systems.hpp"

#include <cmath>

namespace rlab {

namespace {

AnalyticInvariants toral_invariants(const IntMatrix& a) {
    AnalyticInvariants inv;
    inv.k = static_cast<std::uint32_t>(a.k);
    const auto rep = validate_toral_matrix(a);
    double h = 0.0, lmax = 0.0;
    for (double mod : rep.eigenvalue_moduli) {
        const double l = std::log(mod);
        if (l > 0.0) h += l;
        if (l > lmax) lmax = l;
    }
    inv.entropy = h;
    inv.lyapunov_max = lmax;
    return inv;
}

} // namespace

SystemSpec make_toral(const IntMatrix& a, const std::string& name) {
    if (a.k > static_cast<int>(kMaxDim)) throw usage_error("make_toral: dimension exceeds " + std::to_string(kMaxDim));
    const long long det = determinant(a);
    if (det != 1 && det != -1) throw usage_error("make_toral: |det A| must be 1");
    IntMatrix inv = adjugate(a);
    if (det == -1)
        for (auto& v : inv.a) v = -v;
    SystemSpec sys;
    sys.map = ToralAutomorphism{a, std::move(inv)};
    sys.invariants = toral_invariants(a);
    sys.name = name;
    return sys;
}

SystemSpec make_cat_map() {
    return make_toral(IntMatrix::from_rows({{2, 1}, {1, 1}}), "cat");
}

SystemSpec make_expanding(std::uint32_t m, u64 stream_seed, DigitMode mode) {
    if (m < 2) throw usage_error("make_expanding: m must be >= 2");
    ExpandingCircleMap map;
    map.m = m;
    map.stream_seed = stream_seed;
    map.mode = mode;
    u128 pw = 1;
    int k = 0;
    const u128 cap = u128(1) << 64;
    while (pw <= cap / m) {
        pw *= m;
        ++k;
    }
    map.window_digits = k;
    map.m_pow_k = pw;
    map.m_pow_k_minus_1 = pw / m;

    SystemSpec sys;
    sys.map = map;
    sys.invariants.k = 1;
    sys.invariants.entropy = std::log(static_cast<double>(m));
    sys.invariants.lyapunov_max = sys.invariants.entropy;
    sys.name = (m == 2) ? "doubling" : "expanding";
    return sys;
}

SystemSpec make_doubling(u64 stream_seed, DigitMode mode) {
    return make_expanding(2, stream_seed, mode);
}

SystemSpec make_rotation(u64 alpha) {
    if (alpha == 0) throw usage_error("make_rotation: alpha must be nonzero");
    SystemSpec sys;
    sys.map = CircleRotation{alpha};
    sys.invariants.k = 1;
    sys.invariants.entropy = 0.0;
    sys.invariants.lyapunov_max = 0.0;
    sys.name = "rotation";
    return sys;
}

u64 expanding_next_digit(const ExpandingCircleMap& map, u64 window) {
    if (map.mode == DigitMode::zero) return 0;
    const u64 h = splitmix64(window ^ splitmix64(map.stream_seed));
    const u64 rem = (0 - u64(map.m)) % map.m; // 2^64 mod m
    for (u64 j = 0;; ++j) {
        const u64 v = splitmix64(h + j * 0x9E3779B97F4A7C15ULL);
        if (v >= rem) return v % map.m;
    }
}

namespace {

void step_toral(const ToralAutomorphism& t, TorusPoint& x) {
    const int k = t.a.k;
    std::array<u64, kMaxDim> out{};
    for (int i = 0; i < k; ++i) {
        u64 acc = 0;
        for (int j = 0; j < k; ++j)
            acc += static_cast<u64>(t.a.at(i, j)) * x.c[static_cast<std::uint32_t>(j)];
        out[static_cast<std::size_t>(i)] = acc;
    }
    x.c = out;
}

void step_toral_inverse(const ToralAutomorphism& t, TorusPoint& x) {
    const int k = t.a_inv.k;
    std::array<u64, kMaxDim> out{};
    for (int i = 0; i < k; ++i) {
        u64 acc = 0;
        for (int j = 0; j < k; ++j)
            acc += static_cast<u64>(t.a_inv.at(i, j)) * x.c[static_cast<std::uint32_t>(j)];
        out[static_cast<std::size_t>(i)] = acc;
    }
    x.c = out;
}

void step_expanding(const ExpandingCircleMap& e, TorusPoint& x) {
    const u64 u = x.c[0];
    // recover the K-digit integer D from the 64-bit window: the half-open
    // interval [u*m^K/2^64, (u+1)*m^K/2^64) contains exactly one integer
    const u128 num = u128(u) * e.m_pow_k;
    u128 d = (num + ((u128(1) << 64) - 1)) >> 64; // ceil(u*m^K / 2^64)
    const u64 digit = expanding_next_digit(e, u);
    d = (d % e.m_pow_k_minus_1) * e.m + digit;
    x.c[0] = static_cast<u64>((d << 64) / e.m_pow_k);
}

} // namespace

void step_inplace(const SystemSpec& sys, TorusPoint& x) {
    if (x.k != sys.dim()) throw usage_error("step: point dimension does not match system");
    if (const auto* t = std::get_if<ToralAutomorphism>(&sys.map)) {
        step_toral(*t, x);
    } else if (const auto* e = std::get_if<ExpandingCircleMap>(&sys.map)) {
        step_expanding(*e, x);
    } else {
        x.c[0] += std::get<CircleRotation>(sys.map).alpha;
    }
}

TorusPoint step(const SystemSpec& sys, const TorusPoint& x) {
    TorusPoint y = x;
    step_inplace(sys, y);
    return y;
}

TorusPoint inverse_step(const SystemSpec& sys, const TorusPoint& x) {
    if (x.k != sys.dim()) throw usage_error("inverse_step: point dimension does not match system");
    TorusPoint y = x;
    if (const auto* t = std::get_if<ToralAutomorphism>(&sys.map)) {
        step_toral_inverse(*t, y);
    } else if (std::holds_alternative<CircleRotation>(sys.map)) {
        y.c[0] -= std::get<CircleRotation>(sys.map).alpha;
    } else {
        throw usage_error("inverse_step: expanding maps are not invertible");
    }
    return y;
}

Orbit iterate_orbit(const SystemSpec& sys, const TorusPoint& x0, std::size_t n) {
    if (n + 1 > kMaxOrbitPoints)
        throw capacity_error("iterate_orbit: orbit of " + std::to_string(n + 1) + " points exceeds cap");
    Orbit orbit;
    orbit.base = x0;
    orbit.points.reserve(n + 1);
    orbit.points.push_back(x0);
    TorusPoint x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        step_inplace(sys, x);
        orbit.points.push_back(x);
    }
    return orbit;
}

AnalyticInvariants analytic_invariants(const SystemSpec& sys) { return sys.invariants; }

} // namespace rlab
