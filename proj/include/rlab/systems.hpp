#ifndef RLAB_SYSTEMS_HPP
#define RLAB_SYSTEMS_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rlab/fixed_point.hpp"
#include "rlab/toral.hpp"

namespace rlab {

// The map zoo. All members preserve Lebesgue measure on T^k and iterate
// exactly on the 2^-64 lattice:
//   - toral automorphisms: the lattice is A-invariant, so wrapping integer
//     matrix multiply is the exact map;
//   - rotations: wrapping add;
//   - expanding maps x -> m*x mod 1: one base-m digit is consumed per step,
//     so the orbit is realized as a sliding window of the leading K digits
//     (m^K <= 2^64) of a point whose digit tail is generated on demand by a
//     keyed hash of the current window. step() stays a pure function of
//     (system, point) and restarting from any orbit point reproduces the
//     remaining orbit bit-exactly.

enum class DigitMode { random, zero };

struct ToralAutomorphism {
    IntMatrix a;
    IntMatrix a_inv; // adjugate / det, exact since |det| = 1
};

struct ExpandingCircleMap {
    std::uint32_t m = 2;
    u64 stream_seed = 0;
    DigitMode mode = DigitMode::random;
    // derived
    int window_digits = 64; // K = max { j : m^j <= 2^64 }
    u128 m_pow_k = 0;
    u128 m_pow_k_minus_1 = 0;
};

struct CircleRotation {
    u64 alpha = 0; // rotation angle as 64-bit fraction, nonzero
};

struct AnalyticInvariants {
    std::uint32_t k = 1;
    double entropy = 0.0;      // nats
    double lyapunov_max = 0.0; // nats
    std::string measure = "lebesgue";
};

struct SystemSpec {
    std::variant<ToralAutomorphism, ExpandingCircleMap, CircleRotation> map;
    AnalyticInvariants invariants;
    std::string name;

    std::uint32_t dim() const { return invariants.k; }
    bool invertible() const { return !std::holds_alternative<ExpandingCircleMap>(map); }
};

// round((sqrt(5)-1)/2 * 2^64), the default rotation angle
constexpr u64 kGoldenAlpha = 0x9E3779B97F4A7C16ULL;

SystemSpec make_toral(const IntMatrix& a, const std::string& name = "toral");
SystemSpec make_cat_map();
SystemSpec make_expanding(std::uint32_t m, u64 stream_seed, DigitMode mode = DigitMode::random);
SystemSpec make_doubling(u64 stream_seed, DigitMode mode = DigitMode::random);
SystemSpec make_rotation(u64 alpha);

TorusPoint step(const SystemSpec& sys, const TorusPoint& x);
void step_inplace(const SystemSpec& sys, TorusPoint& x);
TorusPoint inverse_step(const SystemSpec& sys, const TorusPoint& x);

struct Orbit {
    TorusPoint base;
    std::vector<TorusPoint> points; // x, f x, ..., f^N x
};

constexpr std::size_t kMaxOrbitPoints = std::size_t(1) << 22;

Orbit iterate_orbit(const SystemSpec& sys, const TorusPoint& x0, std::size_t n);

AnalyticInvariants analytic_invariants(const SystemSpec& sys);

// next base-m digit appended by an expanding map at window state `window`
u64 expanding_next_digit(const ExpandingCircleMap& map, u64 window);

} // namespace rlab

#endif
