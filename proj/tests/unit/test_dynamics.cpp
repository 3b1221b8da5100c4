#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rlab/fixed_point.hpp"
#include "rlab/systems.hpp"

using namespace rlab;

namespace {

// Independent oracle: distance as the minimum over all 3^k integer
// translates of the max-coordinate difference, in long double.
long double distance_by_translates(const TorusPoint& x, const TorusPoint& y) {
    const std::uint32_t k = x.k;
    std::vector<int> t(k, -1);
    long double best = 1e30L;
    for (;;) {
        long double m = 0.0L;
        for (std::uint32_t i = 0; i < k; ++i) {
            const long double xi = static_cast<long double>(x[i]) * 0x1.0p-64L;
            const long double yi = static_cast<long double>(y[i]) * 0x1.0p-64L + t[i];
            m = std::max(m, std::fabs(xi - yi));
        }
        best = std::min(best, m);
        std::uint32_t j = 0;
        for (; j < k; ++j) {
            if (t[j] < 1) {
                ++t[j];
                break;
            }
            t[j] = -1;
        }
        if (j == k) break;
    }
    return best;
}

} // namespace

TEST_CASE("distance identity and wraparound") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto x = random_point(rng, 1 + i % 4);
        CHECK(dist_fixed(x, x) == 0);
        CHECK(torus_distance(x, x) == 0.0);
    }
    const auto x = point_from_reals({0.9});
    const auto y = point_from_reals({0.1});
    CHECK(torus_distance(x, y) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("distance equals translate-enumeration oracle") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const std::uint32_t k = 1 + i % 4;
        const auto x = random_point(rng, k);
        const auto y = random_point(rng, k);
        const long double expect = distance_by_translates(x, y);
        const long double got = static_cast<long double>(dist_fixed(x, y)) * 0x1.0p-64L;
        CHECK(std::fabs(got - expect) <= 0x1.0p-60L);
    }
}

TEST_CASE("metric axioms on random triples") {
    Rng rng(13);
    for (int i = 0; i < 3000; ++i) {
        const std::uint32_t k = 1 + i % 3;
        const auto x = random_point(rng, k), y = random_point(rng, k), z = random_point(rng, k);
        CHECK(dist_fixed(x, y) == dist_fixed(y, x)); // symmetry, exact
        const u128 lhs = dist_fixed(x, z);
        const u128 rhs = u128(dist_fixed(x, y)) + dist_fixed(y, z);
        CHECK(lhs <= rhs); // triangle inequality, exact in lattice units
        if (dist_fixed(x, y) == 0) CHECK(x == y);
    }
}

TEST_CASE("translation invariance is bit-exact") {
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        const std::uint32_t k = 1 + i % 4;
        const auto x = random_point(rng, k), y = random_point(rng, k), t = random_point(rng, k);
        CHECK(dist_fixed(translate(x, t), translate(y, t)) == dist_fixed(x, y));
    }
}

TEST_CASE("real-fixed round trip loses at most one lattice unit") {
    Rng rng(19);
    for (int i = 0; i < 5000; ++i) {
        const double x = rng.uniform01();
        const double back = fixed_to_real(real_to_fixed(x));
        CHECK(std::abs(back - x) <= 0x1.0p-64);
    }
    CHECK(real_to_fixed(0.0) == 0);
    CHECK(real_to_fixed(1.0) == 0);  // wraps to the origin
    CHECK(real_to_fixed(-0.25) == fraction_to_fixed(3, 4));
}

TEST_CASE("radius threshold realizes open-ball comparisons") {
    // d < r  iff  dist_fixed < ceil(r*2^64)
    const double r = 0.3;
    const u64 t = radius_threshold(r);
    const long double scaled = static_cast<long double>(r) * 0x1.0p64L; // exact
    CHECK(static_cast<long double>(t - 1) < scaled);
    CHECK(static_cast<long double>(t) >= scaled);
    CHECK_THROWS_AS(radius_threshold(0.0), usage_error);
    CHECK_THROWS_AS(radius_threshold(0.75), usage_error);
}

TEST_CASE("cat map fixed point and exact rational step") {
    const auto cat = make_cat_map();
    const auto zero = point_from_reals({0.0, 0.0});
    CHECK(step(cat, zero) == zero);

    TorusPoint x(2);
    x[0] = fraction_to_fixed(1, 4);
    x[1] = fraction_to_fixed(1, 2);
    const auto y = step(cat, x);
    // (2/4 + 1/2, 1/4 + 1/2) mod 1 = (0, 3/4)
    CHECK(y[0] == 0);
    CHECK(y[1] == fraction_to_fixed(3, 4));
}

TEST_CASE("rotation step is exact wrapping addition") {
    const auto rot = make_rotation(fraction_to_fixed(1, 2));
    TorusPoint x(1);
    x[0] = fraction_to_fixed(1, 4);
    CHECK(step(rot, x)[0] == fraction_to_fixed(3, 4));

    const auto x2 = point_from_reals({0.3});
    CHECK(fixed_to_real(step(rot, x2)[0]) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("inverse_step round trips bit-exactly") {
    Rng rng(23);
    SUBCASE("rotation") {
        const auto rot = make_rotation(kGoldenAlpha);
        for (int i = 0; i < 1000; ++i) {
            const auto x = random_point(rng, 1);
            CHECK(step(rot, inverse_step(rot, x)) == x);
            CHECK(inverse_step(rot, step(rot, x)) == x);
        }
    }
    SUBCASE("cat map, 1e4 points") {
        const auto cat = make_cat_map();
        for (int i = 0; i < 10000; ++i) {
            const auto x = random_point(rng, 2);
            CHECK(inverse_step(cat, step(cat, x)) == x);
        }
    }
    SUBCASE("quartic companion matrix on T^4") {
        const auto sys = make_toral(IntMatrix::companion({1, -2, 0, -2, 1}));
        for (int i = 0; i < 10000; ++i) {
            const auto x = random_point(rng, 4);
            CHECK(inverse_step(sys, step(sys, x)) == x);
            CHECK(step(sys, inverse_step(sys, x)) == x);
        }
    }
    SUBCASE("expanding maps are not invertible") {
        const auto dbl = make_doubling(1);
        const auto x = random_point(rng, 1);
        CHECK_THROWS_AS(inverse_step(dbl, x), usage_error);
    }
}

TEST_CASE("orbit basics") {
    const auto rot = make_rotation(fraction_to_fixed(1, 2));
    const auto x0 = point_from_reals({0.0});
    const auto orbit = iterate_orbit(rot, x0, 6);
    REQUIRE(orbit.points.size() == 7);
    CHECK(orbit.points[0] == x0);
    for (std::size_t j = 0; j < orbit.points.size(); ++j) {
        const u64 expect = (j % 2 == 0) ? 0 : fraction_to_fixed(1, 2);
        CHECK(orbit.points[j][0] == expect);
    }
    const auto only = iterate_orbit(rot, x0, 0);
    CHECK(only.points.size() == 1);
    CHECK_THROWS_AS(iterate_orbit(rot, x0, kMaxOrbitPoints + 5), capacity_error);
}

namespace {

// Big-integer reference for an expanding map: keep the full digit expansion,
// query the same keyed digit source, and read off 64-bit windows exactly.
std::vector<u64> reference_window_orbit(const ExpandingCircleMap& map,
                                        const std::vector<u64>& lead_digits, std::size_t n) {
    std::vector<u64> digits = lead_digits; // base-m digits, most significant first
    std::vector<u64> windows;
    const int k = map.window_digits;
    for (std::size_t pos = 0; pos + 1 <= n + 1; ++pos) {
        u128 d = 0;
        for (int j = 0; j < k; ++j) d = d * map.m + digits[pos + j];
        const u64 window = static_cast<u64>((d << 64) / map.m_pow_k);
        windows.push_back(window);
        digits.push_back(expanding_next_digit(map, window));
    }
    return windows;
}

} // namespace

TEST_CASE("digit-window orbit matches big-integer shift reference") {
    for (std::uint32_t m : {2u, 3u, 10u}) {
        const auto sys = make_expanding(m, 99);
        const auto& map = std::get<ExpandingCircleMap>(sys.map);

        // leading digits from an arbitrary valid window
        Rng rng(41 + m);
        std::vector<u64> lead;
        for (int j = 0; j < map.window_digits; ++j) lead.push_back(rng.below(m));
        u128 d0 = 0;
        for (u64 dg : lead) d0 = d0 * m + dg;
        TorusPoint x0(1);
        x0[0] = static_cast<u64>((d0 << 64) / map.m_pow_k);

        const auto expect = reference_window_orbit(map, lead, 256);
        TorusPoint x = x0;
        for (std::size_t j = 0; j < expect.size(); ++j) {
            CHECK(x[0] == expect[j]);
            step_inplace(sys, x);
        }
    }
}

TEST_CASE("zero-digit doubling map fixes the origin") {
    const auto sys = make_doubling(5, DigitMode::zero);
    TorusPoint x(1); // 0
    for (int i = 0; i < 100; ++i) {
        step_inplace(sys, x);
        CHECK(x[0] == 0);
    }
}

TEST_CASE("orbit determinism under identical seeds") {
    const auto a = make_doubling(1234);
    const auto b = make_doubling(1234);
    Rng rng(3);
    const auto x0 = random_point(rng, 1);
    const auto oa = iterate_orbit(a, x0, 5000);
    const auto ob = iterate_orbit(b, x0, 5000);
    CHECK(oa.points.size() == ob.points.size());
    for (std::size_t i = 0; i < oa.points.size(); ++i) CHECK(oa.points[i] == ob.points[i]);
}

TEST_CASE("toral step is injective on the lattice (spot check)") {
    const auto cat = make_cat_map();
    Rng rng(29);
    const std::size_t n = 1000000;
    std::vector<std::pair<u64, u64>> images;
    images.reserve(n);
    std::vector<std::pair<u64, u64>> inputs;
    inputs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = random_point(rng, 2);
        inputs.emplace_back(x[0], x[1]);
    }
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
    for (const auto& [a, b] : inputs) {
        TorusPoint x(2);
        x[0] = a;
        x[1] = b;
        const auto y = step(cat, x);
        images.emplace_back(y[0], y[1]);
    }
    std::sort(images.begin(), images.end());
    const bool distinct = std::adjacent_find(images.begin(), images.end()) == images.end();
    CHECK(distinct);
}

TEST_CASE("dimension mismatches are usage errors") {
    const auto cat = make_cat_map();
    const auto x1 = point_from_reals({0.5});
    CHECK_THROWS_AS(step(cat, x1), usage_error);
    const auto x2 = point_from_reals({0.5, 0.5});
    const auto y1 = point_from_reals({0.5});
    CHECK_THROWS_AS(dist_fixed(x2, y1), usage_error);
}

TEST_CASE("analytic invariants match closed forms") {
    CHECK(make_doubling(1).invariants.entropy == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(make_doubling(1).invariants.lyapunov_max ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    const double cat_h = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    CHECK(make_cat_map().invariants.entropy == doctest::Approx(cat_h).epsilon(1e-9));
    CHECK(make_cat_map().invariants.lyapunov_max == doctest::Approx(cat_h).epsilon(1e-9));
    CHECK(make_rotation(kGoldenAlpha).invariants.entropy == 0.0);
    CHECK(make_rotation(kGoldenAlpha).invariants.lyapunov_max == 0.0);
    CHECK(make_expanding(3, 1).invariants.entropy ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
}
