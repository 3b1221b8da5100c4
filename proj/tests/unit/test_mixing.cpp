#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rlab/measure.hpp"
#include "rlab/mixing.hpp"

using namespace rlab;

TEST_CASE("bump function values and sandwich") {
    CHECK(lipschitz_bump(0.1, 0.0) == 1.0);
    CHECK(lipschitz_bump(0.1, 0.1) == 1.0);
    CHECK(lipschitz_bump(0.1, 0.2) == 0.0);
    CHECK(lipschitz_bump(0.1, 0.15) == doctest::Approx(0.5).epsilon(1e-12));

    Rng rng(3);
    const double r = 0.07;
    for (int i = 0; i < 2000; ++i) {
        const double t = rng.uniform01() * 0.5;
        const double v = lipschitz_bump(r, t);
        CHECK(v >= ((t <= r) ? 1.0 : 0.0));
        CHECK(v <= ((t <= 2 * r) ? 1.0 : 0.0) + 0.0);
        const double s = rng.uniform01() * 0.5;
        CHECK(std::abs(lipschitz_bump(r, s) - v) <= std::abs(s - t) / r + 1e-12);
    }
}

TEST_CASE("observable construction and bounds") {
    const auto phi = Observable::fourier({1, 0});
    CHECK(phi.lipschitz_constant() == doctest::Approx(2.0 * std::numbers::pi));
    const auto psi = Observable::fourier({2, -3});
    CHECK(psi.lipschitz_constant() == doctest::Approx(10.0 * std::numbers::pi));
    CHECK_THROWS_AS(Observable::fourier({0, 0}), usage_error);

    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const auto x = random_point(rng, 2);
        CHECK(phi(x) >= -1.0);
        CHECK(phi(x) <= 1.0);
    }
    const auto bump = Observable::bump(point_from_reals({0.5, 0.5}), 0.1);
    CHECK(bump.lipschitz_constant() == doctest::Approx(10.0));
}

TEST_CASE("covariance at lag zero is the analytic variance") {
    const auto cat = make_cat_map();
    const auto phi = Observable::fourier({1, 0});
    const auto est = covariance_estimate(cat, phi, phi, 0, 40000, 11);
    CHECK(std::abs(est.cov_hat - 0.5) <= 3.0 * est.stderr_);
    CHECK(est.cov_hat >= -3.0 * est.stderr_); // variance nonnegativity

    // nonnegativity holds for every observable kind
    Rng rng(12);
    const auto obs = {Observable::bump(random_point(rng, 2), 0.1),
                      Observable::fourier({0, 2}, Phase::sine), Observable::coordinate(1, 2)};
    for (const auto& o : obs) {
        const auto e0 = covariance_estimate(cat, o, o, 0, 20000, 13);
        CHECK(e0.cov_hat >= -3.0 * e0.stderr_);
    }
}

TEST_CASE("doubling map decorrelates Fourier modes at every positive lag") {
    const auto dbl = make_doubling(7);
    const auto phi = Observable::fourier({1});
    for (std::size_t lag : {1u, 2u, 5u}) {
        const auto est = covariance_estimate(dbl, phi, phi, lag, 40000, 13);
        CHECK(std::abs(est.cov_hat) <= 3.0 * est.stderr_);
    }
}

TEST_CASE("rotation covariance matches the closed form at every lag") {
    const auto rot = make_rotation(kGoldenAlpha);
    const double alpha = fixed_to_real(kGoldenAlpha);
    const auto phi = Observable::fourier({1});
    const auto series = decay_profile(rot, phi, phi, 40, 50000, 17);
    for (std::size_t lag = 0; lag <= 40; ++lag) {
        const double truth = 0.5 * std::cos(2.0 * std::numbers::pi * lag * alpha);
        CHECK(std::abs(series.cov[lag] - truth) <= 3.0 * series.stderr_[lag]);
    }
}

TEST_CASE("covariance with a constant observable vanishes") {
    const auto cat = make_cat_map();
    const auto phi = Observable::constant(0.7, 2);
    const auto psi = Observable::fourier({1, 0});
    for (std::size_t lag : {0u, 3u}) {
        const auto est = covariance_estimate(cat, phi, psi, lag, 20000, 19);
        CHECK(std::abs(est.cov_hat) <= 1e-12 + 3.0 * est.stderr_);
    }
}

TEST_CASE("bilinearity: halving an observable halves the covariance exactly") {
    const auto cat = make_cat_map();
    const auto phi = Observable::fourier({1, 0});
    const auto half = Observable::scaled(phi, 0.5);
    const auto a = covariance_estimate(cat, phi, phi, 2, 20000, 23);
    const auto b = covariance_estimate(cat, half, phi, 2, 20000, 23);
    CHECK(b.cov_hat == 0.5 * a.cov_hat); // bit-exact: scaling by a power of two
}

TEST_CASE("profile at a lag equals the standalone estimator under one seed") {
    const auto cat = make_cat_map();
    const auto phi = Observable::fourier({1, 0});
    const auto series = decay_profile(cat, phi, phi, 6, 20000, 29);
    for (std::size_t lag : {0u, 3u, 6u}) {
        const auto single = covariance_estimate(cat, phi, phi, lag, 20000, 29);
        CHECK(series.cov[lag] == single.cov_hat);
        CHECK(series.stderr_[lag] == single.stderr_);
    }
}

TEST_CASE("decay profile is identical across worker counts") {
    const auto cat = make_cat_map();
    const auto phi = Observable::fourier({1, 0});
    const auto s1 = decay_profile(cat, phi, phi, 8, 30000, 31, 1);
    const auto s4 = decay_profile(cat, phi, phi, 8, 30000, 31, 4);
    CHECK(s1.cov == s4.cov);
    CHECK(s1.stderr_ == s4.stderr_);
}

namespace {

CorrelationSeries synthetic_series(std::size_t n_max, double stderr_each,
                                   double (*f)(std::size_t)) {
    CorrelationSeries s;
    s.sample_count = 1000000;
    for (std::size_t n = 0; n <= n_max; ++n) {
        s.cov.push_back(f(n));
        s.stderr_.push_back(stderr_each);
    }
    return s;
}

} // namespace

TEST_CASE("classifier: exponential synthetic series") {
    const auto s = synthetic_series(30, 1e-4, [](std::size_t n) {
        return 0.5 * std::exp(-0.7 * static_cast<double>(n));
    });
    const auto c = decay_classify(s);
    CHECK(c.cls == DecayClass::exponential);
    CHECK(c.rate == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("classifier: polynomial synthetic series") {
    const auto s = synthetic_series(40, 1e-3, [](std::size_t n) {
        return n == 0 ? 0.5 : 0.5 * std::pow(static_cast<double>(n), -2.0);
    });
    const auto c = decay_classify(s);
    CHECK(c.cls == DecayClass::polynomial);
    CHECK(c.rate == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("classifier: persistent correlations mean no decay") {
    const double alpha = fixed_to_real(kGoldenAlpha);
    const auto s = synthetic_series(100, 5e-4, [](std::size_t) { return 0.0; });
    CorrelationSeries rot = s;
    for (std::size_t n = 0; n <= 100; ++n)
        rot.cov[n] = 0.5 * std::cos(2.0 * std::numbers::pi * n * alpha);
    const auto c = decay_classify(rot);
    CHECK(c.cls == DecayClass::none);
}

TEST_CASE("classifier: series living under the floor is censored") {
    const auto s = synthetic_series(30, 1e-3, [](std::size_t n) {
        return n == 0 ? 0.5 : 1e-5; // only lag 0 resolves
    });
    const auto c = decay_classify(s);
    CHECK(c.cls == DecayClass::censored);
}

TEST_CASE("time-average estimator agrees with the space average for the cat map") {
    const auto cat = make_cat_map();
    const auto phi = Observable::fourier({1, 0});
    const auto ta = time_average_profile(cat, phi, phi, 5, 200000, 37);
    CHECK(std::abs(ta.cov[0] - 0.5) <= 5.0 * ta.stderr_[0]);
    for (std::size_t lag = 2; lag <= 5; ++lag)
        CHECK(std::abs(ta.cov[lag]) <= 5.0 * ta.stderr_[lag]);
}

TEST_CASE("mixing bound from hit counting") {
    // mu(B(x,r) cap f^-n B(x,2r)) <= r^-2 theta_n + mu(B(x,4r))^2 + slack
    // with theta_n ~ 0 for the cat map at late lags
    const auto cat = make_cat_map();
    Rng rng(41);
    const auto x = random_point(rng, 2);
    const double r = std::exp(-3.0);
    const u64 tr = radius_threshold(r);
    const u64 tr2 = radius_threshold(2.0 * r);
    const std::size_t n_samples = 200000;
    for (std::size_t lag : {10u, 14u}) {
        std::size_t hits = 0;
        Rng sampler(43);
        for (std::size_t i = 0; i < n_samples; ++i) {
            const auto y = random_point(sampler, 2);
            if (dist_fixed(y, x) >= tr) continue;
            TorusPoint z = y;
            for (std::size_t s = 0; s < lag; ++s) step_inplace(cat, z);
            if (dist_fixed(z, x) < tr2) ++hits;
        }
        const double p_hat = static_cast<double>(hits) / n_samples;
        const double se = std::sqrt(std::max(p_hat, 1e-9) * (1 - p_hat) / n_samples);
        const double mu4r = MeasureModel::lebesgue(2).ball(x, 4.0 * r).value;
        CHECK(p_hat <= mu4r * mu4r + 5.0 * se);
    }
}
