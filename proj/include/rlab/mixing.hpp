#ifndef RLAB_MIXING_HPP
#define RLAB_MIXING_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rlab/systems.hpp"

namespace rlab {

// Lipschitz observables and Monte-Carlo covariance estimation
//   cov(phi o f^n, psi) = E[phi(f^n X) psi(X)] - E[phi(f^n X)] E[psi(X)]
// with i.i.d. Lebesgue start points (the invariant measure is exactly
// samplable). One sample set is shared across lags so the series shape is
// not corrupted by resampling noise.

// 1 on [0, r], 0 on [2r, inf), linear in between; Lipschitz constant 1/r
double lipschitz_bump(double r, double t);

enum class Phase { cosine, sine };

struct FourierMode {
    std::vector<int> q; // nonzero frequency vector in Z^k
    Phase phase = Phase::cosine;
};

struct BumpAtPoint {
    TorusPoint center;
    double r = 0.1;
};

struct CoordinateObs {
    std::uint32_t index = 0;
};

class Observable {
public:
    static Observable fourier(std::vector<int> q, Phase phase = Phase::cosine);
    static Observable bump(TorusPoint center, double r);
    static Observable coordinate(std::uint32_t index, std::uint32_t k);
    static Observable constant(double value, std::uint32_t k); // degenerate, for tests
    static Observable scaled(Observable base, double factor);  // |factor| <= 1

    double operator()(const TorusPoint& x) const;
    double lipschitz_constant() const { return std::abs(scale_) * lipschitz_; }
    std::uint32_t dim() const { return k_; }

private:
    struct Constant {
        double value;
    };
    std::variant<FourierMode, BumpAtPoint, CoordinateObs, Constant> fn_;
    double lipschitz_ = 0.0;
    double scale_ = 1.0;
    std::uint32_t k_ = 1;
};

struct CovEstimate {
    double cov_hat = 0.0;
    double stderr_ = 0.0;
};

constexpr std::size_t kCovBatches = 32;

CovEstimate covariance_estimate(const SystemSpec& sys, const Observable& phi,
                                const Observable& psi, std::size_t lag,
                                std::size_t n_samples, u64 seed);

struct CorrelationSeries {
    std::vector<double> cov;     // index = lag, 0..n_max
    std::vector<double> stderr_;
    std::size_t sample_count = 0;
    std::string estimator = "space-average";

    std::size_t max_lag() const { return cov.empty() ? 0 : cov.size() - 1; }
    double noise_floor(std::size_t lag) const { return 3.0 * stderr_[lag]; }
};

CorrelationSeries decay_profile(const SystemSpec& sys, const Observable& phi,
                                const Observable& psi, std::size_t n_max,
                                std::size_t n_samples, u64 seed, unsigned threads = 1);

// Cross-check estimator along a single orbit.
CorrelationSeries time_average_profile(const SystemSpec& sys, const Observable& phi,
                                       const Observable& psi, std::size_t n_max,
                                       std::size_t orbit_len, u64 seed);

enum class DecayClass { exponential, polynomial, none, censored };

const char* to_string(DecayClass c);

// Convention: super-polynomial decay means cov_n * n^p -> 0 for every p > 0,
// so "censored" (gone below the noise floor too fast to fit) is consistent
// with it. Classification compares log|cov| against n (exponential) and
// against log n (polynomial) on the lags above the per-lag noise floor.
struct DecayClassification {
    DecayClass cls = DecayClass::censored;
    double rate = 0.0; // exponential decay rate, or polynomial exponent p
    double r2_exponential = 0.0;
    double r2_polynomial = 0.0;
    std::size_t usable_lags = 0;
};

DecayClassification decay_classify(const CorrelationSeries& series);

} // namespace rlab

#endif
