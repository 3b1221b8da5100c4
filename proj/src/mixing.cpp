#include "rlab/mixing.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rlab/errors.hpp"
#include "rlab/parallel.hpp"
#include "rlab/stats.hpp"

namespace rlab {

double lipschitz_bump(double r, double t) {
    if (!(r > 0.0)) throw usage_error("lipschitz_bump: r must be > 0");
    if (t < 0.0) throw usage_error("lipschitz_bump: t must be >= 0");
    if (t <= r) return 1.0;
    if (t >= 2.0 * r) return 0.0;
    return 2.0 - t / r;
}

Observable Observable::fourier(std::vector<int> q, Phase phase) {
    if (q.empty() || q.size() > kMaxDim) throw usage_error("fourier: bad frequency vector");
    bool nonzero = false;
    double l1 = 0.0;
    for (int v : q) {
        if (v != 0) nonzero = true;
        l1 += std::abs(static_cast<double>(v));
    }
    if (!nonzero) throw usage_error("fourier: frequency vector must be nonzero");
    Observable o;
    o.k_ = static_cast<std::uint32_t>(q.size());
    o.lipschitz_ = 2.0 * std::numbers::pi * l1;
    o.fn_ = FourierMode{std::move(q), phase};
    return o;
}

Observable Observable::bump(TorusPoint center, double r) {
    if (!(r > 0.0) || r > 0.25) throw usage_error("bump: r must be in (0, 1/4]");
    Observable o;
    o.k_ = center.k;
    o.lipschitz_ = 1.0 / r;
    o.fn_ = BumpAtPoint{std::move(center), r};
    return o;
}

Observable Observable::coordinate(std::uint32_t index, std::uint32_t k) {
    if (index >= k) throw usage_error("coordinate: index out of range");
    Observable o;
    o.k_ = k;
    o.lipschitz_ = std::numeric_limits<double>::infinity(); // jump at the wrap
    o.fn_ = CoordinateObs{index};
    return o;
}

Observable Observable::constant(double value, std::uint32_t k) {
    if (value < -1.0 || value > 1.0) throw usage_error("constant: value outside [-1,1]");
    Observable o;
    o.k_ = k;
    o.lipschitz_ = 0.0;
    o.fn_ = Constant{value};
    return o;
}

Observable Observable::scaled(Observable base, double factor) {
    if (std::abs(factor) > 1.0) throw usage_error("scaled: |factor| must be <= 1");
    base.scale_ *= factor;
    return base;
}

double Observable::operator()(const TorusPoint& x) const {
    if (x.k != k_) throw usage_error("observable: dimension mismatch");
    if (const auto* f = std::get_if<FourierMode>(&fn_)) {
        // q . x mod 1, exact in fixed point before the single trig call
        u64 acc = 0;
        for (std::uint32_t i = 0; i < k_; ++i)
            acc += static_cast<u64>(static_cast<long long>(f->q[i])) * x[i];
        const double t = 2.0 * std::numbers::pi * fixed_to_real(acc);
        return scale_ * (f->phase == Phase::cosine ? std::cos(t) : std::sin(t));
    }
    if (const auto* b = std::get_if<BumpAtPoint>(&fn_))
        return scale_ * lipschitz_bump(b->r, torus_distance(b->center, x));
    if (const auto* c = std::get_if<CoordinateObs>(&fn_)) return scale_ * fixed_to_real(x[c->index]);
    return scale_ * std::get<Constant>(fn_).value;
}

namespace {

struct BatchSums {
    KahanSum prod;    // phi(f^n x) * psi(x)
    KahanSum phi_n;   // phi(f^n x)
    KahanSum psi_0;   // psi(x)
    std::size_t count = 0;
};

CovEstimate combine(const std::vector<BatchSums>& batches) {
    KahanSum prod, phi_n, psi_0;
    std::size_t n = 0;
    for (const auto& b : batches) {
        prod.add(b.prod.value());
        phi_n.add(b.phi_n.value());
        psi_0.add(b.psi_0.value());
        n += b.count;
    }
    const double nn = static_cast<double>(n);
    CovEstimate est;
    est.cov_hat = prod.value() / nn - (phi_n.value() / nn) * (psi_0.value() / nn);

    std::vector<double> per_batch;
    per_batch.reserve(batches.size());
    for (const auto& b : batches) {
        const double m = static_cast<double>(b.count);
        per_batch.push_back(b.prod.value() / m - (b.phi_n.value() / m) * (b.psi_0.value() / m));
    }
    double mean = 0.0;
    for (double v : per_batch) mean += v;
    mean /= static_cast<double>(per_batch.size());
    double var = 0.0;
    for (double v : per_batch) var += (v - mean) * (v - mean);
    const double nb = static_cast<double>(per_batch.size());
    est.stderr_ = std::sqrt(var / (nb - 1.0) / nb);
    return est;
}

std::size_t batch_size(std::size_t n_samples, std::size_t b) {
    return n_samples / kCovBatches + (b < n_samples % kCovBatches ? 1 : 0);
}

} // namespace

CovEstimate covariance_estimate(const SystemSpec& sys, const Observable& phi,
                                const Observable& psi, std::size_t lag,
                                std::size_t n_samples, u64 seed) {
    if (n_samples < 1000) throw usage_error("covariance_estimate: need N >= 1e3");
    if (phi.dim() != sys.dim() || psi.dim() != sys.dim())
        throw usage_error("covariance_estimate: observable dimension mismatch");

    std::vector<BatchSums> batches(kCovBatches);
    for (std::size_t b = 0; b < kCovBatches; ++b) {
        Rng rng(derive_seed(seed, b));
        auto& sums = batches[b];
        sums.count = batch_size(n_samples, b);
        for (std::size_t i = 0; i < sums.count; ++i) {
            TorusPoint x = random_point(rng, sys.dim());
            const double ps = psi(x);
            for (std::size_t s = 0; s < lag; ++s) step_inplace(sys, x);
            const double ph = phi(x);
            sums.prod.add(ph * ps);
            sums.phi_n.add(ph);
            sums.psi_0.add(ps);
        }
    }
    return combine(batches);
}

CorrelationSeries decay_profile(const SystemSpec& sys, const Observable& phi,
                                const Observable& psi, std::size_t n_max,
                                std::size_t n_samples, u64 seed, unsigned threads) {
    if (n_samples < 1000) throw usage_error("decay_profile: need N >= 1e3");
    if (phi.dim() != sys.dim() || psi.dim() != sys.dim())
        throw usage_error("decay_profile: observable dimension mismatch");

    // batches x lags; common random numbers: one sample set, every lag
    std::vector<std::vector<BatchSums>> acc(kCovBatches,
                                            std::vector<BatchSums>(n_max + 1));
    parallel_for(kCovBatches, threads, [&](std::size_t b) {
        Rng rng(derive_seed(seed, b));
        const std::size_t count = batch_size(n_samples, b);
        auto& lane = acc[b];
        for (auto& s : lane) s.count = count;
        for (std::size_t i = 0; i < count; ++i) {
            TorusPoint x = random_point(rng, sys.dim());
            const double ps = psi(x);
            for (std::size_t lag = 0; lag <= n_max; ++lag) {
                if (lag > 0) step_inplace(sys, x);
                const double ph = phi(x);
                lane[lag].prod.add(ph * ps);
                lane[lag].phi_n.add(ph);
                lane[lag].psi_0.add(ps);
            }
        }
    });

    CorrelationSeries series;
    series.sample_count = n_samples;
    series.estimator = "space-average";
    std::vector<BatchSums> column(kCovBatches);
    for (std::size_t lag = 0; lag <= n_max; ++lag) {
        for (std::size_t b = 0; b < kCovBatches; ++b) column[b] = acc[b][lag];
        const auto est = combine(column);
        series.cov.push_back(est.cov_hat);
        series.stderr_.push_back(est.stderr_);
    }
    return series;
}

CorrelationSeries time_average_profile(const SystemSpec& sys, const Observable& phi,
                                       const Observable& psi, std::size_t n_max,
                                       std::size_t orbit_len, u64 seed) {
    if (orbit_len < 1000) throw usage_error("time_average_profile: need orbit length >= 1e3");
    Rng rng(derive_seed(seed, 0xA11));
    TorusPoint x = random_point(rng, sys.dim());

    // materialize phi/psi along the orbit once
    std::vector<double> phis(orbit_len + n_max + 1), psis(orbit_len + n_max + 1);
    for (std::size_t j = 0; j < phis.size(); ++j) {
        phis[j] = phi(x);
        psis[j] = psi(x);
        step_inplace(sys, x);
    }

    CorrelationSeries series;
    series.sample_count = orbit_len;
    series.estimator = "time-average";
    for (std::size_t lag = 0; lag <= n_max; ++lag) {
        std::vector<BatchSums> batches(kCovBatches);
        std::size_t j = 0;
        for (std::size_t b = 0; b < kCovBatches; ++b) {
            auto& sums = batches[b];
            sums.count = batch_size(orbit_len, b);
            for (std::size_t i = 0; i < sums.count; ++i, ++j) {
                sums.prod.add(phis[j + lag] * psis[j]);
                sums.phi_n.add(phis[j + lag]);
                sums.psi_0.add(psis[j]);
            }
        }
        const auto est = combine(batches);
        series.cov.push_back(est.cov_hat);
        series.stderr_.push_back(est.stderr_);
    }
    return series;
}

const char* to_string(DecayClass c) {
    switch (c) {
        case DecayClass::exponential: return "exponential";
        case DecayClass::polynomial: return "polynomial";
        case DecayClass::none: return "none";
        case DecayClass::censored: return "censored";
    }
    return "?";
}

DecayClassification decay_classify(const CorrelationSeries& series) {
    DecayClassification out;
    const std::size_t n_max = series.max_lag();

    // correlation persisting late in the series means no decay
    for (std::size_t lag = (n_max + 1) / 2; lag <= n_max; ++lag) {
        if (std::abs(series.cov[lag]) > 3.0 * series.noise_floor(lag)) {
            out.cls = DecayClass::none;
            return out;
        }
    }

    std::vector<double> ns, logs;
    for (std::size_t lag = 1; lag <= n_max; ++lag) {
        const double c = std::abs(series.cov[lag]);
        if (c > series.noise_floor(lag)) {
            ns.push_back(static_cast<double>(lag));
            logs.push_back(std::log(c));
        }
    }
    out.usable_lags = ns.size();
    if (ns.size() < 10) {
        out.cls = DecayClass::censored; // decayed below the floor too fast to fit
        return out;
    }

    std::vector<double> log_ns(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) log_ns[i] = std::log(ns[i]);
    const ScalingFit exp_fit = linear_fit(ns, logs, 0, ns.size());
    const ScalingFit poly_fit = linear_fit(log_ns, logs, 0, ns.size());
    out.r2_exponential = exp_fit.r_squared;
    out.r2_polynomial = poly_fit.r_squared;
    if (exp_fit.r_squared >= poly_fit.r_squared) {
        out.cls = DecayClass::exponential;
        out.rate = -exp_fit.slope;
    } else {
        out.cls = DecayClass::polynomial;
        out.rate = -poly_fit.slope;
    }
    return out;
}

} // namespace rlab
