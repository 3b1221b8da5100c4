#include "rlab/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rlab/errors.hpp"
#include "rlab/parallel.hpp"

namespace rlab {

Partition Partition::grid(std::uint32_t g, std::uint32_t k) {
    if (g < 1 || k < 1 || k > kMaxDim) throw usage_error("grid partition: bad parameters");
    if (g * k > 31) throw usage_error("grid partition: more than 2^31 cells");
    Partition p;
    p.impl_ = GridPartition{g, k};
    return p;
}

Partition Partition::balls(BallPartition b) {
    if (b.centers.empty()) throw usage_error("ball partition: no centers");
    if (b.centers.size() != b.rho.size()) throw usage_error("ball partition: radii mismatch");
    Partition p;
    b.rho_thresholds.clear();
    // a ball of radius > 1/2 swallows the torus (max distance is 1/2)
    for (double r : b.rho)
        b.rho_thresholds.push_back(r > 0.5 ? ~u64(0) : radius_threshold(r));
    p.impl_ = std::move(b);
    return p;
}

Symbol Partition::cell_of(const TorusPoint& x) const {
    if (const auto* g = std::get_if<GridPartition>(&impl_)) {
        if (x.k != g->k) throw usage_error("cell_of: dimension mismatch");
        Symbol id = 0;
        for (std::uint32_t i = 0; i < g->k; ++i)
            id = (id << g->g) | static_cast<Symbol>(x[i] >> (64 - g->g));
        return id;
    }
    const auto& b = std::get<BallPartition>(impl_);
    if (x.k != b.centers.front().k) throw usage_error("cell_of: dimension mismatch");
    for (std::size_t i = 0; i < b.centers.size(); ++i)
        if (dist_fixed(x, b.centers[i]) < b.rho_thresholds[i]) return static_cast<Symbol>(i);
    return kNoCell;
}

std::size_t Partition::cell_count() const {
    if (const auto* g = std::get_if<GridPartition>(&impl_))
        return std::size_t(1) << (g->g * g->k);
    return std::get<BallPartition>(impl_).centers.size();
}

std::uint32_t Partition::dim() const {
    if (const auto* g = std::get_if<GridPartition>(&impl_)) return g->k;
    return std::get<BallPartition>(impl_).centers.front().k;
}

std::vector<TorusPoint> maximal_separated_set(std::span<const TorusPoint> samples, double s,
                                              u64 shuffle_seed) {
    if (!(s > 0.0) || !(s < 0.5)) throw usage_error("maximal_separated_set: s must be in (0, 1/2)");
    if (samples.empty()) throw usage_error("maximal_separated_set: no samples");

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(shuffle_seed);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);

    const u64 t = radius_threshold(s);
    std::vector<TorusPoint> centers;
    for (std::size_t idx : order) {
        const TorusPoint& cand = samples[idx];
        bool far = true;
        for (const auto& c : centers) {
            if (dist_fixed(cand, c) < t) {
                far = false;
                break;
            }
        }
        if (far) centers.push_back(cand);
    }
    return centers;
}

ThinRadius select_thin_radius(const TorusPoint& x, double s, const MeasureModel& measure,
                              int depth) {
    if (depth < 1) throw usage_error("select_thin_radius: depth must be >= 1");
    if (!(s > 0.0) || !(s < 0.5)) throw usage_error("select_thin_radius: s in (0, 1/2)");

    auto cdf = [&](double t) { return measure.radial_cdf(x, s, t); };
    auto interval_m = [&](double lo, double hi) { return cdf(hi) - cdf(lo); };

    ThinRadius out;
    double lo = 1.0, len = 1.0; // I_0 = (1, 2) in units of s
    out.interval_measure.push_back(interval_m(lo, lo + len));
    out.halving_ok = true;
    for (int level = 0; level < depth; ++level) {
        const double quarter = len / 4.0;
        const double m_left = interval_m(lo + quarter, lo + 2.0 * quarter);
        const double m_right = interval_m(lo + 2.0 * quarter, lo + 3.0 * quarter);
        lo = (m_left <= m_right) ? lo + quarter : lo + 2.0 * quarter;
        len = quarter;
        const double m_now = interval_m(lo, lo + len);
        if (m_now > 0.5 * out.interval_measure.back() + 1e-15) out.halving_ok = false;
        out.interval_measure.push_back(m_now);
    }
    const double rho_bar = lo + 0.5 * len;
    out.rho = s * rho_bar;

    // annulus bound from the construction, checked against the measure
    out.annulus_ok = true;
    const double ball_2s = cdf(2.0);
    for (int n = 1; n <= depth - 1; ++n) {
        const double w = std::pow(0.25, n);
        const double annulus = interval_m(rho_bar - w, rho_bar + w);
        const double bound = std::pow(0.5, n - 1) * ball_2s;
        if (annulus > bound + 1e-15) out.annulus_ok = false;
    }
    return out;
}

Partition build_partition(std::span<const TorusPoint> samples, double s,
                          const MeasureModel& measure, u64 seed, int depth,
                          PartitionDiagnostics* diagnostics) {
    BallPartition b;
    b.s = s;
    b.centers = maximal_separated_set(samples, s, derive_seed(seed, 0x5e7));
    for (const auto& c : b.centers) {
        const auto thin = select_thin_radius(c, s, measure, depth);
        if (!thin.halving_ok || !thin.annulus_ok)
            throw usage_error("build_partition: thin-radius bound failed for a center; "
                              "the supplied measure is inconsistent");
        b.rho.push_back(thin.rho);
    }
    Partition part = Partition::balls(std::move(b));

    if (diagnostics) {
        diagnostics->cell_count = part.cell_count();
        std::size_t covered = 0;
        for (const auto& p : samples)
            if (part.cell_of(p) != kNoCell) ++covered;
        diagnostics->coverage = static_cast<double>(covered) / static_cast<double>(samples.size());

        // boundary thinness: P(d(y, some sphere) < eps) ~ c * eps^a over
        // eps = 4^-n s, estimated on fresh uniform samples
        const auto* bp = part.ball_form();
        Rng rng(derive_seed(seed, 0xb0d));
        const std::size_t m = 20000;
        std::vector<double> dist_to_spheres(m);
        std::size_t bottom = 0;
        const std::uint32_t k = samples.front().k;
        for (std::size_t i = 0; i < m; ++i) {
            const TorusPoint y = random_point(rng, k);
            if (part.cell_of(y) == kNoCell) ++bottom;
            double best = 1.0;
            for (std::size_t j = 0; j < bp->centers.size(); ++j) {
                const double d = torus_distance(y, bp->centers[j]);
                best = std::min(best, std::abs(d - bp->rho[j]));
            }
            dist_to_spheres[i] = best;
        }
        diagnostics->bottom_frequency = static_cast<double>(bottom) / static_cast<double>(m);

        std::vector<double> eps_grid, frac;
        for (int n = 0; n <= 4; ++n) {
            const double eps = s * std::pow(0.25, n);
            std::size_t close = 0;
            for (double d : dist_to_spheres)
                if (d < eps) ++close;
            if (close == 0) break;
            eps_grid.push_back(eps);
            frac.push_back(static_cast<double>(close) / static_cast<double>(m));
        }
        if (eps_grid.size() >= 2) {
            std::vector<double> lx(eps_grid.size()), ly(eps_grid.size());
            for (std::size_t i = 0; i < eps_grid.size(); ++i) {
                lx[i] = std::log(eps_grid[i]);
                ly[i] = std::log(frac[i]);
            }
            diagnostics->boundary_fit = linear_fit(lx, ly, 0, lx.size());
        }
    }
    return part;
}

std::vector<Symbol> itinerary(const SystemSpec& sys, const TorusPoint& x, std::size_t n,
                              const Partition& partition) {
    if (partition.dim() != sys.dim()) throw usage_error("itinerary: partition dimension mismatch");
    std::vector<Symbol> symbols;
    symbols.reserve(n);
    TorusPoint y = x;
    for (std::size_t i = 0; i < n; ++i) {
        symbols.push_back(partition.cell_of(y));
        if (i + 1 < n) step_inplace(sys, y);
    }
    return symbols;
}

Repetition repetition_from_symbols(std::span<const Symbol> symbols, std::size_t n) {
    if (n < 1) throw usage_error("repetition: n must be >= 1");
    if (symbols.size() < n + 1)
        throw usage_error("repetition: symbol stream shorter than one shifted word");
    for (std::size_t i = 0; i < n; ++i)
        if (symbols[i] == kNoCell)
            throw usage_error("repetition: base word contains an undefined cell at position " +
                              std::to_string(i));

    // polynomial rolling hash of the base word, slid across the stream;
    // every hash hit is confirmed symbol-by-symbol
    constexpr u64 kMul = 0x100000001B3ULL;
    u64 pow_n = 1;
    for (std::size_t i = 0; i < n; ++i) pow_n *= kMul;

    u64 base_hash = 0;
    for (std::size_t i = 0; i < n; ++i)
        base_hash = base_hash * kMul + (symbols[i] + 1);

    u64 window_hash = base_hash;
    const std::size_t max_shift = symbols.size() - n;
    for (std::size_t k = 1; k <= max_shift; ++k) {
        window_hash = window_hash * kMul + (symbols[k + n - 1] + 1) -
                      pow_n * (symbols[k - 1] + 1);
        if (window_hash == base_hash &&
            std::equal(symbols.begin(), symbols.begin() + n, symbols.begin() + k))
            return {static_cast<u64>(k), false};
    }
    return {max_shift, true};
}

Repetition repetition_time(const SystemSpec& sys, const TorusPoint& x, std::size_t n,
                           const Partition& partition, u64 k_max) {
    if (k_max < 1) throw usage_error("repetition_time: k_max must be >= 1");
    const auto symbols = itinerary(sys, x, n + k_max, partition);
    auto rep = repetition_from_symbols(symbols, n);
    if (rep.censored) rep.value = k_max;
    return rep;
}

EntropyEstimate entropy_estimate(const SystemSpec& sys, const Partition& partition,
                                 int n_lo, int n_hi, std::span<const TorusPoint> points,
                                 u64 k_max, unsigned threads) {
    if (n_lo < 1 || n_hi < n_lo) throw usage_error("entropy_estimate: bad n range");
    if (points.size() < 50)
        throw insufficient_data_error("entropy_estimate: need >= 50 points", points.size(), 50);

    EntropyEstimate est;
    est.analytic_entropy = sys.invariants.entropy;
    for (int n = n_lo; n <= n_hi; ++n) est.ns.push_back(n);
    est.per_point.assign(points.size(), {});

    const std::size_t cap = static_cast<std::size_t>(n_hi) + k_max;
    parallel_for(points.size(), threads, [&](std::size_t p) {
        // grow the symbol stream on demand: R_n is nondecreasing in n, so
        // once the longest word has recurred every shorter scan stays
        // inside the generated stream
        std::vector<Symbol> symbols;
        TorusPoint cursor = points[p];
        auto extend_to = [&](std::size_t target) {
            symbols.reserve(target);
            while (symbols.size() < target) {
                symbols.push_back(partition.cell_of(cursor));
                step_inplace(sys, cursor);
            }
        };
        std::size_t len = std::min<std::size_t>(cap, std::size_t(1) << 16);
        Repetition top;
        for (;;) {
            extend_to(len);
            top = repetition_from_symbols(symbols, static_cast<std::size_t>(n_hi));
            if (!top.censored || len >= cap) break;
            len = std::min(cap, len * 2);
        }

        std::vector<Repetition> reps;
        reps.reserve(est.ns.size());
        for (int n : est.ns) {
            auto r = (n == n_hi) ? top
                                 : repetition_from_symbols(symbols, static_cast<std::size_t>(n));
            // searched shifts count only up to k_max
            if (!r.censored && r.value > k_max) r = {k_max, true};
            if (r.censored) r.value = k_max;
            reps.push_back(r);
        }
        est.per_point[p] = std::move(reps);
    });

    est.censored.assign(est.ns.size(), 0);
    for (std::size_t ni = 0; ni < est.ns.size(); ++ni) {
        std::vector<double> logs, rates;
        for (std::size_t p = 0; p < points.size(); ++p) {
            const auto& r = est.per_point[p][ni];
            if (r.censored) {
                ++est.censored[ni];
                continue;
            }
            const double lr = std::log(static_cast<double>(r.value));
            logs.push_back(lr);
            rates.push_back(lr / est.ns[ni]);
        }
        if (est.censored[ni] * 5 >= points.size()) { // >= 20%
            int last_usable = est.ns[ni] - 1;
            throw insufficient_data_error(
                "entropy_estimate: censoring " + std::to_string(est.censored[ni]) + "/" +
                    std::to_string(points.size()) + " at n=" + std::to_string(est.ns[ni]) +
                    "; largest usable n is " + std::to_string(last_usable),
                points.size() - est.censored[ni], points.size() * 4 / 5);
        }
        est.median_log_r.push_back(median(logs));
        est.median_rate.push_back(median(rates));
        est.mean_rate.push_back(std::accumulate(rates.begin(), rates.end(), 0.0) /
                                static_cast<double>(rates.size()));
    }

    std::vector<double> xs(est.ns.begin(), est.ns.end());
    est.slope = linear_fit(xs, est.median_log_r, 0, xs.size());
    return est;
}

InteriorExponent large_interior_exponent(const SystemSpec& sys, const Partition& partition,
                                         const TorusPoint& x, int n_lo, int n_hi,
                                         int probes, u64 seed) {
    if (probes < 32) throw usage_error("large_interior_exponent: need >= 32 probes");
    if (n_lo < 1 || n_hi < n_lo + 1) throw usage_error("large_interior_exponent: bad n range");

    const auto base = itinerary(sys, x, static_cast<std::size_t>(n_hi), partition);

    auto ball_shares_word = [&](double rho, int n, u64 probe_seed) {
        Rng rng(probe_seed);
        for (int p = 0; p < probes; ++p) {
            TorusPoint y = random_point_in_ball(rng, x, rho);
            for (int j = 0; j < n; ++j) {
                if (partition.cell_of(y) != base[static_cast<std::size_t>(j)]) return false;
                step_inplace(sys, y);
            }
        }
        return true;
    };

    InteriorExponent out;
    const double t_min = std::log(1.0 / 0.25); // rho = 1/4
    const double t_max = 50.0 * std::log(2.0); // rho = 2^-50
    for (int n = n_lo; n <= n_hi; ++n) {
        // bisect on t = log(1/rho); larger t always passes once probes fit
        double lo = t_min, hi = t_max;
        const u64 pseed = derive_seed(seed, static_cast<u64>(n));
        if (ball_shares_word(std::exp(-lo), n, pseed)) {
            hi = lo;
        } else {
            for (int iter = 0; iter < 48; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (ball_shares_word(std::exp(-mid), n, pseed))
                    hi = mid;
                else
                    lo = mid;
            }
        }
        out.ns.push_back(n);
        out.rho.push_back(std::exp(-hi)); // largest tested rho that passed
    }

    std::vector<double> xs(out.ns.begin(), out.ns.end());
    std::vector<double> ys(out.rho.size());
    for (std::size_t i = 0; i < out.rho.size(); ++i) ys[i] = -std::log(out.rho[i]);
    out.fit = linear_fit(xs, ys, 0, xs.size());
    return out;
}

} // namespace rlab
