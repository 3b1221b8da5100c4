#include "rlab/measure.hpp"

#include <cmath>
#include <string>

#include "rlab/errors.hpp"

namespace rlab {

MeasureModel MeasureModel::lebesgue(std::uint32_t k) {
    if (k < 1 || k > kMaxDim) throw usage_error("lebesgue: bad dimension");
    MeasureModel m;
    m.model_ = AnalyticLebesgue{k};
    return m;
}

MeasureModel MeasureModel::empirical(std::vector<TorusPoint> sample) {
    if (sample.size() < 10000)
        throw usage_error("empirical measure: need at least 1e4 samples, got " +
                          std::to_string(sample.size()));
    MeasureModel m;
    m.model_ = EmpiricalSample{std::move(sample)};
    return m;
}

MeasureModel MeasureModel::atomic_mixture(std::uint32_t k, double lebesgue_weight,
                                          std::vector<std::pair<TorusPoint, double>> atoms) {
    if (k < 1 || k > kMaxDim) throw usage_error("atomic_mixture: bad dimension");
    if (lebesgue_weight < 0.0 || lebesgue_weight > 1.0)
        throw usage_error("atomic_mixture: weight outside [0,1]");
    double total = lebesgue_weight;
    for (const auto& [p, mass] : atoms) {
        if (p.k != k) throw usage_error("atomic_mixture: atom dimension mismatch");
        if (mass < 0.0) throw usage_error("atomic_mixture: negative atom mass");
        total += mass;
    }
    if (std::abs(total - 1.0) > 1e-12) throw usage_error("atomic_mixture: masses must sum to 1");
    MeasureModel m;
    m.model_ = AtomicMixture{k, lebesgue_weight, std::move(atoms)};
    return m;
}

std::uint32_t MeasureModel::dim() const {
    if (const auto* l = std::get_if<AnalyticLebesgue>(&model_)) return l->k;
    if (const auto* e = std::get_if<EmpiricalSample>(&model_)) return e->points.front().k;
    return std::get<AtomicMixture>(model_).k;
}

namespace {

double lebesgue_ball(std::uint32_t k, double r) {
    const double side = std::min(2.0 * r, 1.0);
    double v = 1.0;
    for (std::uint32_t i = 0; i < k; ++i) v *= side;
    return v;
}

} // namespace

BallMeasure MeasureModel::ball(const TorusPoint& x, double r) const {
    if (!(r > 0.0) || r > 0.5) throw usage_error("ball_measure: r must be in (0, 1/2]");
    if (x.k != dim()) throw usage_error("ball_measure: dimension mismatch");

    if (const auto* l = std::get_if<AnalyticLebesgue>(&model_))
        return {lebesgue_ball(l->k, r), 0.0};

    if (const auto* a = std::get_if<AtomicMixture>(&model_)) {
        double v = a->lebesgue_weight * lebesgue_ball(a->k, r);
        const u64 t = radius_threshold(r);
        for (const auto& [p, mass] : a->atoms)
            if (dist_fixed(x, p) < t) v += mass;
        return {v, 0.0};
    }

    const auto& sample = std::get<EmpiricalSample>(model_).points;
    const u64 t = radius_threshold(r);
    std::size_t hits = 0;
    for (const auto& p : sample)
        if (dist_fixed(x, p) < t) ++hits;
    const double m = static_cast<double>(sample.size());
    const double p_hat = static_cast<double>(hits) / m;
    return {p_hat, std::sqrt(p_hat * (1.0 - p_hat) / m)};
}

double MeasureModel::radial_cdf(const TorusPoint& x, double s, double t) const {
    if (t <= 0.0) return 0.0;
    const double r = s * t;
    if (r > 0.5) return 1.0; // ball swallows the torus (max distance is 1/2)
    return ball(x, r).value;
}

BallMeasure ball_measure(const MeasureModel& model, const TorusPoint& x, double r) {
    return model.ball(x, r);
}

BallMeasureCurve ball_measure_curve(const MeasureModel& model, const TorusPoint& x,
                                    std::span<const double> radii) {
    BallMeasureCurve curve;
    curve.radii.assign(radii.begin(), radii.end());
    for (double r : radii) {
        const auto b = model.ball(x, r);
        curve.value.push_back(b.value);
        curve.stderr_.push_back(b.stderr_);
    }
    return curve;
}

EnvelopeFit pointwise_dimension_fit(const MeasureModel& model, const TorusPoint& x,
                                    std::span<const double> radii) {
    std::vector<double> lx, ly;
    std::size_t dropped = 0;
    for (double r : radii) {
        const auto b = model.ball(x, r);
        if (b.value > 0.0) {
            lx.push_back(std::log(r));
            ly.push_back(std::log(b.value));
        } else {
            ++dropped;
        }
    }
    if (lx.size() < 4)
        throw insufficient_data_error(
            "pointwise_dimension_fit: only " + std::to_string(lx.size()) +
                " radii with positive mass (" + std::to_string(dropped) + " dropped)",
            lx.size(), 4);
    EnvelopeFit fit = envelope_fits(lx, ly);
    fit.lower.censored_count = dropped;
    fit.upper.censored_count = dropped;
    fit.least_squares.censored_count = dropped;
    return fit;
}

double hd_estimate(const MeasureModel& model, std::span<const TorusPoint> points,
                   std::span<const double> radii) {
    if (points.size() < 50)
        throw insufficient_data_error("hd_estimate: need >= 50 points", points.size(), 50);
    std::vector<double> slopes;
    std::size_t failed = 0;
    for (const auto& x : points) {
        try {
            slopes.push_back(pointwise_dimension_fit(model, x, radii).lower.slope);
        } catch (const insufficient_data_error&) {
            ++failed;
        }
    }
    if (failed * 5 > points.size()) // > 20%
        throw insufficient_data_error("hd_estimate: insufficient data at " +
                                          std::to_string(failed) + " of " +
                                          std::to_string(points.size()) + " points",
                                      points.size() - failed, points.size() * 4 / 5);
    return percentile(std::move(slopes), 0.95);
}

InequalityReport inequality_check(std::span<const EnvelopeFit> recurrence_fits,
                                  std::span<const EnvelopeFit> dimension_fits,
                                  double tol) {
    if (recurrence_fits.size() != dimension_fits.size())
        throw usage_error("inequality_check: mismatched point sets");
    if (recurrence_fits.empty()) throw usage_error("inequality_check: empty input");

    InequalityReport rep;
    rep.tol = tol;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < recurrence_fits.size(); ++i) {
        InequalityRow row;
        row.point_index = i;
        row.r_lower = recurrence_fits[i].lower.slope;
        row.r_upper = recurrence_fits[i].upper.slope;
        row.d_lower = dimension_fits[i].lower.slope;
        row.d_upper = dimension_fits[i].upper.slope;
        row.lower_ok = row.r_lower <= row.d_lower + tol;
        row.upper_ok = row.r_upper <= row.d_upper + tol;
        if (row.lower_ok && row.upper_ok) ++ok;
        rep.rows.push_back(row);
    }
    rep.fraction_ok = static_cast<double>(ok) / static_cast<double>(rep.rows.size());
    rep.aggregate_pass = rep.fraction_ok >= 0.9;
    return rep;
}

} // namespace rlab
