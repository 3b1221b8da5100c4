#ifndef RLAB_MEASURE_HPP
#define RLAB_MEASURE_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "rlab/fixed_point.hpp"
#include "rlab/stats.hpp"

namespace rlab {

// Ball-measure models. Balls are open max-metric balls (cubes), matching
// the exact fixed-point comparisons used everywhere else. All zoo systems
// preserve Lebesgue, so the analytic model is the default; the empirical
// model keeps the estimation pipeline honest, and atomic mixtures exercise
// the thin-radius construction on singular parts.

struct AnalyticLebesgue {
    std::uint32_t k = 1;
};

struct EmpiricalSample {
    std::vector<TorusPoint> points; // M >= 1e4 i.i.d. draws from mu
};

struct AtomicMixture {
    std::uint32_t k = 1;
    double lebesgue_weight = 1.0; // in [0,1]; atom masses sum to 1 - weight
    std::vector<std::pair<TorusPoint, double>> atoms;
};

struct BallMeasure {
    double value = 0.0;
    double stderr_ = 0.0;
};

class MeasureModel {
public:
    static MeasureModel lebesgue(std::uint32_t k);
    static MeasureModel empirical(std::vector<TorusPoint> sample);
    static MeasureModel atomic_mixture(std::uint32_t k, double lebesgue_weight,
                                       std::vector<std::pair<TorusPoint, double>> atoms);

    std::uint32_t dim() const;
    bool is_empirical() const { return std::holds_alternative<EmpiricalSample>(model_); }

    // mu(B(x,r)) for r in (0, 1/2]
    BallMeasure ball(const TorusPoint& x, double r) const;

    // t -> mu(B(x, s*t)) for t in [0, 2]; radial view used by the
    // thin-radius construction
    double radial_cdf(const TorusPoint& x, double s, double t) const;

private:
    std::variant<AnalyticLebesgue, EmpiricalSample, AtomicMixture> model_;
};

BallMeasure ball_measure(const MeasureModel& model, const TorusPoint& x, double r);

struct BallMeasureCurve {
    std::vector<double> radii;
    std::vector<double> value;
    std::vector<double> stderr_;
};

BallMeasureCurve ball_measure_curve(const MeasureModel& model, const TorusPoint& x,
                                    std::span<const double> radii);

// Envelope fits of log mu(B(x,r)) against log r; radii with zero empirical
// mass are dropped, >= 4 must survive.
EnvelopeFit pointwise_dimension_fit(const MeasureModel& model, const TorusPoint& x,
                                    std::span<const double> radii);

// 95th percentile of per-point lower slopes over >= 50 sample points;
// finite-sample stand-in for the essential supremum.
double hd_estimate(const MeasureModel& model, std::span<const TorusPoint> points,
                   std::span<const double> radii);

struct InequalityRow {
    std::size_t point_index = 0;
    double r_lower = 0.0, r_upper = 0.0;
    double d_lower = 0.0, d_upper = 0.0;
    bool lower_ok = false, upper_ok = false;
};

struct InequalityReport {
    std::vector<InequalityRow> rows;
    double tol = 0.2;
    double fraction_ok = 0.0; // fraction of points passing both sides
    bool aggregate_pass = false;
};

// Per-point check that recurrence slopes do not exceed dimension slopes by
// more than tol; aggregate passes at >= 90%.
InequalityReport inequality_check(std::span<const EnvelopeFit> recurrence_fits,
                                  std::span<const EnvelopeFit> dimension_fits,
                                  double tol = 0.2);

} // namespace rlab

#endif
