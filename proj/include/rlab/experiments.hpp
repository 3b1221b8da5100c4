#ifndef RLAB_EXPERIMENTS_HPP
#define RLAB_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlab/config.hpp"
#include "rlab/csv.hpp"
#include "rlab/measure.hpp"
#include "rlab/mixing.hpp"
#include "rlab/recurrence.hpp"
#include "rlab/symbolic.hpp"
#include "rlab/systems.hpp"

namespace rlab {

inline constexpr const char* kVersion = "0.1.0";

// Experiment runners. Each sweep derives one RNG stream per point from the
// master seed and stores results keyed by point index, so tables are
// byte-identical for any worker count. Per-point estimation failures are
// recorded rows, never silent drops.

std::vector<TorusPoint> sample_points(u64 master_seed, std::size_t count, std::uint32_t k);

struct RecurrenceOutcome {
    RadiusGrid grid;
    std::vector<TorusPoint> points;
    std::vector<u64> point_seeds;
    std::vector<ReturnCurve> curves;
    std::vector<std::optional<EnvelopeFit>> fits;
    std::vector<std::string> fit_errors; // empty string when fit succeeded
    std::optional<double> median_slope_ls;
    std::optional<BootstrapInterval> slope_ci;

    CsvTable table() const;
    nlohmann::json summary(const ExperimentConfig& cfg) const;
};

RecurrenceOutcome run_recurrence(const ExperimentConfig& cfg);

struct DimensionOutcome {
    RadiusGrid grid;
    std::vector<TorusPoint> points;
    std::vector<std::optional<EnvelopeFit>> fits;
    std::vector<std::string> fit_errors;
    MeasureModel model = MeasureModel::lebesgue(1);
    std::optional<double> median_slope_ls;
    std::optional<double> hd;

    CsvTable table() const;
    nlohmann::json summary(const ExperimentConfig& cfg) const;
};

DimensionOutcome run_dimension(const ExperimentConfig& cfg);

struct CorrelationOutcome {
    CorrelationSeries series;
    DecayClassification classification;

    CsvTable table() const;
    nlohmann::json summary(const ExperimentConfig& cfg) const;
};

CorrelationOutcome run_correlation(const ExperimentConfig& cfg);

struct EntropyOutcome {
    EntropyEstimate estimate;
    std::vector<TorusPoint> points;

    CsvTable table() const;
    nlohmann::json summary(const ExperimentConfig& cfg) const;
};

EntropyOutcome run_entropy(const ExperimentConfig& cfg);

struct PartitionOutcome {
    PartitionDiagnostics diagnostics;
    std::vector<double> rho; // per center

    nlohmann::json summary(const ExperimentConfig& cfg) const;
};

PartitionOutcome run_partition(const ExperimentConfig& cfg);

struct LongflyOutcome {
    std::vector<LongFlyReport> reports;
    double pass_rate = 0.0;

    CsvTable table() const;
    nlohmann::json summary(const ExperimentConfig& cfg) const;
};

LongflyOutcome run_longfly(const ExperimentConfig& cfg);

nlohmann::json run_validate(const ExperimentConfig& cfg);
nlohmann::json ergodicity_report_json(const ErgodicityReport& rep);

struct Prediction {
    std::string id;
    std::string description;
    std::string expected;
    std::string observed;
    bool applicable = true;
    bool pass = false;
};

struct VerificationReport {
    std::vector<Prediction> predictions;
    bool overall_pass = false;
    std::string verdict;
    nlohmann::json detail; // sub-run summaries and attached errors

    nlohmann::json to_json(const ExperimentConfig& cfg) const;
};

VerificationReport run_verify(const ExperimentConfig& cfg, const std::string& out_dir);

nlohmann::json run_meta(const ExperimentConfig& cfg, double wall_seconds);

// writes table + summary (+ gnuplot companions); returns summary
nlohmann::json write_experiment(ExperimentKind kind, const ExperimentConfig& cfg,
                                const std::string& out_dir);

} // namespace rlab

#endif
