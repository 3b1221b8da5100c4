#ifndef RLAB_CONFIG_HPP
#define RLAB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlab/recurrence.hpp"
#include "rlab/rng.hpp"
#include "rlab/systems.hpp"

namespace rlab {

// TOML subset sufficient for experiment configs: [section] headers,
// key = value with strings, integers, floats, booleans and (nested,
// possibly multi-line) arrays, plus # comments. Keys are flattened to
// "section.key". No tables-in-arrays, no dates, no multiline strings.
namespace toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<bool, long long, double, std::string, Array> v;

    bool is_array() const { return std::holds_alternative<Array>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_int() const { return std::holds_alternative<long long>(v); }
    bool is_number() const { return is_int() || std::holds_alternative<double>(v); }
    double as_double() const;
    long long as_int() const;
    const std::string& as_string() const;
    bool as_bool() const;
    const Array& as_array() const;
};

using Table = std::map<std::string, Value>;

Table parse(const std::string& text);
Table parse_file(const std::string& path);

} // namespace toml

enum class ExperimentKind {
    recurrence,
    dimension,
    correlation,
    entropy,
    partition,
    longfly,
    validate,
    verify
};

ExperimentKind experiment_kind_from_string(const std::string& s);
const char* to_string(ExperimentKind kind);

struct GridConfig {
    int m_min = 0, m_max = 0;        // e^-m grid when set
    double r0 = 0.0, ratio = 0.0;    // geometric grid otherwise
    int count = 0;
    bool exponential = true;
};

struct ExperimentConfig {
    u64 master_seed = 0; // mandatory in the file, overridable on the CLI
    std::string out_dir = "out";
    unsigned threads = 0; // 0 = hardware

    // system block
    std::string system_name = "cat"; // cat | toral | doubling | expanding | rotation
    std::vector<std::vector<long long>> matrix;
    std::uint32_t expanding_m = 2;
    double rotation_alpha = 0.0; // 0 = golden default
    std::string digit_mode = "random";
    std::optional<u64> system_seed; // digit-stream seed; default derived from master

    std::optional<GridConfig> grid;

    // recurrence
    std::size_t rec_points = 200;
    u64 rec_n_max = 10000000ULL;

    // dimension
    std::size_t dim_points = 200;
    std::string dim_model = "lebesgue"; // lebesgue | empirical
    std::size_t dim_samples = 100000;

    // correlation
    std::string obs_kind = "fourier"; // fourier | bump | coordinate
    std::vector<int> obs_q = {1};
    double obs_bump_r = 0.1;
    std::size_t cor_n_max = 20;
    std::size_t cor_samples = 1000000;

    // entropy
    std::string partition_kind = "grid"; // grid | balls
    std::uint32_t grid_g = 0;            // 0 = per-system default
    double balls_s = 0.1;
    int ent_n_lo = 0, ent_n_hi = 0;      // 0 = per-system default
    std::size_t ent_points = 100;
    u64 ent_k_max = 0;                   // 0 = per-system default

    // partition diagnostics
    double part_s = 0.15;
    std::size_t part_samples = 100000;
    int part_depth = 8;

    // longfly
    double lf_r = 0.0; // 0 = e^-5
    double lf_delta = 0.5;
    double lf_epsilon = 0.2;
    std::size_t lf_points = 500;

    // verify tolerances (artifact policy, overridable)
    double tol_slope = 0.15;
    double tol_inequality = 0.2;
    double tol_entropy_rel = 0.2;
    double tol_rate_bound = 0.1;
    double longfly_min_pass = 0.95;

    SystemSpec build_system() const;
    RadiusGrid build_grid() const;       // per-system default when unset
    std::uint32_t entropy_grid_g() const;
    std::pair<int, int> entropy_n_range() const;
    u64 entropy_k_max() const;

    // canonical serialization; hashed into every report
    std::string canonical() const;
    std::string fingerprint() const; // FNV-1a 64 over canonical(), hex
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_table(const toml::Table& t);

} // namespace rlab

#endif
