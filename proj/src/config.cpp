#include "rlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rlab/errors.hpp"

namespace rlab {

namespace toml {

double Value::as_double() const {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<long long>(&v)) return static_cast<double>(*i);
    throw usage_error("config: expected a number");
}

long long Value::as_int() const {
    if (const auto* i = std::get_if<long long>(&v)) return *i;
    throw usage_error("config: expected an integer");
}

const std::string& Value::as_string() const {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw usage_error("config: expected a string");
}

bool Value::as_bool() const {
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    throw usage_error("config: expected a boolean");
}

const Array& Value::as_array() const {
    if (const auto* a = std::get_if<Array>(&v)) return *a;
    throw usage_error("config: expected an array");
}

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() {
        char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw usage_error("config parse error at line " + std::to_string(line) + ": " + msg);
    }
};

void skip_ws_and_comments(Cursor& c, bool cross_lines) {
    while (!c.done()) {
        const char ch = c.peek();
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            c.take();
        } else if (ch == '#') {
            while (!c.done() && c.peek() != '\n') c.take();
        } else if (ch == '\n' && cross_lines) {
            c.take();
        } else {
            break;
        }
    }
}

std::string parse_bare_key(Cursor& c) {
    std::string key;
    while (!c.done()) {
        const char ch = c.peek();
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')
            key += c.take();
        else
            break;
    }
    if (key.empty()) c.fail("expected a key");
    return key;
}

Value parse_value(Cursor& c);

Value parse_string(Cursor& c) {
    c.take(); // opening quote
    std::string s;
    while (!c.done() && c.peek() != '"') {
        char ch = c.take();
        if (ch == '\\' && !c.done()) {
            const char esc = c.take();
            switch (esc) {
                case 'n': ch = '\n'; break;
                case 't': ch = '\t'; break;
                case '"': ch = '"'; break;
                case '\\': ch = '\\'; break;
                default: c.fail(std::string("unsupported escape \\") + esc);
            }
        } else if (ch == '\n') {
            c.fail("unterminated string");
        }
        s += ch;
    }
    if (c.done()) c.fail("unterminated string");
    c.take(); // closing quote
    return Value{s};
}

Value parse_array(Cursor& c) {
    c.take(); // '['
    Array a;
    for (;;) {
        skip_ws_and_comments(c, true);
        if (c.done()) c.fail("unterminated array");
        if (c.peek() == ']') {
            c.take();
            break;
        }
        a.push_back(parse_value(c));
        skip_ws_and_comments(c, true);
        if (c.done()) c.fail("unterminated array");
        if (c.peek() == ',') {
            c.take();
        } else if (c.peek() != ']') {
            c.fail("expected ',' or ']' in array");
        }
    }
    return Value{std::move(a)};
}

Value parse_scalar(Cursor& c) {
    std::string token;
    while (!c.done()) {
        const char ch = c.peek();
        if (ch == '\n' || ch == ',' || ch == ']' || ch == '#' || ch == ' ' || ch == '\t' ||
            ch == '\r')
            break;
        token += c.take();
    }
    if (token.empty()) c.fail("expected a value");
    if (token == "true") return Value{true};
    if (token == "false") return Value{false};

    const bool looks_float = token.find_first_of(".eE") != std::string::npos &&
                             token.find("0x") == std::string::npos;
    if (!looks_float) {
        long long iv = 0;
        std::string digits = token;
        // TOML allows underscores in numbers
        digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), iv);
        if (ec == std::errc() && p == digits.data() + digits.size()) return Value{iv};
    }
    double dv = 0.0;
    std::string digits = token;
    digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dv);
    if (ec == std::errc() && p == digits.data() + digits.size()) return Value{dv};
    c.fail("cannot parse value '" + token + "'");
}

Value parse_value(Cursor& c) {
    skip_ws_and_comments(c, false);
    if (c.done()) c.fail("expected a value");
    const char ch = c.peek();
    if (ch == '"') return parse_string(c);
    if (ch == '[') return parse_array(c);
    return parse_scalar(c);
}

} // namespace

Table parse(const std::string& text) {
    Table table;
    Cursor c{text};
    std::string section;
    while (true) {
        skip_ws_and_comments(c, true);
        if (c.done()) break;
        if (c.peek() == '[') {
            c.take();
            section = parse_bare_key(c);
            skip_ws_and_comments(c, false);
            if (c.done() || c.peek() != ']') c.fail("expected ']' after section name");
            c.take();
            continue;
        }
        const std::string key = parse_bare_key(c);
        skip_ws_and_comments(c, false);
        if (c.done() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
        c.take();
        Value v = parse_value(c);
        skip_ws_and_comments(c, false);
        if (!c.done() && c.peek() != '\n') c.fail("unexpected trailing characters after value");
        const std::string full = section.empty() ? key : section + "." + key;
        if (table.count(full)) c.fail("duplicate key '" + full + "'");
        table.emplace(full, std::move(v));
    }
    return table;
}

Table parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace toml

ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "recurrence") return ExperimentKind::recurrence;
    if (s == "dimension") return ExperimentKind::dimension;
    if (s == "correlation") return ExperimentKind::correlation;
    if (s == "entropy") return ExperimentKind::entropy;
    if (s == "partition") return ExperimentKind::partition;
    if (s == "longfly") return ExperimentKind::longfly;
    if (s == "validate") return ExperimentKind::validate;
    if (s == "verify") return ExperimentKind::verify;
    throw usage_error("unknown experiment kind: " + s);
}

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::recurrence: return "recurrence";
        case ExperimentKind::dimension: return "dimension";
        case ExperimentKind::correlation: return "correlation";
        case ExperimentKind::entropy: return "entropy";
        case ExperimentKind::partition: return "partition";
        case ExperimentKind::longfly: return "longfly";
        case ExperimentKind::validate: return "validate";
        case ExperimentKind::verify: return "verify";
    }
    return "?";
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "seed", "out_dir", "threads",
        "system.system", "system.matrix", "system.m", "system.alpha", "system.digits",
        "system.seed",
        "grid.m_min", "grid.m_max", "grid.r0", "grid.ratio", "grid.count",
        "recurrence.points", "recurrence.n_max",
        "dimension.points", "dimension.model", "dimension.samples",
        "correlation.observable", "correlation.q", "correlation.bump_r",
        "correlation.n_max", "correlation.samples",
        "entropy.partition", "entropy.g", "entropy.s", "entropy.n_min", "entropy.n_max",
        "entropy.points", "entropy.k_max",
        "partition.s", "partition.samples", "partition.depth",
        "longfly.r", "longfly.delta", "longfly.epsilon", "longfly.points",
        "verify.tol_slope", "verify.tol_inequality", "verify.tol_entropy_rel",
        "verify.tol_rate_bound", "verify.longfly_min_pass",
    };
    return keys;
}

long long require_range(long long v, long long lo, long long hi, const std::string& key) {
    if (v < lo || v > hi)
        throw usage_error("config: " + key + "=" + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

double require_range(double v, double lo, double hi, const std::string& key) {
    if (!(v >= lo) || !(v <= hi))
        throw usage_error("config: " + key + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    return v;
}

} // namespace

ExperimentConfig config_from_table(const toml::Table& t) {
    for (const auto& [key, value] : t)
        if (!known_keys().count(key)) throw usage_error("config: unknown key '" + key + "'");

    ExperimentConfig cfg;
    if (!t.count("seed")) throw usage_error("config: master 'seed' is mandatory");
    cfg.master_seed = static_cast<u64>(t.at("seed").as_int());

    auto get_int = [&](const char* key, long long dflt, long long lo, long long hi) {
        auto it = t.find(key);
        return it == t.end() ? dflt : require_range(it->second.as_int(), lo, hi, key);
    };
    auto get_double = [&](const char* key, double dflt, double lo, double hi) {
        auto it = t.find(key);
        return it == t.end() ? dflt : require_range(it->second.as_double(), lo, hi, key);
    };
    auto get_string = [&](const char* key, const std::string& dflt) {
        auto it = t.find(key);
        return it == t.end() ? dflt : it->second.as_string();
    };

    cfg.out_dir = get_string("out_dir", cfg.out_dir);
    cfg.threads = static_cast<unsigned>(get_int("threads", 0, 0, 4096));

    cfg.system_name = get_string("system.system", cfg.system_name);
    if (auto it = t.find("system.matrix"); it != t.end()) {
        for (const auto& row : it->second.as_array()) {
            std::vector<long long> r;
            for (const auto& v : row.as_array()) r.push_back(v.as_int());
            cfg.matrix.push_back(std::move(r));
        }
    }
    cfg.expanding_m = static_cast<std::uint32_t>(get_int("system.m", 2, 2, 1u << 20));
    cfg.rotation_alpha = get_double("system.alpha", 0.0, 0.0, 1.0);
    cfg.digit_mode = get_string("system.digits", cfg.digit_mode);
    if (cfg.digit_mode != "random" && cfg.digit_mode != "zero")
        throw usage_error("config: system.digits must be 'random' or 'zero'");
    if (auto it = t.find("system.seed"); it != t.end())
        cfg.system_seed = static_cast<u64>(it->second.as_int());

    if (t.count("grid.m_min") || t.count("grid.m_max") || t.count("grid.r0")) {
        GridConfig g;
        if (t.count("grid.r0")) {
            g.exponential = false;
            g.r0 = get_double("grid.r0", 0.1, 1e-12, 0.5);
            g.ratio = get_double("grid.ratio", 0.5, 1e-6, 0.999999);
            g.count = static_cast<int>(get_int("grid.count", 5, 2, 1000));
        } else {
            g.exponential = true;
            g.m_min = static_cast<int>(get_int("grid.m_min", 2, 1, 60));
            g.m_max = static_cast<int>(get_int("grid.m_max", 7, 1, 60));
        }
        cfg.grid = g;
    }

    cfg.rec_points = static_cast<std::size_t>(get_int("recurrence.points", 200, 1, 1000000));
    cfg.rec_n_max = static_cast<u64>(get_int("recurrence.n_max", 10000000, 1, 4000000000LL));

    cfg.dim_points = static_cast<std::size_t>(get_int("dimension.points", 200, 1, 1000000));
    cfg.dim_model = get_string("dimension.model", cfg.dim_model);
    if (cfg.dim_model != "lebesgue" && cfg.dim_model != "empirical")
        throw usage_error("config: dimension.model must be 'lebesgue' or 'empirical'");
    cfg.dim_samples = static_cast<std::size_t>(get_int("dimension.samples", 100000, 10000, 100000000));

    cfg.obs_kind = get_string("correlation.observable", cfg.obs_kind);
    if (auto it = t.find("correlation.q"); it != t.end()) {
        cfg.obs_q.clear();
        for (const auto& v : it->second.as_array())
            cfg.obs_q.push_back(static_cast<int>(v.as_int()));
    }
    cfg.obs_bump_r = get_double("correlation.bump_r", cfg.obs_bump_r, 1e-9, 0.25);
    cfg.cor_n_max = static_cast<std::size_t>(get_int("correlation.n_max", 20, 1, 100000));
    cfg.cor_samples = static_cast<std::size_t>(get_int("correlation.samples", 1000000, 1000, 1000000000));

    cfg.partition_kind = get_string("entropy.partition", cfg.partition_kind);
    if (cfg.partition_kind != "grid" && cfg.partition_kind != "balls")
        throw usage_error("config: entropy.partition must be 'grid' or 'balls'");
    cfg.grid_g = static_cast<std::uint32_t>(get_int("entropy.g", 0, 0, 20));
    cfg.balls_s = get_double("entropy.s", cfg.balls_s, 1e-6, 0.2499);
    cfg.ent_n_lo = static_cast<int>(get_int("entropy.n_min", 0, 0, 1000));
    cfg.ent_n_hi = static_cast<int>(get_int("entropy.n_max", 0, 0, 1000));
    cfg.ent_points = static_cast<std::size_t>(get_int("entropy.points", 100, 1, 1000000));
    cfg.ent_k_max = static_cast<u64>(get_int("entropy.k_max", 0, 0, 1000000000LL));

    cfg.part_s = get_double("partition.s", cfg.part_s, 1e-6, 0.2499);
    cfg.part_samples = static_cast<std::size_t>(get_int("partition.samples", 100000, 100, 100000000));
    cfg.part_depth = static_cast<int>(get_int("partition.depth", 8, 1, 30));

    cfg.lf_r = get_double("longfly.r", 0.0, 0.0, 0.5);
    cfg.lf_delta = get_double("longfly.delta", cfg.lf_delta, 1e-6, 10.0);
    cfg.lf_epsilon = get_double("longfly.epsilon", cfg.lf_epsilon, 1e-6, 0.999999);
    cfg.lf_points = static_cast<std::size_t>(get_int("longfly.points", 500, 1, 1000000));

    cfg.tol_slope = get_double("verify.tol_slope", cfg.tol_slope, 0.0, 10.0);
    cfg.tol_inequality = get_double("verify.tol_inequality", cfg.tol_inequality, 0.0, 10.0);
    cfg.tol_entropy_rel = get_double("verify.tol_entropy_rel", cfg.tol_entropy_rel, 0.0, 1.0);
    cfg.tol_rate_bound = get_double("verify.tol_rate_bound", cfg.tol_rate_bound, 0.0, 10.0);
    cfg.longfly_min_pass = get_double("verify.longfly_min_pass", cfg.longfly_min_pass, 0.0, 1.0);

    cfg.build_system(); // validate the system block eagerly
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_table(toml::parse_file(path));
}

SystemSpec ExperimentConfig::build_system() const {
    const u64 stream_seed = system_seed ? *system_seed : derive_seed(master_seed, 0xd161);
    const DigitMode mode = (digit_mode == "zero") ? DigitMode::zero : DigitMode::random;
    if (system_name == "cat") return make_cat_map();
    if (system_name == "toral") {
        if (matrix.empty()) throw usage_error("config: system.matrix required for toral systems");
        return make_toral(IntMatrix::from_rows(matrix));
    }
    if (system_name == "doubling") return make_doubling(stream_seed, mode);
    if (system_name == "expanding") return make_expanding(expanding_m, stream_seed, mode);
    if (system_name == "rotation") {
        u64 alpha = kGoldenAlpha;
        if (rotation_alpha != 0.0) {
            // nearest 64-bit fraction
            const long double v = static_cast<long double>(rotation_alpha) * 0x1.0p64L + 0.5L;
            alpha = static_cast<u64>(std::floor(v)); // wraps for alpha ~ 1
        }
        if (alpha == 0) throw usage_error("config: rotation alpha must be nonzero");
        return make_rotation(alpha);
    }
    throw usage_error("config: unknown system '" + system_name + "'");
}

RadiusGrid ExperimentConfig::build_grid() const {
    if (grid) {
        if (grid->exponential) return RadiusGrid::exponential(grid->m_min, grid->m_max);
        return RadiusGrid::geometric(grid->r0, grid->ratio, grid->count);
    }
    // defaults keep E[tau] ~ r^-k within the iteration budget
    const std::uint32_t k = build_system().dim();
    return (k == 1) ? RadiusGrid::exponential(3, 9) : RadiusGrid::exponential(2, 7);
}

std::uint32_t ExperimentConfig::entropy_grid_g() const {
    if (grid_g > 0) return grid_g;
    const std::string& s = system_name;
    if (s == "cat" || s == "toral") return 3;
    if (s == "rotation") return 4;
    return 1; // doubling / expanding
}

std::pair<int, int> ExperimentConfig::entropy_n_range() const {
    if (ent_n_lo > 0 && ent_n_hi > 0) return {ent_n_lo, ent_n_hi};
    const std::string& s = system_name;
    if (s == "cat" || s == "toral") return {8, 14};
    if (s == "rotation") return {20, 40};
    return {10, 20}; // doubling / expanding
}

u64 ExperimentConfig::entropy_k_max() const {
    if (ent_k_max > 0) return ent_k_max;
    // log R_n grows like n*h plus the first-symbol information H(xi) - h,
    // so the budget must absorb the partition constant, not just e^{n h}
    const std::string& s = system_name;
    if (s == "rotation") return 200000ULL;
    if (s == "cat") return 200000000ULL;
    if (s == "toral") return (matrix.size() <= 2) ? 200000000ULL : 16000000ULL;
    return 16000000ULL; // doubling / expanding
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "seed=" << master_seed << ";system=" << system_name << ";m=" << expanding_m
       << ";alpha=" << rotation_alpha << ";digits=" << digit_mode;
    if (system_seed) os << ";system_seed=" << *system_seed;
    os << ";matrix=";
    for (const auto& row : matrix) {
        os << "[";
        for (long long v : row) os << v << ",";
        os << "]";
    }
    if (grid) {
        if (grid->exponential)
            os << ";grid=e," << grid->m_min << "," << grid->m_max;
        else
            os << ";grid=g," << grid->r0 << "," << grid->ratio << "," << grid->count;
    }
    os << ";rec=" << rec_points << "," << rec_n_max;
    os << ";dim=" << dim_points << "," << dim_model << "," << dim_samples;
    os << ";cor=" << obs_kind << ",";
    for (int q : obs_q) os << q << "_";
    os << "," << obs_bump_r << "," << cor_n_max << "," << cor_samples;
    os << ";ent=" << partition_kind << "," << grid_g << "," << balls_s << "," << ent_n_lo << ","
       << ent_n_hi << "," << ent_points << "," << ent_k_max;
    os << ";part=" << part_s << "," << part_samples << "," << part_depth;
    os << ";lf=" << lf_r << "," << lf_delta << "," << lf_epsilon << "," << lf_points;
    os << ";tol=" << tol_slope << "," << tol_inequality << "," << tol_entropy_rel << ","
       << tol_rate_bound << "," << longfly_min_pass;
    return os.str();
}

std::string ExperimentConfig::fingerprint() const {
    const std::string s = canonical();
    u64 h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) buf[15 - i] = hex[(h >> (4 * i)) & 0xF];
    buf[16] = '\0';
    return std::string(buf);
}

} // namespace rlab
