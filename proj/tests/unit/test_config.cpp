#include <doctest.h>

#include "rlab/config.hpp"
#include "rlab/experiments.hpp"

using namespace rlab;

namespace {

const char* kExample = R"(
# experiment configuration
seed = 42
out_dir = "out"
threads = 2

[system]
system = "toral"
matrix = [[2, 1],
          [1, 1]]

[grid]
m_min = 3
m_max = 7

[recurrence]
points = 16
n_max = 100000

[correlation]
q = [1, 0]
samples = 20000
n_max = 10

[verify]
tol_slope = 0.2
)";

} // namespace

TEST_CASE("toml subset round trip") {
    const auto t = toml::parse(kExample);
    CHECK(t.at("seed").as_int() == 42);
    CHECK(t.at("out_dir").as_string() == "out");
    CHECK(t.at("system.system").as_string() == "toral");
    const auto& m = t.at("system.matrix").as_array();
    REQUIRE(m.size() == 2);
    CHECK(m[0].as_array()[0].as_int() == 2);
    CHECK(m[1].as_array()[1].as_int() == 1);
    CHECK(t.at("verify.tol_slope").as_double() == doctest::Approx(0.2));
}

TEST_CASE("toml scalars, booleans, comments, underscores") {
    const auto t = toml::parse("a = true\nb = 1_000_000\nc = -0.5e2 # trailing\nd = \"x y\"\n");
    CHECK(t.at("a").as_bool());
    CHECK(t.at("b").as_int() == 1000000);
    CHECK(t.at("c").as_double() == doctest::Approx(-50.0));
    CHECK(t.at("d").as_string() == "x y");
}

TEST_CASE("toml parse errors carry line numbers") {
    CHECK_THROWS_AS(toml::parse("a 5\n"), usage_error);
    CHECK_THROWS_AS(toml::parse("a = [1, 2\n"), usage_error);
    CHECK_THROWS_AS(toml::parse("a = \"unterminated\n"), usage_error);
    CHECK_THROWS_AS(toml::parse("a = 1\na = 2\n"), usage_error);
}

TEST_CASE("config schema validation") {
    const auto cfg = config_from_table(toml::parse(kExample));
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.rec_points == 16);
    CHECK(cfg.threads == 2);
    CHECK(cfg.grid.has_value());
    CHECK(cfg.build_grid().size() == 5);
    CHECK(cfg.build_system().dim() == 2);

    // unknown keys are rejected
    CHECK_THROWS_AS(config_from_table(toml::parse("seed = 1\nbogus = 2\n")), usage_error);
    // master seed is mandatory
    CHECK_THROWS_AS(config_from_table(toml::parse("out_dir = \"x\"\n")), usage_error);
    // out-of-range values are rejected
    CHECK_THROWS_AS(config_from_table(toml::parse("seed = 1\n[recurrence]\npoints = 0\n")),
                    usage_error);
    // bad system names are rejected
    CHECK_THROWS_AS(config_from_table(toml::parse("seed = 1\n[system]\nsystem = \"lorenz\"\n")),
                    usage_error);
}

TEST_CASE("default grids and entropy ranges per system") {
    auto cfg = config_from_table(toml::parse("seed = 5\n[system]\nsystem = \"cat\"\n"));
    CHECK(cfg.build_grid().radii.size() == 6); // e^-2..e^-7
    CHECK(cfg.entropy_grid_g() == 3);
    CHECK(cfg.entropy_n_range() == std::pair<int, int>{8, 14});

    auto dbl = config_from_table(toml::parse("seed = 5\n[system]\nsystem = \"doubling\"\n"));
    CHECK(dbl.build_grid().radii.size() == 7); // e^-3..e^-9
    CHECK(dbl.entropy_grid_g() == 1);

    auto rot = config_from_table(toml::parse("seed = 5\n[system]\nsystem = \"rotation\"\n"));
    CHECK(rot.entropy_n_range() == std::pair<int, int>{20, 40});
}

TEST_CASE("fingerprint detects tampered configs") {
    auto a = config_from_table(toml::parse(kExample));
    auto b = a;
    CHECK(a.fingerprint() == b.fingerprint());
    b.rec_n_max += 1;
    CHECK(a.fingerprint() != b.fingerprint());
    b = a;
    b.master_seed ^= 1;
    CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("rotation alpha defaults to the golden fraction") {
    auto rot = config_from_table(toml::parse("seed = 5\n[system]\nsystem = \"rotation\"\n"));
    const auto sys = rot.build_system();
    CHECK(std::get<CircleRotation>(sys.map).alpha == kGoldenAlpha);
}

TEST_CASE("experiment kinds parse") {
    CHECK(experiment_kind_from_string("verify") == ExperimentKind::verify);
    CHECK_THROWS_AS(experiment_kind_from_string("nope"), usage_error);
}
