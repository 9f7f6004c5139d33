#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qpb/config.hpp"
#include "qpb/io.hpp"
#include "qpb/run.hpp"

using qpb::CoefficientField;
using qpb::cplx;
using qpb::FrequencySystem;
using qpb::MultiIndex;
using qpb::RunConfig;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("qpb_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("field CSV round trip") {
    const auto dir = temp_dir("csv");
    const FrequencySystem fs({1.0, std::sqrt(2.0)}, 3);
    RunConfig config;
    config.nu = 2;
    config.omega = {1.0, std::sqrt(2.0)};
    config.N = 3;
    config.seed = 71;
    const auto [c0, c0p] = qpb::gen_init(config, fs);

    qpb::write_field_csv(dir / "f.csv", c0);
    const std::string text = slurp(dir / "f.csv");
    CHECK(text.substr(0, text.find('\n')) == "n1,n2,re,im");

    const CoefficientField back = qpb::read_field_csv(dir / "f.csv", 2, 3);
    CHECK(qpb::sup_abs_diff(back, c0) == 0.0);
}

TEST_CASE("config parsing") {
    SUBCASE("defaults round trip") {
        const RunConfig c;
        const auto j = c.to_json();
        CHECK(j["nu"] == 1);
        CHECK(j["N"] == 6);
        CHECK(j["t_end"] == "auto");
        CHECK(j["threshold_divisor"] == 192);
    }
    SUBCASE("JSON with auto and overrides") {
        const auto j = nlohmann::json::parse(
            R"({"nu":2,"omega":[1.0,1.4142135623730951],"N":4,"t_end":"auto","J":64})");
        RunConfig c = RunConfig::from_json(j);
        CHECK(c.nu == 2);
        CHECK_FALSE(c.t_end.has_value());
        c.apply_override("t_end=0.25");
        CHECK(c.t_end == 0.25);
        c.apply_override("t_end=auto");
        CHECK_FALSE(c.t_end.has_value());
        c.apply_override("omega=1,0.5");
        CHECK(c.omega == std::vector<double>{1.0, 0.5});
        c.apply_override("real_data=false");
        CHECK_FALSE(c.real_data);
    }
    SUBCASE("unknown keys and bad values are rejected") {
        CHECK_THROWS_AS(RunConfig::from_json(
                            nlohmann::json::parse(R"({"nn":1})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(RunConfig::from_json(
                            nlohmann::json::parse(R"({"J":7})")),
                        std::invalid_argument);
        CHECK_THROWS_AS(RunConfig::from_json(
                            nlohmann::json::parse(R"({"threshold_divisor":50})")),
                        std::invalid_argument);
        RunConfig c;
        CHECK_THROWS_AS(c.apply_override("bogus=1"), std::invalid_argument);
    }
}

TEST_CASE("initial data generator") {
    const FrequencySystem fs({1.0}, 6);
    RunConfig config;
    config.seed = 72;

    SUBCASE("deterministic and envelope-respecting") {
        const auto [a0, a0p] = qpb::gen_init(config, fs);
        const auto [b0, b0p] = qpb::gen_init(config, fs);
        CHECK(qpb::sup_abs_diff(a0, b0) == 0.0);
        CHECK(qpb::sup_abs_diff(a0p, b0p) == 0.0);
        const qpb::DecayEnvelope env(config.B, config.kappa);
        CHECK(qpb::check_envelope(a0, env, 1.0, 2.0).pass);
        CHECK(qpb::check_envelope(a0p, env, fs.omega_l1(), 2.0).pass);
    }
    SUBCASE("B = 0 produces zero fields") {
        RunConfig zero = config;
        zero.B = 0.0;  // bypasses validate(); the generator alone allows it
        const auto [c0, c0p] = qpb::gen_init(zero, fs);
        CHECK(c0.empty());
        CHECK(c0p.empty());
    }
    SUBCASE("conjugate symmetry of real data") {
        const auto [c0, c0p] = qpb::gen_init(config, fs);
        for (const MultiIndex& n : fs.modes()) {
            CHECK(c0.at(n) == std::conj(c0.at(-n)));
            CHECK(c0p.at(n) == std::conj(c0p.at(-n)));
        }
        CHECK(c0.at(MultiIndex({0})).imag() == 0.0);
    }
    SUBCASE("growing N extends instead of reshuffling") {
        RunConfig big = config;
        big.N = 8;
        const FrequencySystem fs8({1.0}, 8);
        const auto [small0, small0p] = qpb::gen_init(config, fs);
        const auto [big0, big0p] = qpb::gen_init(big, fs8);
        for (const auto& [n, v] : small0.entries()) CHECK(big0.at(n) == v);
        for (const auto& [n, v] : small0p.entries()) CHECK(big0p.at(n) == v);
    }
}

TEST_CASE("manifest determinism") {
    RunConfig config;
    config.N = 4;
    config.J = 16;
    config.seed = 73;
    const auto dir_a = temp_dir("runa");
    const auto dir_b = temp_dir("runb");
    const auto ma = qpb::run(config, dir_a, true);
    const auto mb = qpb::run(config, dir_b, true);
    CHECK(ma.converged);
    CHECK(mb.converged);
    CHECK(slurp(dir_a / "manifest.json") == slurp(dir_b / "manifest.json"));
    CHECK(slurp(dir_a / "c0.csv") == slurp(dir_b / "c0.csv"));
    CHECK(slurp(dir_a / "c0p.csv") == slurp(dir_b / "c0p.csv"));
    for (const auto& entry :
         std::filesystem::directory_iterator(dir_a / "trajectory"))
        CHECK(slurp(entry.path()) ==
              slurp(dir_b / "trajectory" / entry.path().filename()));
}

TEST_CASE("default run report card") {
    // The default desk configuration: everything except the residual-order
    // ratio passes; that ratio is noise-limited at this h (see README).
    RunConfig config;
    config.seed = 74;
    const auto dir =
        std::filesystem::temp_directory_path() / "qpb_default_run_none";
    std::filesystem::remove_all(dir);
    const auto manifest = qpb::run(config, dir, false);
    CHECK(manifest.converged);
    for (const auto& r : manifest.reports) {
        if (r.name == "residual-order") continue;
        INFO(r.name, " margin=", r.margin);
        CHECK(r.pass);
    }
    CHECK(std::filesystem::exists(dir) == false);  // nothing written
}

TEST_CASE("run records non-convergence instead of failing") {
    RunConfig config;
    config.N = 4;
    config.J = 16;
    config.kmax = 1;
    config.seed = 75;
    const auto dir = temp_dir("kmax1");
    const auto manifest = qpb::run(config, dir, true);
    CHECK_FALSE(manifest.converged);
    CHECK_FALSE(manifest.all_pass);
    bool found = false;
    for (const auto& r : manifest.reports)
        if (r.name == "picard-converged") {
            found = true;
            CHECK_FALSE(r.pass);
        }
    CHECK(found);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
}

TEST_CASE("threshold divisor widens the auto horizon") {
    RunConfig config;
    config.N = 4;
    config.J = 16;
    config.seed = 76;
    const FrequencySystem fs = config.frequency_system();
    const double t_default = config.resolve_t_end(fs);
    config.threshold_divisor = 24;
    const double t_wide = config.resolve_t_end(fs);
    CHECK(t_wide == doctest::Approx(8.0 * t_default).epsilon(1e-15));

    // The run completes and writes its manifest whether or not every report
    // passes out here.
    const auto dir = temp_dir("div24");
    const auto manifest = qpb::run(config, dir, true);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(manifest.config["t_end"] == t_wide);
}

TEST_CASE("format_double is locale-free shortest form") {
    CHECK(qpb::format_double(0.5) == "0.5");
    CHECK(qpb::format_double(-1.25) == "-1.25");
    CHECK(qpb::format_double(1e-7) == "1e-07");
}
