#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "qpm/config.hpp"

using namespace qpm;

namespace {

// Writes `content` to a temporary file and returns its path.
std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/qpm_config_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("config parses key = value lines with comments") {
    const auto path = write_temp("basic", R"(# leading comment
n0 = 2.5
  hbar=0.5   # trailing comment

c = 1e1
)");
    const Config cfg = Config::from_file(path);
    CHECK(cfg.get_double("n0", -1) == doctest::Approx(2.5));
    CHECK(cfg.get_double("hbar", -1) == doctest::Approx(0.5));
    CHECK(cfg.get_double("c", -1) == doctest::Approx(10.0));
    CHECK(cfg.get_double("absent", 7.0) == doctest::Approx(7.0));
    std::remove(path.c_str());
}

TEST_CASE("config rejects malformed lines and values") {
    const auto bad_line = write_temp("noequals", "n0 2.5\n");
    CHECK_THROWS_AS(Config::from_file(bad_line), std::runtime_error);
    std::remove(bad_line.c_str());

    const auto bad_value = write_temp("badvalue", "n0 = fast\n");
    const Config cfg = Config::from_file(bad_value);
    CHECK_THROWS_AS(cfg.get_double("n0", 0.0), std::runtime_error);
    std::remove(bad_value.c_str());
}

TEST_CASE("config rejects unknown keys against a declared set") {
    const auto path = write_temp("unknown", "n0 = 1\nn_zero = 2\n");
    const Config cfg = Config::from_file(path);
    CHECK_THROWS_AS(cfg.require_known_keys({"n0"}), std::runtime_error);
    CHECK_NOTHROW(cfg.require_known_keys({"n0", "n_zero"}));
    std::remove(path.c_str());
}

TEST_CASE("config missing file is an error") {
    CHECK_THROWS_AS(Config::from_file("/tmp/qpm_no_such_config_file"),
                    std::runtime_error);
}
