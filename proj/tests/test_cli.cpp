#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ratchet/config.hpp"
#include "ratchet/errors.hpp"
#include "ratchet/runner.hpp"

using namespace ratchet;

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "ratchet");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    const auto cfg = parse_config(static_cast<int>(argv.size()), argv.data());
    REQUIRE(cfg.has_value());
    return *cfg;
}

int count_lines(const std::string& text, const std::string& needle) {
    int count = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.find(needle) != std::string::npos) ++count;
    return count;
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& contents) {
        path = std::filesystem::temp_directory_path() / "ratchet_test_config.txt";
        std::ofstream(path) << contents;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("defaults") {
    const RunConfig cfg = parse({"propagate"});
    CHECK(cfg.command == Command::propagate);
    CHECK(cfg.half_width == 40);
    CHECK(cfg.coupling == 1.0);
    CHECK(cfg.ramp == doctest::Approx(0.73));
    CHECK(cfg.alpha == 1.0);
    CHECK(cfg.phi_deg == 37.0);
    CHECK(cfg.z_max == doctest::Approx(4.0 * 2.0 * kPi / 0.73));
    CHECK(cfg.z_steps == 801);
    CHECK(cfg.method == Method::green);
    CHECK(cfg.j_window == 12);
    CHECK(cfg.output == "-");
}

TEST_CASE("flag overrides") {
    const RunConfig cfg = parse({"observables", "--alpha", "0", "--phi-deg", "217", "--z-steps",
                                 "11", "--method", "rk4", "--beta-over-c", "0.3"});
    CHECK(cfg.command == Command::observables);
    CHECK(cfg.alpha == 0.0);
    CHECK(cfg.phi_deg == 217.0);
    CHECK(cfg.z_steps == 11);
    CHECK(cfg.method == Method::rk4);
    CHECK(cfg.ramp == doctest::Approx(0.3));
    // small beta pushes the default half width past 40
    CHECK(cfg.half_width == 40);
}

TEST_CASE("half width default follows the truncation rule") {
    const RunConfig cfg = parse({"propagate", "--beta-over-c", "0.1"});
    CHECK(cfg.half_width == 50);  // ceil(4 / 0.1) + 10
}

TEST_CASE("phi reduction and zero ramp") {
    CHECK(parse({"propagate", "--phi-deg", "-90"}).phi_deg == 270.0);
    CHECK(parse({"propagate", "--phi-deg", "397"}).phi_deg == 37.0);

    const RunConfig flat = parse({"propagate", "--beta-over-c", "0"});
    CHECK(flat.ramp == 0.0);
    CHECK(flat.z_max == doctest::Approx(10.0));  // no period to derive z_max from
}

TEST_CASE("usage errors") {
    CHECK_THROWS_AS(parse({"propagate", "--ramp", "0.5", "--beta-over-c", "0.73"}), usage_error);
    CHECK_THROWS_AS(parse({"propagate", "--no-such-flag"}), usage_error);
    CHECK_THROWS_AS(parse({"propagate", "--z-steps", "1"}), usage_error);
    CHECK_THROWS_AS(parse({"propagate", "--method", "magic"}), usage_error);
    CHECK_THROWS_AS(parse({"figure", "9z"}), usage_error);
    CHECK_THROWS_AS(parse({"sweep", "--param", "coupling", "--from", "0", "--to", "1"}),
                    usage_error);
}

TEST_CASE("config file layering") {
    const TempFile file("# comment\nalpha = 0.25\nphi-deg = 90\nz-steps = 21\n");

    const RunConfig from_file = parse({"propagate", "--config", file.path.string()});
    CHECK(from_file.alpha == 0.25);
    CHECK(from_file.phi_deg == 90.0);
    CHECK(from_file.z_steps == 21);

    const RunConfig overridden =
        parse({"propagate", "--config", file.path.string(), "--alpha", "0.75"});
    CHECK(overridden.alpha == 0.75);
    CHECK(overridden.z_steps == 21);
}

TEST_CASE("config file errors") {
    const TempFile bad_key("frequency = 3\n");
    CHECK_THROWS_AS(parse({"propagate", "--config", bad_key.path.string()}), usage_error);

    const TempFile bad_value("alpha = fast\n");
    CHECK_THROWS_AS(parse({"propagate", "--config", bad_value.path.string()}), usage_error);

    CHECK_THROWS_AS(parse({"propagate", "--config", "/no/such/file.cfg"}), usage_error);
}

TEST_CASE("config file via environment variable") {
    const TempFile file("alpha = 0.5\n");
    setenv("RATCHET_CONFIG", file.path.string().c_str(), 1);
    const RunConfig cfg = parse({"propagate"});
    unsetenv("RATCHET_CONFIG");
    CHECK(cfg.alpha == 0.5);
}

TEST_CASE("figure presets") {
    const RunConfig f3a = parse({"figure", "3a"});
    CHECK(f3a.alpha == 0.0);
    CHECK(f3a.phi_deg == 37.0);
    CHECK(f3a.ramp == doctest::Approx(0.73));

    const RunConfig f5 = parse({"figure", "5"});
    CHECK(f5.alpha == 1.0);
    CHECK(f5.phi_deg == 217.0);
    CHECK(f5.z_max == doctest::Approx(2.0 * 2.0 * kPi / 0.73));

    const RunConfig tweaked = parse({"figure", "3b", "--z-steps", "5"});
    CHECK(tweaked.z_steps == 5);
    CHECK(tweaked.alpha == 1.0);
}

TEST_CASE("propagation csv schema") {
    RunConfig cfg = parse({"propagate", "--z-steps", "2", "--j-window", "3"});
    std::ostringstream out;
    write_propagation_csv(cfg, out);
    const std::string text = out.str();

    CHECK(count_lines(text, "z,j,intensity") == 1);
    CHECK(count_lines(text, ",") >= 14);  // 2 z rows x 7 sites

    // the first data block is the z = 0 input profile
    CHECK(text.find("0,-3,0\n") != std::string::npos);
    CHECK(text.find("0,0,1\n") != std::string::npos);
    CHECK(text.find("0,1,1\n") != std::string::npos);

    std::ostringstream again;
    write_propagation_csv(cfg, again);
    CHECK(text == again.str());
}

TEST_CASE("observable csv for the bloch input") {
    RunConfig cfg = parse({"observables", "--alpha", "0", "--z-steps", "9"});
    std::ostringstream out;
    write_observable_csv(cfg, out);

    std::istringstream in(out.str());
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            CHECK(line == "z,mean_j,mean_j2,power,method");
            seen_header = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double mean_j = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(std::abs(mean_j) < 1e-9);
        CHECK(line.substr(line.rfind(',') + 1) == "green");
    }
    CHECK(seen_header);
}

TEST_CASE("ratchet direction shows in the scan") {
    auto first_nonzero_mean = [](double phi_deg) {
        RunConfig cfg;
        cfg.command = Command::observables;
        cfg.phi_deg = phi_deg;
        cfg.z_max = 0.5;
        cfg.z_steps = 6;
        std::ostringstream out;
        write_observable_csv(cfg, out);
        std::istringstream in(out.str());
        std::string line;
        double value = 0.0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'z') continue;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            const double z = std::stod(line.substr(0, c1));
            if (z == 0.0) continue;
            value = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
            break;  // first z > 0 row
        }
        return value;
    };
    CHECK(first_nonzero_mean(37.0) < 1.0);   // leftward: dips below alpha^2 = 1
    CHECK(first_nonzero_mean(217.0) > 1.0);  // rightward
}

TEST_CASE("compare-methods emits one group per method") {
    RunConfig cfg = parse({"observables", "--compare-methods", "--z-steps", "3", "--z-max", "2"});
    std::ostringstream out;
    write_observable_csv(cfg, out);
    CHECK(count_lines(out.str(), ",green") == 3);
    CHECK(count_lines(out.str(), ",rk4") == 3);
    CHECK(count_lines(out.str(), ",spectral") == 3);
}

TEST_CASE("sweep blocks") {
    RunConfig cfg = parse({"sweep", "--param", "alpha", "--from", "0", "--to", "1", "--count", "3",
                           "--z-steps", "2", "--z-max", "1"});
    std::ostringstream out;
    write_sweep_csv(cfg, out);
    CHECK(count_lines(out.str(), "# alpha=0.5") == 1);
    CHECK(count_lines(out.str(), "# alpha=1") == 1);
    CHECK(count_lines(out.str(), ",green") == 6);
}
