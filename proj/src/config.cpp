#include "ratchet/config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "ratchet/errors.hpp"

namespace ratchet {
namespace {

// Everything the file and the flags can set, each field optional so the
// layering (built-in defaults < config file < figure preset < flags) only
// touches what was actually given.
struct RawConfig {
    std::optional<int> half_width, z_steps, j_window, spectral_k, sweep_count;
    std::optional<double> coupling, beta_over_c, ramp, alpha, phi_deg, z_max, rk4_step;
    std::optional<double> sweep_from, sweep_to;
    std::optional<std::string> method, output, sweep_param;
    std::optional<bool> normalized, compare_methods;
};

void merge(RawConfig& base, const RawConfig& over) {
    auto pick = [](auto& dst, const auto& src) {
        if (src.has_value()) dst = src;
    };
    pick(base.half_width, over.half_width);
    pick(base.z_steps, over.z_steps);
    pick(base.j_window, over.j_window);
    pick(base.spectral_k, over.spectral_k);
    pick(base.sweep_count, over.sweep_count);
    pick(base.coupling, over.coupling);
    pick(base.beta_over_c, over.beta_over_c);
    pick(base.ramp, over.ramp);
    pick(base.alpha, over.alpha);
    pick(base.phi_deg, over.phi_deg);
    pick(base.z_max, over.z_max);
    pick(base.rk4_step, over.rk4_step);
    pick(base.sweep_from, over.sweep_from);
    pick(base.sweep_to, over.sweep_to);
    pick(base.method, over.method);
    pick(base.output, over.output);
    pick(base.sweep_param, over.sweep_param);
    pick(base.normalized, over.normalized);
    pick(base.compare_methods, over.compare_methods);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    T value{};
    in >> value;
    if (in.fail() || !(in >> std::ws).eof())
        throw usage_error("config key '" + key + "': malformed value '" + text + "'");
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw usage_error("config key '" + key + "': expected a boolean, got '" + text + "'");
}

// Line-oriented key=value file; '#' starts a comment, blank lines ignored.
RawConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file: " + path);

    RawConfig raw;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string{};
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw usage_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "half-width") raw.half_width = parse_number<int>(key, value);
        else if (key == "coupling") raw.coupling = parse_number<double>(key, value);
        else if (key == "beta-over-c") raw.beta_over_c = parse_number<double>(key, value);
        else if (key == "ramp") raw.ramp = parse_number<double>(key, value);
        else if (key == "alpha") raw.alpha = parse_number<double>(key, value);
        else if (key == "phi-deg") raw.phi_deg = parse_number<double>(key, value);
        else if (key == "z-max") raw.z_max = parse_number<double>(key, value);
        else if (key == "z-steps") raw.z_steps = parse_number<int>(key, value);
        else if (key == "method") raw.method = value;
        else if (key == "output") raw.output = value;
        else if (key == "j-window") raw.j_window = parse_number<int>(key, value);
        else if (key == "rk4-step") raw.rk4_step = parse_number<double>(key, value);
        else if (key == "spectral-k") raw.spectral_k = parse_number<int>(key, value);
        else if (key == "normalized") raw.normalized = parse_bool(key, value);
        else if (key == "compare-methods") raw.compare_methods = parse_bool(key, value);
        else throw usage_error("unknown config key '" + key + "' in " + path);
    }
    return raw;
}

RawConfig figure_preset(const std::string& name, bool& two_periods) {
    RawConfig preset;
    preset.beta_over_c = 0.73;
    preset.phi_deg = 37.0;
    preset.alpha = 1.0;
    two_periods = false;
    if (name == "3a") {
        preset.alpha = 0.0;
    } else if (name == "3b") {
        // defaults already match the caption
    } else if (name == "4") {
        two_periods = true;
    } else if (name == "5") {
        preset.phi_deg = 217.0;
        two_periods = true;
    } else {
        throw usage_error("unknown figure '" + name + "', expected 3a|3b|4|5");
    }
    return preset;
}

RunConfig finalize(Command command, const RawConfig& raw, const std::string& figure,
                   bool two_periods) {
    RunConfig cfg;
    cfg.command = command;
    cfg.figure = figure;

    cfg.coupling = raw.coupling.value_or(1.0);
    if (!std::isfinite(cfg.coupling) || cfg.coupling <= 0.0)
        throw usage_error("coupling must be positive and finite");

    if (raw.ramp && raw.beta_over_c)
        throw usage_error("conflicting ramp specifications: give ramp or beta-over-c, not both");
    cfg.ramp = raw.ramp ? *raw.ramp : raw.beta_over_c.value_or(0.73) * cfg.coupling;
    if (!std::isfinite(cfg.ramp) || cfg.ramp < 0.0)
        throw usage_error("ramp must be non-negative and finite");

    if (raw.half_width) {
        cfg.half_width = *raw.half_width;
    } else {
        int needed = 40;
        if (cfg.ramp > 0.0)
            needed = std::max(
                needed, static_cast<int>(std::ceil(4.0 * cfg.coupling / cfg.ramp)) + 10);
        cfg.half_width = needed;
    }
    if (cfg.half_width < 1) throw usage_error("half-width must be >= 1");

    cfg.alpha = raw.alpha.value_or(1.0);
    if (!std::isfinite(cfg.alpha) || cfg.alpha < 0.0)
        throw usage_error("alpha must be non-negative and finite");

    cfg.phi_deg = raw.phi_deg.value_or(37.0);
    if (!std::isfinite(cfg.phi_deg)) throw usage_error("phi-deg must be finite");
    cfg.phi_deg = std::fmod(cfg.phi_deg, 360.0);
    if (cfg.phi_deg < 0.0) cfg.phi_deg += 360.0;

    const double period = cfg.ramp > 0.0 ? 2.0 * std::numbers::pi / cfg.ramp : 0.0;
    if (raw.z_max) {
        cfg.z_max = *raw.z_max;
    } else if (cfg.ramp > 0.0) {
        cfg.z_max = (two_periods ? 2.0 : 4.0) * period;
    } else {
        cfg.z_max = 10.0 / cfg.coupling;  // ramp-free runs have no natural period
    }
    if (!std::isfinite(cfg.z_max) || cfg.z_max <= 0.0) throw usage_error("z-max must be > 0");

    cfg.z_steps = raw.z_steps.value_or(801);
    if (cfg.z_steps < 2) throw usage_error("z-steps must be >= 2");

    cfg.method = parse_method(raw.method.value_or("green"));
    cfg.compare_methods = raw.compare_methods.value_or(false);
    cfg.normalized = raw.normalized.value_or(false);

    cfg.j_window = raw.j_window.value_or(12);
    if (cfg.j_window < 0) throw usage_error("j-window must be >= 0");
    cfg.j_window = std::min(cfg.j_window, cfg.half_width);

    cfg.rk4_step = raw.rk4_step.value_or(0.0);
    if (raw.rk4_step && (!std::isfinite(*raw.rk4_step) || *raw.rk4_step <= 0.0))
        throw usage_error("rk4-step must be > 0");

    cfg.spectral_k = raw.spectral_k.value_or(0);
    if (raw.spectral_k && (*raw.spectral_k < 2 * cfg.half_width + 1 || *raw.spectral_k % 2 == 0))
        throw usage_error("spectral-k must be odd and >= 2*half-width+1");

    cfg.output = raw.output.value_or("-");

    if (command == Command::sweep) {
        cfg.sweep_param = raw.sweep_param.value_or("");
        if (cfg.sweep_param != "alpha" && cfg.sweep_param != "phi-deg" &&
            cfg.sweep_param != "beta-over-c")
            throw usage_error("sweep parameter must be one of alpha|phi-deg|beta-over-c");
        if (!raw.sweep_from || !raw.sweep_to)
            throw usage_error("sweep needs --from and --to");
        cfg.sweep_from = *raw.sweep_from;
        cfg.sweep_to = *raw.sweep_to;
        cfg.sweep_count = raw.sweep_count.value_or(11);
        if (cfg.sweep_count < 1) throw usage_error("sweep --count must be >= 1");
    }
    return cfg;
}

// Registers the shared flag set on one subcommand, wiring values into `raw`
// only when the flag is actually present.
void add_common_options(CLI::App* sub, RawConfig& raw) {
    auto opt_int = [&](const std::string& name, std::optional<int>& slot, const std::string& desc) {
        sub->add_option_function<int>(name, [&slot](const int& v) { slot = v; }, desc);
    };
    auto opt_dbl = [&](const std::string& name, std::optional<double>& slot,
                       const std::string& desc) {
        sub->add_option_function<double>(name, [&slot](const double& v) { slot = v; }, desc);
    };
    auto opt_str = [&](const std::string& name, std::optional<std::string>& slot,
                       const std::string& desc) {
        sub->add_option_function<std::string>(name, [&slot](const std::string& v) { slot = v; },
                                              desc);
    };

    opt_int("--half-width", raw.half_width, "array half width M (sites -M..M)");
    opt_dbl("--coupling", raw.coupling, "nearest-neighbor coupling C");
    opt_dbl("--beta-over-c", raw.beta_over_c, "ramp constant as a ratio to the coupling");
    opt_dbl("--ramp", raw.ramp, "ramp constant beta (excludes --beta-over-c)");
    opt_dbl("--alpha", raw.alpha, "secondary-site input amplitude");
    opt_dbl("--phi-deg", raw.phi_deg, "relative input phase in degrees");
    opt_dbl("--z-max", raw.z_max, "largest propagation distance");
    opt_int("--z-steps", raw.z_steps, "number of z samples (>= 2)");
    sub->add_option_function<std::string>(
           "--method", [&raw](const std::string& v) { raw.method = v; }, "green|rk4|spectral")
        ->check(CLI::IsMember({"green", "rk4", "spectral"}));
    sub->add_flag_function("--compare-methods",
                           [&raw](int64_t) { raw.compare_methods = true; },
                           "emit one row group per method");
    sub->add_flag_function("--normalized", [&raw](int64_t) { raw.normalized = true; },
                           "divide moments by the total power");
    opt_int("--j-window", raw.j_window, "half width of the emitted intensity window");
    opt_dbl("--rk4-step", raw.rk4_step, "rk4 step size (default 0.001/C)");
    opt_int("--spectral-k", raw.spectral_k, "k-grid size (odd, default 2M+1)");
    opt_str("--output", raw.output, "output path, '-' for stdout");
    sub->add_option("--config", "key=value config file (parsed before flags)");
}

std::string find_config_path(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config") {
            if (i + 1 >= argc) throw usage_error("--config needs a path");
            return argv[i + 1];
        }
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    if (const char* env = std::getenv("RATCHET_CONFIG"); env && *env) return env;
    return {};
}

}  // namespace

double RunConfig::phi() const { return phi_deg * std::numbers::pi / 180.0; }

LatticeModel RunConfig::model() const { return build_model(half_width, coupling, ramp); }

InputSpec RunConfig::input() const { return make_input(alpha, phi()); }

std::optional<RunConfig> parse_config(int argc, const char* const* argv) {
    RawConfig raw;
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) raw = load_config_file(config_path);

    RawConfig cli_raw;
    std::string figure_name;

    CLI::App app{"ramped waveguide-array ratchet simulator"};
    app.require_subcommand(1);
    app.add_option("--config", "key=value config file (parsed before flags)");

    CLI::App* propagate = app.add_subcommand("propagate", "intensity profiles over a z grid");
    add_common_options(propagate, cli_raw);
    CLI::App* observables = app.add_subcommand("observables", "site moments over a z grid");
    add_common_options(observables, cli_raw);

    CLI::App* sweep = app.add_subcommand("sweep", "scan one parameter over a range");
    add_common_options(sweep, cli_raw);
    sweep->add_option_function<std::string>(
            "--param", [&cli_raw](const std::string& v) { cli_raw.sweep_param = v; },
            "alpha|phi-deg|beta-over-c")
        ->required();
    sweep->add_option_function<double>(
            "--from", [&cli_raw](const double& v) { cli_raw.sweep_from = v; }, "first value")
        ->required();
    sweep->add_option_function<double>(
            "--to", [&cli_raw](const double& v) { cli_raw.sweep_to = v; }, "last value")
        ->required();
    sweep->add_option_function<int>(
        "--count", [&cli_raw](const int& v) { cli_raw.sweep_count = v; }, "number of values");

    CLI::App* figure = app.add_subcommand("figure", "preset runs from the reference plots");
    figure->add_option("name", figure_name, "3a|3b|4|5")->required();
    add_common_options(figure, cli_raw);

    CLI::App* verify = app.add_subcommand("verify", "run the cross-method check suite");
    add_common_options(verify, cli_raw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return std::nullopt;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw usage_error(e.what());
    }

    Command command = Command::propagate;
    bool two_periods = false;
    if (propagate->parsed()) command = Command::propagate;
    if (observables->parsed()) command = Command::observables;
    if (sweep->parsed()) command = Command::sweep;
    if (verify->parsed()) command = Command::verify;
    if (figure->parsed()) {
        command = Command::figure;
        raw.ramp.reset();  // presets speak beta-over-c
        merge(raw, figure_preset(figure_name, two_periods));
    }
    merge(raw, cli_raw);
    return finalize(command, raw, figure_name, two_periods);
}

}  // namespace ratchet
