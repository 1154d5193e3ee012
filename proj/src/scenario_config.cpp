#include "loopy/scenario_config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "loopy/errors.hpp"

namespace loopy {

namespace {

constexpr std::array<std::string_view, 5> kSchedulable{"v", "beta", "gamma_act", "gamma_inh", "alpha"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string where(std::size_t line) { return "config line " + std::to_string(line) + ": "; }

double parse_double(std::string_view text, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(where(line) + "expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

std::uint64_t parse_u64(std::string_view text, std::size_t line) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(where(line) + "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text, std::size_t line) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError(where(line) + "expected true or false, got '" + std::string(text) + "'");
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void set_ring_key(RingParams& ring, std::string_view key, std::string_view value, std::size_t line) {
    if (key == "gamma_act") ring.gamma_act = parse_double(value, line);
    else if (key == "gamma_inh") ring.gamma_inh = parse_double(value, line);
    else if (key == "gamma_pas") ring.gamma_pas = parse_double(value, line);
    else if (key == "alpha") ring.alpha = parse_double(value, line);
    else if (key == "beta") ring.beta = parse_double(value, line);
    else if (key == "beta_scale") ring.beta_scale = parse_double(value, line);
    else if (key == "v") ring.v = parse_double(value, line);
    else if (key == "s") ring.s = parse_double(value, line);
    else if (key == "dt") ring.dt = parse_double(value, line);
    else if (key == "n_cells") ring.n_cells = parse_u64(value, line);
    else if (key == "angle_limit") ring.angle_limit = parse_double(value, line);
    else if (key == "init_amplitude") ring.init_amplitude = parse_double(value, line);
    else if (key == "seed") ring.seed = parse_u64(value, line);
    else if (key == "diffusion_denominator") ring.diffusion_denominator = diffusion_denominator_from_string(value);
    else throw ConfigError(where(line) + "unknown [ring] key '" + std::string(key) + "'");
}

}  // namespace

bool is_schedulable_param(std::string_view name) {
    for (auto p : kSchedulable) {
        if (p == name) return true;
    }
    return false;
}

void set_ring_param(RingParams& params, std::string_view name, double value) {
    if (name == "v") params.v = value;
    else if (name == "beta") params.beta = value;
    else if (name == "gamma_act") params.gamma_act = value;
    else if (name == "gamma_inh") params.gamma_inh = value;
    else if (name == "alpha") params.alpha = value;
    else throw ConfigError("parameter '" + std::string(name) + "' cannot be scheduled");
}

RingParams params_for_step(const ScenarioConfig& config, std::size_t index) {
    RingParams params = config.ring;
    for (std::size_t i = 0; i <= index && i < config.schedule.size(); ++i) {
        set_ring_param(params, config.schedule[i].param, config.schedule[i].value);
    }
    return params;
}

std::size_t steps_in(double duration, double dt) {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

void ScenarioConfig::validate() const {
    ring.validate();
    if (schedule.empty()) throw ConfigError("schedule must contain at least one step");
    if (!(settle_time >= 0.0 && std::isfinite(settle_time))) throw ConfigError("settle_time must be finite and >= 0");
    if (record_stride == 0) throw ConfigError("record_stride must be > 0");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const ScheduleStep& step = schedule[i];
        if (!is_schedulable_param(step.param)) {
            throw ConfigError("schedule step " + std::to_string(i) + ": parameter '" + step.param +
                              "' is not one of v, beta, gamma_act, gamma_inh, alpha");
        }
        if (!(step.duration > 0.0 && std::isfinite(step.duration))) {
            throw ConfigError("schedule step " + std::to_string(i) + ": duration must be > 0");
        }
        if (steps_in(step.duration, ring.dt) < 3 * record_stride) {
            throw ConfigError("schedule step " + std::to_string(i) + ": needs at least 3 recorded frames");
        }
        params_for_step(*this, i).validate();
    }
    failure.validate();
    if (failure.n_cells != ring.n_cells) throw ConfigError("failure n_cells must equal ring n_cells");
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig config;
    config.schedule.clear();
    bool failure_cells_set = false;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where(line_no) + "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "scenario" && section != "ring" && section != "failure" && section != "schedule") {
                throw ConfigError(where(line_no) + "unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where(line_no) + "expected key = value");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError(where(line_no) + "empty value for '" + std::string(key) + "'");

        if (section == "scenario") {
            if (key == "name") config.name = std::string(value);
            else if (key == "settle_time") config.settle_time = parse_double(value, line_no);
            else if (key == "output_dir") config.output_dir = std::string(value);
            else if (key == "record_stride") config.record_stride = parse_u64(value, line_no);
            else if (key == "store_snapshots") config.store_snapshots = parse_bool(value, line_no);
            else throw ConfigError(where(line_no) + "unknown [scenario] key '" + std::string(key) + "'");
        } else if (section == "ring") {
            set_ring_key(config.ring, key, value, line_no);
        } else if (section == "failure") {
            if (key == "mode") config.failure.mode = failure_mode_from_string(value);
            else if (key == "interval") config.failure.interval = parse_double(value, line_no);
            else if (key == "seed") config.failure.seed = parse_u64(value, line_no);
            else if (key == "n_cells") {
                config.failure.n_cells = parse_u64(value, line_no);
                failure_cells_set = true;
            } else throw ConfigError(where(line_no) + "unknown [failure] key '" + std::string(key) + "'");
        } else if (section == "schedule") {
            if (key != "step") throw ConfigError(where(line_no) + "unknown [schedule] key '" + std::string(key) + "'");
            std::istringstream fields{std::string(value)};
            std::string param, val, dur, extra;
            if (!(fields >> param >> val >> dur) || (fields >> extra)) {
                throw ConfigError(where(line_no) + "step expects '<param> <value> <duration>'");
            }
            config.schedule.push_back({param, parse_double(val, line_no), parse_double(dur, line_no)});
        } else {
            throw ConfigError(where(line_no) + "key outside of any section");
        }
    }
    if (!failure_cells_set) config.failure.n_cells = config.ring.n_cells;
    config.validate();
    return config;
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "[scenario]\n"
        << "name = " << c.name << "\n"
        << "settle_time = " << fmt(c.settle_time) << "\n";
    if (!c.output_dir.empty()) out << "output_dir = " << c.output_dir << "\n";
    out << "record_stride = " << c.record_stride << "\n"
        << "store_snapshots = " << (c.store_snapshots ? "true" : "false") << "\n\n";

    const RingParams& r = c.ring;
    out << "[ring]\n"
        << "gamma_act = " << fmt(r.gamma_act) << "\n"
        << "gamma_inh = " << fmt(r.gamma_inh) << "\n"
        << "gamma_pas = " << fmt(r.gamma_pas) << "\n"
        << "alpha = " << fmt(r.alpha) << "\n"
        << "beta = " << fmt(r.beta) << "\n"
        << "beta_scale = " << fmt(r.beta_scale) << "\n"
        << "v = " << fmt(r.v) << "\n"
        << "s = " << fmt(r.s) << "\n"
        << "dt = " << fmt(r.dt) << "\n"
        << "n_cells = " << r.n_cells << "\n"
        << "angle_limit = " << fmt(r.angle_limit) << "\n"
        << "init_amplitude = " << fmt(r.init_amplitude) << "\n"
        << "seed = " << r.seed << "\n"
        << "diffusion_denominator = " << to_string(r.diffusion_denominator) << "\n\n";

    out << "[failure]\n"
        << "mode = " << to_string(c.failure.mode) << "\n"
        << "interval = " << fmt(c.failure.interval) << "\n"
        << "seed = " << c.failure.seed << "\n"
        << "n_cells = " << c.failure.n_cells << "\n\n";

    out << "[schedule]\n";
    for (const ScheduleStep& step : c.schedule) {
        out << "step = " << step.param << " " << fmt(step.value) << " " << fmt(step.duration) << "\n";
    }
    return out.str();
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void save_config(const ScenarioConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write config file: " + path.string());
    out << serialize_config(config);
}

std::vector<std::string> builtin_scenario_names() {
    return {"wavespeed", "lobesize", "lobecount", "failure-sequential", "failure-random"};
}

namespace {

ScenarioConfig base_scenario(std::string_view name) {
    ScenarioConfig c;
    c.name = std::string(name);
    c.ring.gamma_act = 1.0;
    c.ring.gamma_inh = 100.0;
    c.ring.gamma_pas = 1.0;
    c.ring.alpha = 0.001;
    c.ring.beta = 225.0;
    c.ring.beta_scale = 0.18;
    c.ring.v = 1.0;
    c.ring.s = 1.0;
    c.ring.dt = 0.002;
    c.ring.n_cells = 36;
    c.ring.diffusion_denominator = DiffusionDenominator::classic_s_squared;
    c.settle_time = 400.0;
    c.record_stride = 25;
    c.failure.n_cells = c.ring.n_cells;
    c.output_dir = "runs/" + std::string(name);
    return c;
}

}  // namespace

ScenarioConfig builtin_scenario(std::string_view name) {
    ScenarioConfig c = base_scenario(name);
    if (name == "wavespeed") {
        c.ring.v = 0.0;
        for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) c.schedule.push_back({"v", v, 60.0});
    } else if (name == "lobesize") {
        for (double beta : {100.0, 225.0, 300.0, 500.0}) c.schedule.push_back({"beta", beta, 400.0});
    } else if (name == "lobecount") {
        // This seed settles into the 5-lobe basin at gamma_act = 0.4.
        c.ring.seed = 3;
        for (double g : {0.4, 0.9, 1.3}) c.schedule.push_back({"gamma_act", g, 400.0});
    } else if (name == "failure-sequential" || name == "failure-random") {
        c.failure.mode = name == "failure-sequential" ? FailureMode::sequential : FailureMode::random;
        c.failure.interval = 20.0;
        c.failure.seed = 7;
        // One step per failure interval plus one with every cell disabled.
        for (std::size_t k = 0; k <= c.ring.n_cells; ++k) c.schedule.push_back({"v", 1.0, c.failure.interval});
    } else {
        throw ConfigError("unknown built-in scenario: " + std::string(name));
    }
    c.validate();
    return c;
}

}  // namespace loopy
