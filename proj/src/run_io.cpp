#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "loopy/errors.hpp"
#include "loopy/experiment_harness.hpp"
#include "loopy/svg_plot.hpp"

namespace loopy {

namespace {

std::string g12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

double to_d(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw Error("bad number");
        return v;
    } catch (const std::exception&) {
        throw Error("malformed numeric field '" + text + "'");
    }
}

const char* kRunHeader = "t,omega_mc,omega_me,omega_ce,lobe_count,lobe_amplitude,turning_distance,n_disabled";
const char* kSummaryHeader =
    "step,param,value,t_start,t_end,frames,omega_mc_mean,omega_mc_std,omega_me_mean,omega_me_std,"
    "omega_ce_mean,omega_ce_std,lobe_count,lobe_amplitude,turning_distance,n_disabled";

void write_plots(const RunRecord& record, const std::filesystem::path& dir) {
    std::vector<double> t;
    std::vector<double> mc, me, ce, td;
    for (const FrameRecord& f : record.frames) {
        t.push_back(f.t);
        mc.push_back(f.omega.omega_mc);
        me.push_back(f.omega.omega_me);
        ce.push_back(f.omega.omega_ce);
        td.push_back(f.turning_distance);
    }
    const std::string& name = record.config.name;
    auto plot = [&](const std::string& file, const std::string& title, const std::string& y_label,
                    const std::vector<double>& y, const std::string& color) {
        PlotSpec spec{name + ": " + title, "time", y_label, {{title, t, y, color}}};
        write_text(dir / file, render_svg(spec));
    };
    plot("omega_mc.svg", "omega_mc", "rad / time (clockwise +)", mc, "#1f77b4");
    plot("omega_me.svg", "omega_me", "rad / time (clockwise +)", me, "#d62728");
    plot("omega_ce.svg", "omega_ce", "rad / time (clockwise +)", ce, "#2ca02c");
    plot("turning_distance.svg", "turning distance", "distance to reference shape", td, "#9467bd");
}

}  // namespace

std::string format_run_csv(const RunRecord& record) {
    std::string out = std::string(kRunHeader) + "\n";
    for (const FrameRecord& f : record.frames) {
        out += g12(f.t) + "," + g12(f.omega.omega_mc) + "," + g12(f.omega.omega_me) + "," +
               g12(f.omega.omega_ce) + "," + std::to_string(f.lobes.count) + "," + g12(f.lobes.amplitude) + "," +
               g12(f.turning_distance) + "," + std::to_string(f.n_disabled) + "\n";
    }
    return out;
}

std::string format_summary_csv(const RunRecord& record) {
    std::string out = std::string(kSummaryHeader) + "\n";
    for (const StepSummary& s : record.summaries) {
        out += std::to_string(s.step) + "," + s.param + "," + g12(s.value) + "," + g12(s.t_start) + "," +
               g12(s.t_end) + "," + std::to_string(s.frames) + "," + g12(s.omega_mc.mean) + "," +
               g12(s.omega_mc.stddev) + "," + g12(s.omega_me.mean) + "," + g12(s.omega_me.stddev) + "," +
               g12(s.omega_ce.mean) + "," + g12(s.omega_ce.stddev) + "," + std::to_string(s.lobe_count) + "," +
               g12(s.lobe_amplitude) + "," + g12(s.turning_distance) + "," + std::to_string(s.n_disabled) + "\n";
    }
    return out;
}

std::string format_run_meta(const RunRecord& record) {
    std::ostringstream out;
    out << "version=" << kVersionString << "\n"
        << "seed=" << record.config.ring.seed << "\n"
        << "failure_seed=" << record.config.failure.seed << "\n"
        << "frames=" << record.frames.size() << "\n"
        << "frame_interval=" << g12(record.frame_interval) << "\n"
        << "projection_failures=" << record.projection_failures << "\n";
    // Flatten the serialized config into section.key=value lines.
    std::istringstream config(serialize_config(record.config));
    std::string line, section;
    std::size_t step = 0;
    while (std::getline(config, line)) {
        if (line.empty()) continue;
        if (line.front() == '[') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find(" = ");
        std::string key = line.substr(0, eq);
        if (section == "schedule") key += "." + std::to_string(step++);
        out << section << "." << key << "=" << line.substr(eq + 3) << "\n";
    }
    return out.str();
}

void write_run(const RunRecord& record, const std::filesystem::path& dir, const WriteOptions& options) {
    std::filesystem::create_directories(dir);
    write_text(dir / "run.csv", format_run_csv(record));
    write_text(dir / "summary.csv", format_summary_csv(record));
    write_text(dir / "run_meta", format_run_meta(record));
    write_text(dir / "config.ini", serialize_config(record.config));
    if (options.plots) write_plots(record, dir);
}

RunRecord read_run(const std::filesystem::path& dir) {
    RunRecord record;
    record.config = load_config(dir / "config.ini");
    const ScenarioConfig& config = record.config;
    const double dt = config.ring.dt;
    record.frame_interval = static_cast<double>(config.record_stride) * dt;

    std::vector<std::size_t> step_end;
    std::size_t acc = 0;
    for (const ScheduleStep& s : config.schedule) step_end.push_back(acc += steps_in(s.duration, dt));

    const auto rows = read_csv(dir / "run.csv");
    if (rows.empty() || rows.front().size() != 8) throw Error("run.csv: unexpected header");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& c = rows[r];
        if (c.size() != 8) throw Error("run.csv: row " + std::to_string(r) + " has wrong column count");
        FrameRecord f;
        f.t = to_d(c[0]);
        f.omega = {to_d(c[1]), to_d(c[2]), to_d(c[3])};
        f.lobes.count = static_cast<int>(to_d(c[4]));
        f.lobes.amplitude = to_d(c[5]);
        f.turning_distance = to_d(c[6]);
        f.n_disabled = static_cast<std::size_t>(to_d(c[7]));
        const auto global = static_cast<std::size_t>(std::llround(f.t / dt));
        while (f.step + 1 < step_end.size() && global > step_end[f.step]) ++f.step;
        record.frames.push_back(f);
    }

    const auto srows = read_csv(dir / "summary.csv");
    for (std::size_t r = 1; r < srows.size(); ++r) {
        const auto& c = srows[r];
        if (c.size() != 16) throw Error("summary.csv: row " + std::to_string(r) + " has wrong column count");
        StepSummary s;
        s.step = static_cast<std::size_t>(to_d(c[0]));
        s.param = c[1];
        s.value = to_d(c[2]);
        s.t_start = to_d(c[3]);
        s.t_end = to_d(c[4]);
        s.frames = static_cast<std::size_t>(to_d(c[5]));
        s.omega_mc = {to_d(c[6]), to_d(c[7])};
        s.omega_me = {to_d(c[8]), to_d(c[9])};
        s.omega_ce = {to_d(c[10]), to_d(c[11])};
        s.lobe_count = static_cast<int>(to_d(c[12]));
        s.lobe_amplitude = to_d(c[13]);
        s.turning_distance = to_d(c[14]);
        s.n_disabled = static_cast<std::size_t>(to_d(c[15]));
        record.summaries.push_back(s);
    }
    return record;
}

RunReport make_report(const RunRecord& record) {
    RunReport report;
    report.steps = record.summaries;

    bool all_v = !report.steps.empty();
    std::set<double> values;
    for (const StepSummary& s : report.steps) {
        all_v = all_v && s.param == "v";
        values.insert(s.value);
    }
    if (all_v && values.size() >= 2) {
        std::vector<double> x, mc, me, ce;
        for (const StepSummary& s : report.steps) {
            x.push_back(s.value);
            mc.push_back(s.omega_mc.mean);
            me.push_back(s.omega_me.mean);
            ce.push_back(s.omega_ce.mean);
        }
        report.fit_mc = linear_fit(x, mc);
        report.fit_me = linear_fit(x, me);
        report.fit_ce = linear_fit(x, ce);
    }

    for (const StepSummary& s : report.steps) report.turning_trace.push_back(s.turning_distance);
    if (record.config.failure.mode != FailureMode::none && !report.turning_trace.empty()) {
        const std::vector<double> iso = isotonic_fit(report.turning_trace);
        double ss = 0.0;
        for (std::size_t i = 0; i < iso.size(); ++i) {
            ss += (report.turning_trace[i] - iso[i]) * (report.turning_trace[i] - iso[i]);
        }
        const double rms = std::sqrt(ss / static_cast<double>(iso.size()));
        report.isotonic_residual = iso.back() > 0.0 ? rms / iso.back() : 0.0;
    }
    return report;
}

std::string format_report(const RunReport& report, const ScenarioConfig& config) {
    std::ostringstream out;
    char line[256];
    out << "scenario: " << config.name << "\n"
        << "angular velocities in rad/time, positive clockwise; mean +- std over the trimmed step window\n\n";
    std::snprintf(line, sizeof line, "%4s %-10s %9s %22s %22s %22s %5s %8s %9s %5s\n", "step", "param", "value",
                  "omega_mc", "omega_me", "omega_ce", "lobes", "amp", "turning", "dis");
    out << line;
    for (const StepSummary& s : report.steps) {
        std::snprintf(line, sizeof line,
                      "%4zu %-10s %9.4g %11.5f +- %7.5f %11.5f +- %7.5f %11.5f +- %7.5f %5d %8.4f %9.5f %5zu\n", s.step,
                      s.param.c_str(), s.value, s.omega_mc.mean, s.omega_mc.stddev, s.omega_me.mean,
                      s.omega_me.stddev, s.omega_ce.mean, s.omega_ce.stddev, s.lobe_count, s.lobe_amplitude,
                      s.turning_distance, s.n_disabled);
        out << line;
    }
    if (report.fit_mc) {
        const double analytic = omega_mc_analytic(1.0, config.ring.n_cells, config.ring.s);
        out << "\nlinear fits vs v (analytic omega_mc slope " << g12(analytic) << ")\n";
        auto fit_line = [&](const char* label, const LinearFit& f) {
            std::snprintf(line, sizeof line, "  %-8s slope %10.6f  intercept %10.6f  r^2 %8.5f\n", label, f.slope,
                          f.intercept, f.r_squared);
            out << line;
        };
        fit_line("omega_mc", *report.fit_mc);
        fit_line("omega_me", *report.fit_me);
        fit_line("omega_ce", *report.fit_ce);
    }
    if (report.isotonic_residual) {
        out << "\nturning distance trace (per step):";
        for (double d : report.turning_trace) out << " " << g12(d);
        out << "\nisotonic residual / final value: " << g12(*report.isotonic_residual) << "\n";
    }
    return out.str();
}

std::string report_run(const std::filesystem::path& dir, const WriteOptions& options) {
    const RunRecord record = read_run(dir);
    const std::string text = format_report(make_report(record), record.config);
    write_text(dir / "report.txt", text);
    if (options.plots) write_plots(record, dir);
    return text;
}

std::vector<SweepResult> sweep(const std::vector<ScenarioConfig>& configs, std::size_t parallelism,
                               const std::function<void(const SweepResult&)>& on_complete) {
    std::vector<SweepResult> results(configs.size());
    if (configs.empty()) return results;
    std::atomic<std::size_t> next{0};
    std::mutex callback_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            SweepResult& result = results[i];
            result.config = configs[i];
            try {
                result.record = run_scenario(configs[i]);
            } catch (const std::exception& e) {
                result.error = e.what();
            }
            if (on_complete) {
                std::lock_guard lock(callback_mutex);
                on_complete(result);
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, configs.size());
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    return results;
}

std::filesystem::path output_root() {
    if (const char* env = std::getenv("LOOPY_OUTPUT_ROOT"); env != nullptr && *env != '\0') return env;
    return std::filesystem::current_path();
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& dir) {
    return dir.is_absolute() ? dir : output_root() / dir;
}

}  // namespace loopy
