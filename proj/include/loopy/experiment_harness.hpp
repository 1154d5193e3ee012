#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "loopy/morphogen_ring.hpp"
#include "loopy/motion_frames.hpp"
#include "loopy/pattern_analysis.hpp"
#include "loopy/scenario_config.hpp"

namespace loopy {

inline constexpr const char* kVersionString = "loopy 1.0.0";

/// All angular quantities are reported positive clockwise, i.e. toward
/// decreasing cell index.
struct FrameRecord {
    double t = 0.0;                  // time since measurement start
    std::size_t step = 0;            // schedule step index
    OmegaTriple omega;               // smoothed within the step window
    double angle_mc = 0.0;           // accumulated pattern rotation along the chain
    double angle_me = 0.0;           // morphology azimuth in the environment
    double angle_ce = 0.0;           // mean cell azimuth in the environment
    LobeMetrics lobes;
    double turning_distance = 0.0;   // vs the shape at measurement start
    std::size_t n_disabled = 0;
    bool projection_converged = true;
    bool uniform_pattern = false;
};

struct FrameSnapshot {
    MorphogenState state;
    std::vector<double> angles;
    std::vector<Vec2> world_positions;
    WorldPose pose;
};

struct StepSummary {
    std::size_t step = 0;
    std::string param;
    double value = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t frames = 0;          // frames inside the trimmed window
    MeanStd omega_mc;
    MeanStd omega_me;
    MeanStd omega_ce;
    int lobe_count = 0;              // most frequent count in the trimmed window
    double lobe_amplitude = 0.0;
    double turning_distance = 0.0;
    std::size_t n_disabled = 0;      // at the end of the step
};

struct RunRecord {
    ScenarioConfig config;
    std::vector<FrameRecord> frames;
    std::vector<StepSummary> summaries;
    std::vector<FrameSnapshot> snapshots;   // filled when config.store_snapshots
    std::size_t projection_failures = 0;
    double frame_interval = 0.0;
};

/// Fraction of each step window dropped at both ends before averaging.
inline constexpr double kSummaryTrim = 0.05;

RunRecord run_scenario(const ScenarioConfig& config);

/// Index range [first, last) of the frames of `step` after trimming.
std::pair<std::size_t, std::size_t> trimmed_window(const RunRecord& record, std::size_t step,
                                                   double trim = kSummaryTrim);

StepSummary summarize_window(const RunRecord& record, std::size_t step, std::size_t first, std::size_t last);

struct WriteOptions {
    bool plots = true;
};

/// Writes run.csv, summary.csv, run_meta, config.ini and (optionally) SVG plots.
void write_run(const RunRecord& record, const std::filesystem::path& dir, const WriteOptions& options = {});

std::string format_run_csv(const RunRecord& record);
std::string format_summary_csv(const RunRecord& record);
std::string format_run_meta(const RunRecord& record);

/// Reloads config, frames and summaries written by write_run.
RunRecord read_run(const std::filesystem::path& dir);

struct RunReport {
    std::vector<StepSummary> steps;
    std::optional<LinearFit> fit_mc;   // per-step means vs v, when v is swept
    std::optional<LinearFit> fit_me;
    std::optional<LinearFit> fit_ce;
    std::vector<double> turning_trace;          // per-step mean turning distance
    std::optional<double> isotonic_residual;    // RMS(trace - isotonic) / final isotonic value
};

RunReport make_report(const RunRecord& record);
std::string format_report(const RunReport& report, const ScenarioConfig& config);

/// Writes report.txt (and plots unless disabled) into an existing run directory.
std::string report_run(const std::filesystem::path& dir, const WriteOptions& options = {});

struct SweepResult {
    ScenarioConfig config;
    std::optional<RunRecord> record;
    std::string error;
};

/// Runs every config on up to `parallelism` threads. Errors are captured per
/// run. `on_complete` is invoked from the worker thread that finished the run.
std::vector<SweepResult> sweep(const std::vector<ScenarioConfig>& configs, std::size_t parallelism,
                               const std::function<void(const SweepResult&)>& on_complete = {});

/// Output root: `LOOPY_OUTPUT_ROOT` when set, otherwise the working directory.
std::filesystem::path output_root();

/// Resolves a relative run directory against output_root().
std::filesystem::path resolve_output_dir(const std::filesystem::path& dir);

}  // namespace loopy
