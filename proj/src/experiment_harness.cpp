#include "loopy/experiment_harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "loopy/chain_geometry.hpp"
#include "loopy/errors.hpp"
#include "loopy/fault_injection.hpp"

namespace loopy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mean_of(std::span<const double> values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
}

// Mutable per-run measurement state carried from frame to frame.
struct Tracker {
    WorldPose pose;
    std::vector<Vec2> world;
    std::vector<Vec2> reference;
    std::vector<double> angles;
    std::vector<double> prev_q_act;
    std::vector<double> cell_azimuth;
    MorphologyTracker morphology;
    double angle_mc = 0.0;
};

FrameRecord measure_frame(const ScenarioConfig& config, const MorphogenState& state, const RingParams& params,
                          std::span<const std::size_t> disabled, Tracker& tr, RunRecord& record) {
    const std::size_t n = params.n_cells;
    const double s = params.s;
    FrameRecord frame;
    frame.n_disabled = disabled.size();

    const std::vector<double> goal = morphogen_to_angles(state, params);
    const std::vector<double> effective =
        tr.angles.empty() ? goal : apply_actuation(goal, tr.angles, disabled);
    const std::vector<std::uint8_t> mask = disabled_mask(disabled, n);
    ProjectionResult projection = project_to_closure(effective, s, {}, mask);
    frame.projection_converged = projection.converged;
    if (!projection.converged) {
        ++record.projection_failures;
        if (!tr.angles.empty()) projection.angles = tr.angles;
    }
    tr.angles = std::move(projection.angles);

    const ChainShape shape = angles_to_polyline(tr.angles, s);
    PlacedShape placed = advance_pose(tr.pose, tr.world, shape);
    tr.pose = placed.pose;
    tr.world = std::move(placed.world_positions);

    const PolarProfile profile = polar_profile(tr.world, s);
    frame.lobes = count_lobes(profile.radii, profile.azimuths);

    const EmpiricalOptions empirical;
    frame.uniform_pattern = ring_variance(state.q_act) < empirical.uniform_variance;
    if (!tr.prev_q_act.empty() && !frame.uniform_pattern &&
        ring_variance(tr.prev_q_act) >= empirical.uniform_variance) {
        tr.angle_mc += pattern_shift(tr.prev_q_act, state.q_act) * kTwoPi / static_cast<double>(n);
    }
    tr.prev_q_act = state.q_act;
    frame.angle_mc = tr.angle_mc;

    if (tr.cell_azimuth.empty()) {
        tr.cell_azimuth = profile.azimuths;
    } else {
        for (std::size_t m = 0; m < n; ++m) {
            tr.cell_azimuth[m] += std::remainder(profile.azimuths[m] - tr.cell_azimuth[m], kTwoPi);
        }
    }
    // Azimuths are measured counter-clockwise; reported angles are clockwise.
    frame.angle_ce = -mean_of(tr.cell_azimuth);
    frame.angle_me = -tr.morphology.update(frame.lobes).azimuth;

    if (tr.reference.empty()) tr.reference = tr.world;
    frame.turning_distance = turning_distance(tr.reference, tr.world);

    if (config.store_snapshots) {
        record.snapshots.push_back({state, tr.angles, tr.world, tr.pose});
    }
    return frame;
}

void fill_step_rates(RunRecord& record) {
    std::size_t first = 0;
    while (first < record.frames.size()) {
        std::size_t last = first;
        while (last < record.frames.size() && record.frames[last].step == record.frames[first].step) ++last;
        if (last - first >= 3) {
            TimeSeriesF mc{{}, record.frame_interval, "omega_mc"};
            TimeSeriesF me{{}, record.frame_interval, "omega_me"};
            TimeSeriesF ce{{}, record.frame_interval, "omega_ce"};
            for (std::size_t i = first; i < last; ++i) {
                mc.values.push_back(record.frames[i].angle_mc);
                me.values.push_back(record.frames[i].angle_me);
                ce.values.push_back(record.frames[i].angle_ce);
            }
            const auto rate_mc = estimate_angular_velocity(mc);
            const auto rate_me = estimate_angular_velocity(me);
            const auto rate_ce = estimate_angular_velocity(ce);
            for (std::size_t i = first; i < last; ++i) {
                record.frames[i].omega = {rate_mc.values[i - first], rate_me.values[i - first],
                                          rate_ce.values[i - first]};
            }
        }
        first = last;
    }
}

}  // namespace

RunRecord run_scenario(const ScenarioConfig& config) {
    config.validate();
    RunRecord record;
    record.config = config;
    const double dt = config.ring.dt;
    record.frame_interval = static_cast<double>(config.record_stride) * dt;

    MorphogenState state = init_state(config.ring);
    const RingParams settle_params = params_for_step(config, 0);
    try {
        for (std::size_t i = 0, n = steps_in(config.settle_time, dt); i < n; ++i) {
            state = step_morphogens(state, settle_params);
        }
    } catch (const Error& e) {
        throw FrameError(0, std::string("during settle: ") + e.what());
    }

    const std::vector<std::size_t> order = failure_order(config.failure);
    Tracker tracker;
    std::size_t global = 0;

    auto record_frame = [&](std::size_t step, const RingParams& params) {
        const double t = static_cast<double>(global) * dt;
        // Guard against t landing a rounding error below a failure instant.
        const std::size_t k = failure_count(config.failure, t + 1e-9 * config.failure.interval);
        const std::span<const std::size_t> disabled(order.data(), k);
        try {
            FrameRecord frame = measure_frame(config, state, params, disabled, tracker, record);
            frame.t = t;
            frame.step = step;
            record.frames.push_back(std::move(frame));
        } catch (const Error& e) {
            throw FrameError(record.frames.size(), e.what());
        }
    };

    record_frame(0, settle_params);
    for (std::size_t step = 0; step < config.schedule.size(); ++step) {
        const RingParams params = params_for_step(config, step);
        const std::size_t n_steps = steps_in(config.schedule[step].duration, dt);
        for (std::size_t j = 0; j < n_steps; ++j) {
            try {
                state = step_morphogens(state, params);
            } catch (const Error& e) {
                throw FrameError(record.frames.size(), e.what());
            }
            ++global;
            if (global % config.record_stride == 0) record_frame(step, params);
        }
    }

    fill_step_rates(record);
    for (std::size_t step = 0; step < config.schedule.size(); ++step) {
        const auto [first, last] = trimmed_window(record, step);
        record.summaries.push_back(summarize_window(record, step, first, last));
    }
    return record;
}

std::pair<std::size_t, std::size_t> trimmed_window(const RunRecord& record, std::size_t step, double trim) {
    std::size_t first = 0;
    while (first < record.frames.size() && record.frames[first].step < step) ++first;
    std::size_t last = first;
    while (last < record.frames.size() && record.frames[last].step == step) ++last;
    const auto cut = static_cast<std::size_t>(std::floor(trim * static_cast<double>(last - first)));
    return {first + cut, last - cut};
}

StepSummary summarize_window(const RunRecord& record, std::size_t step, std::size_t first, std::size_t last) {
    StepSummary summary;
    summary.step = step;
    const ScenarioConfig& config = record.config;
    if (step < config.schedule.size()) {
        summary.param = config.schedule[step].param;
        summary.value = config.schedule[step].value;
        std::size_t begin = 0;
        for (std::size_t i = 0; i < step; ++i) begin += steps_in(config.schedule[i].duration, config.ring.dt);
        const std::size_t end = begin + steps_in(config.schedule[step].duration, config.ring.dt);
        summary.t_start = static_cast<double>(begin) * config.ring.dt;
        summary.t_end = static_cast<double>(end) * config.ring.dt;
    }
    summary.frames = last > first ? last - first : 0;
    if (summary.frames == 0) return summary;

    std::vector<double> mc, me, ce;
    std::map<int, std::size_t> counts;
    double amplitude = 0.0;
    double turning = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const FrameRecord& f = record.frames[i];
        mc.push_back(f.omega.omega_mc);
        me.push_back(f.omega.omega_me);
        ce.push_back(f.omega.omega_ce);
        ++counts[f.lobes.count];
        amplitude += f.lobes.amplitude;
        turning += f.turning_distance;
    }
    summary.omega_mc = mean_std(mc);
    summary.omega_me = mean_std(me);
    summary.omega_ce = mean_std(ce);
    std::size_t best = 0;
    for (const auto& [count, freq] : counts) {
        if (freq > best) {
            best = freq;
            summary.lobe_count = count;
        }
    }
    const auto nf = static_cast<double>(summary.frames);
    summary.lobe_amplitude = amplitude / nf;
    summary.turning_distance = turning / nf;
    summary.n_disabled = record.frames[last - 1].n_disabled;
    return summary;
}

}  // namespace loopy
