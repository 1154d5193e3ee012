#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "loopy/fault_injection.hpp"
#include "loopy/morphogen_ring.hpp"

namespace loopy {

struct ScheduleStep {
    std::string param;   // one of v, beta, gamma_act, gamma_inh, alpha
    double value = 0.0;
    double duration = 1.0;

    friend bool operator==(const ScheduleStep&, const ScheduleStep&) = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    RingParams ring;
    std::vector<ScheduleStep> schedule;
    FailureSchedule failure;
    double settle_time = 0.0;
    std::string output_dir;
    std::size_t record_stride = 25;
    bool store_snapshots = false;

    void validate() const;
    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

bool is_schedulable_param(std::string_view name);

/// Sets one schedulable parameter on `params`.
void set_ring_param(RingParams& params, std::string_view name, double value);

/// Ring parameters in effect during schedule step `index`: the base ring with
/// every step up to and including `index` applied in order.
RingParams params_for_step(const ScenarioConfig& config, std::size_t index);

/// Number of integration steps in a duration (rounded to the nearest step).
std::size_t steps_in(double duration, double dt);

ScenarioConfig parse_config(std::string_view text);
std::string serialize_config(const ScenarioConfig& config);
ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(std::string_view name);

}  // namespace loopy
