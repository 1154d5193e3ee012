#include "loopy/fault_injection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "loopy/errors.hpp"

namespace loopy {

std::string_view to_string(FailureMode mode) {
    switch (mode) {
        case FailureMode::none: return "none";
        case FailureMode::sequential: return "sequential";
        case FailureMode::random: return "random";
    }
    return "none";
}

FailureMode failure_mode_from_string(std::string_view text) {
    if (text == "none") return FailureMode::none;
    if (text == "sequential") return FailureMode::sequential;
    if (text == "random") return FailureMode::random;
    throw ConfigError("unknown failure mode: " + std::string(text));
}

void FailureSchedule::validate() const {
    if (mode != FailureMode::none && !(interval > 0.0 && std::isfinite(interval))) {
        throw ConfigError("failure interval must be finite and > 0");
    }
    if (n_cells == 0) throw ConfigError("failure n_cells must be > 0");
}

std::vector<std::size_t> failure_order(const FailureSchedule& schedule) {
    if (schedule.mode == FailureMode::none) return {};
    std::vector<std::size_t> order(schedule.n_cells);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (schedule.mode == FailureMode::random) {
        // Explicit Fisher-Yates: std::shuffle is not specified bit-for-bit.
        std::mt19937_64 rng(schedule.seed);
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(order[i], order[j]);
        }
    }
    return order;
}

std::size_t failure_count(const FailureSchedule& schedule, double t) {
    if (schedule.mode == FailureMode::none || !(t >= 0.0)) return 0;
    const double k = std::floor(t / schedule.interval);
    if (k >= static_cast<double>(schedule.n_cells)) return schedule.n_cells;
    return static_cast<std::size_t>(k);
}

std::vector<std::size_t> disabled_at(const FailureSchedule& schedule, double t) {
    std::vector<std::size_t> order = failure_order(schedule);
    order.resize(failure_count(schedule, t));
    return order;
}

std::vector<double> apply_actuation(std::span<const double> goal_angles, std::span<const double> current_angles,
                                    std::span<const std::size_t> disabled) {
    if (goal_angles.size() != current_angles.size()) throw ConfigError("apply_actuation: length mismatch");
    std::vector<double> effective(goal_angles.begin(), goal_angles.end());
    for (std::size_t idx : disabled) {
        if (idx >= effective.size()) throw ConfigError("apply_actuation: disabled index out of range");
        effective[idx] = current_angles[idx];
    }
    return effective;
}

std::vector<std::uint8_t> disabled_mask(std::span<const std::size_t> disabled, std::size_t n) {
    std::vector<std::uint8_t> mask(n, 0);
    for (std::size_t idx : disabled) {
        if (idx >= n) throw ConfigError("disabled index out of range");
        mask[idx] = 1;
    }
    return mask;
}

}  // namespace loopy
