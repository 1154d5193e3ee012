#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace loopy {

enum class FailureMode { none, sequential, random };

std::string_view to_string(FailureMode mode);
FailureMode failure_mode_from_string(std::string_view text);

struct FailureSchedule {
    FailureMode mode = FailureMode::none;
    double interval = 1.0;
    std::uint64_t seed = 1;
    std::size_t n_cells = 36;

    void validate() const;
    friend bool operator==(const FailureSchedule&, const FailureSchedule&) = default;
};

/// Order in which cells fail: 0..N-1 for sequential, a seeded shuffle for
/// random, empty for none.
std::vector<std::size_t> failure_order(const FailureSchedule& schedule);

/// Number of failed cells at time t: floor(t / interval) capped at N.
std::size_t failure_count(const FailureSchedule& schedule, double t);

/// Disabled cell indices at time t, in failure order.
std::vector<std::size_t> disabled_at(const FailureSchedule& schedule, double t);

/// Enabled cells take the goal angle; disabled cells keep their current angle.
std::vector<double> apply_actuation(std::span<const double> goal_angles, std::span<const double> current_angles,
                                    std::span<const std::size_t> disabled);

/// Boolean mask of length n with the disabled cells set.
std::vector<std::uint8_t> disabled_mask(std::span<const std::size_t> disabled, std::size_t n);

}  // namespace loopy
