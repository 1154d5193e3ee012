#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace loopy {

/// Which denominator the second-difference diffusion stencil uses.
enum class DiffusionDenominator {
    paper_2s,            // (q[m-1] - 2q[m] + q[m+1]) / (2s)
    classic_s_squared,   // (q[m-1] - 2q[m] + q[m+1]) / s^2
};

std::string_view to_string(DiffusionDenominator d);
DiffusionDenominator diffusion_denominator_from_string(std::string_view text);

/// Dynamic parameters of the ring plus simulator-only settings.
struct RingParams {
    double gamma_act = 1.0;
    double gamma_inh = 100.0;
    double gamma_pas = 1.0;
    double alpha = 0.001;
    double beta = 225.0;
    // Multiplies beta inside the inhibitor reaction term. 1.0 reproduces the
    // printed kinetics exactly.
    double beta_scale = 1.0;
    double v = 0.0;
    double s = 1.0;
    double dt = 0.01;
    std::size_t n_cells = 36;
    double angle_limit = 1.9;
    double init_amplitude = 0.01;
    std::uint64_t seed = 1;
    DiffusionDenominator diffusion_denominator = DiffusionDenominator::paper_2s;

    /// Throws ConfigError on invalid values or when the stability guard
    /// dt * (max(gamma)/den + |v|/(2s)) < 1 is violated.
    void validate() const;

    double diffusion_divisor() const;

    friend bool operator==(const RingParams&, const RingParams&) = default;
};

/// Per-cell morphogen quantities on a closed ring.
struct MorphogenState {
    std::vector<double> q_act;
    std::vector<double> q_inh;
    std::vector<double> q_pas;

    std::size_t size() const { return q_act.size(); }

    friend bool operator==(const MorphogenState&, const MorphogenState&) = default;
};

MorphogenState init_state(const RingParams& params);

/// Advances every cell by one explicit Euler step. Chemistry runs on all
/// cells; `disabled` only has to reference valid cells (failures affect
/// actuation, not computation).
MorphogenState step_morphogens(const MorphogenState& state, const RingParams& params,
                               std::span<const std::size_t> disabled = {});

/// theta_m = clamp(q_pas_m + q_act_m, -angle_limit, angle_limit).
std::vector<double> morphogen_to_angles(const MorphogenState& state, const RingParams& params);

double total_passive(const MorphogenState& state);

}  // namespace loopy
