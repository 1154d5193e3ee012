#include "loopy/morphogen_ring.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "loopy/errors.hpp"

namespace loopy {

std::string_view to_string(DiffusionDenominator d) {
    switch (d) {
        case DiffusionDenominator::paper_2s: return "paper_2s";
        case DiffusionDenominator::classic_s_squared: return "classic_s_squared";
    }
    return "paper_2s";
}

DiffusionDenominator diffusion_denominator_from_string(std::string_view text) {
    if (text == "paper_2s") return DiffusionDenominator::paper_2s;
    if (text == "classic_s_squared") return DiffusionDenominator::classic_s_squared;
    throw ConfigError("unknown diffusion_denominator '" + std::string(text) + "'");
}

double RingParams::diffusion_divisor() const {
    return diffusion_denominator == DiffusionDenominator::paper_2s ? 2.0 * s : s * s;
}

void RingParams::validate() const {
    const double values[] = {gamma_act, gamma_inh, gamma_pas, alpha, beta, beta_scale,
                             v, s, dt, angle_limit, init_amplitude};
    for (double x : values) {
        if (!std::isfinite(x)) throw ConfigError("ring parameters must be finite");
    }
    if (dt <= 0.0) throw ConfigError("dt must be > 0");
    if (s <= 0.0) throw ConfigError("s must be > 0");
    if (n_cells < 4) throw ConfigError("n_cells must be >= 4");
    if (angle_limit <= 0.0) throw ConfigError("angle_limit must be > 0");
    if (init_amplitude < 0.0) throw ConfigError("init_amplitude must be >= 0");
    if (gamma_act < 0.0 || gamma_inh < 0.0 || gamma_pas < 0.0) {
        throw ConfigError("diffusion rates must be >= 0");
    }
    const double gamma_max = std::max({gamma_act, gamma_inh, gamma_pas});
    const double guard = dt * (gamma_max / diffusion_divisor() + std::abs(v) / (2.0 * s));
    if (guard >= 1.0) {
        throw ConfigError("stability guard violated: dt*(max(gamma)/den + |v|/(2s)) = " +
                          std::to_string(guard) + " >= 1");
    }
}

namespace {

// 53-bit mantissa fill; independent of the standard library's distributions
// so the stream is identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

MorphogenState init_state(const RingParams& params) {
    params.validate();
    const std::size_t n = params.n_cells;
    MorphogenState state{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    std::mt19937_64 rng(params.seed);
    const double a = params.init_amplitude;
    for (std::size_t m = 0; m < n; ++m) {
        state.q_act[m] = a * (2.0 * unit_uniform(rng) - 1.0);
        state.q_inh[m] = a * (2.0 * unit_uniform(rng) - 1.0);
        state.q_pas[m] = a * (2.0 * unit_uniform(rng) - 1.0);
    }
    return state;
}

MorphogenState step_morphogens(const MorphogenState& state, const RingParams& params,
                               std::span<const std::size_t> disabled) {
    const std::size_t n = state.size();
    if (n != params.n_cells || state.q_inh.size() != n || state.q_pas.size() != n) {
        throw ConfigError("state length does not match n_cells");
    }
    for (std::size_t idx : disabled) {
        if (idx >= n) throw ConfigError("disabled cell index out of range");
    }

    const double adv = params.v / (2.0 * params.s);
    const double den = params.diffusion_divisor();
    const double inhibition = params.beta * params.beta_scale;
    const double dt = params.dt;

    // Neighbour sums are formed as (left + right) so that reversing the ring
    // reproduces the same floating-point operations.
    auto advection = [&](const std::vector<double>& q, std::size_t prev, std::size_t next) {
        return adv * (q[next] - q[prev]);
    };
    auto diffusion = [&](const std::vector<double>& q, std::size_t prev, std::size_t m,
                         std::size_t next, double gamma) {
        return gamma * (((q[prev] + q[next]) - 2.0 * q[m]) / den);
    };
    auto check = [](double x, std::size_t m, const char* term) {
        if (!std::isfinite(x)) throw NonFiniteError(m, term);
    };

    MorphogenState next_state{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t prev = (m + n - 1) % n;
        const std::size_t next = (m + 1) % n;

        const double a = state.q_act[m];
        const double h = state.q_inh[m];

        const double act_adv = advection(state.q_act, prev, next);
        const double act_dif = diffusion(state.q_act, prev, m, next, params.gamma_act);
        const double act_rea = a - a * a * a - h + params.alpha;
        check(act_adv, m, "q_act transport");
        check(act_dif, m, "q_act diffusion");
        check(act_rea, m, "q_act reaction");

        const double inh_adv = advection(state.q_inh, prev, next);
        const double inh_dif = diffusion(state.q_inh, prev, m, next, params.gamma_inh);
        const double inh_rea = inhibition * (a - h);
        check(inh_adv, m, "q_inh transport");
        check(inh_dif, m, "q_inh diffusion");
        check(inh_rea, m, "q_inh reaction");

        const double pas_adv = advection(state.q_pas, prev, next);
        const double pas_dif = diffusion(state.q_pas, prev, m, next, params.gamma_pas);
        check(pas_adv, m, "q_pas transport");
        check(pas_dif, m, "q_pas diffusion");

        next_state.q_act[m] = (act_adv + act_dif + act_rea) * dt + a;
        next_state.q_inh[m] = (inh_adv + inh_dif + inh_rea) * dt + h;
        next_state.q_pas[m] = (pas_adv + pas_dif) * dt + state.q_pas[m];
        check(next_state.q_act[m], m, "q_act update");
        check(next_state.q_inh[m], m, "q_inh update");
        check(next_state.q_pas[m], m, "q_pas update");
    }
    return next_state;
}

std::vector<double> morphogen_to_angles(const MorphogenState& state, const RingParams& params) {
    std::vector<double> angles(state.size());
    for (std::size_t m = 0; m < angles.size(); ++m) {
        angles[m] = std::clamp(state.q_pas[m] + state.q_act[m], -params.angle_limit, params.angle_limit);
    }
    return angles;
}

double total_passive(const MorphogenState& state) {
    double total = 0.0;
    for (double q : state.q_pas) total += q;
    return total;
}

}  // namespace loopy
