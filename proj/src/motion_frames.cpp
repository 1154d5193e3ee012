#include "loopy/motion_frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loopy/errors.hpp"

namespace loopy {

RigidTransform rigid_register(std::span<const Vec2> reference, std::span<const Vec2> candidate) {
    if (reference.size() != candidate.size() || reference.size() < 3) {
        throw DegenerateConfigurationError("registration needs equal point counts >= 3");
    }
    const Vec2 c_ref = centroid(reference);
    const Vec2 c_cand = centroid(candidate);
    double sum_cross = 0.0;
    double sum_dot = 0.0;
    double spread = 0.0;
    for (std::size_t m = 0; m < reference.size(); ++m) {
        const Vec2 a = candidate[m] - c_cand;
        const Vec2 b = reference[m] - c_ref;
        sum_cross += cross(a, b);
        sum_dot += dot(a, b);
        spread += dot(a, a);
    }
    if (spread == 0.0 || (sum_cross == 0.0 && sum_dot == 0.0)) {
        throw DegenerateConfigurationError("all centred points coincide");
    }
    RigidTransform t;
    t.rotation = std::atan2(sum_cross, sum_dot);
    t.translation = c_ref - rotated(c_cand, t.rotation);
    return t;
}

PlacedShape advance_pose(const WorldPose& prev_pose, std::span<const Vec2> prev_world_positions,
                         const ChainShape& new_shape) {
    const std::vector<Vec2>& local = new_shape.positions;
    const Vec2 c_local = centroid(local);

    double rotation = prev_pose.rotation;
    if (!prev_world_positions.empty()) {
        if (prev_world_positions.size() != local.size()) {
            throw DegenerateConfigurationError("cell count changed between frames");
        }
        const double raw = rigid_register(prev_world_positions, local).rotation;
        rotation = prev_pose.rotation + std::remainder(raw - prev_pose.rotation, 2.0 * std::numbers::pi);
    }

    PlacedShape placed;
    placed.pose.rotation = rotation;
    placed.pose.translation = Vec2{} - rotated(c_local, rotation);
    placed.world_positions.resize(local.size());
    for (std::size_t m = 0; m < local.size(); ++m) {
        placed.world_positions[m] = rotated(local[m] - c_local, rotation);
    }
    return placed;
}

double omega_mc_analytic(double v, std::size_t n_cells, double s) {
    return v * 2.0 * std::numbers::pi / (static_cast<double>(n_cells) * s);
}

double ring_variance(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return var / static_cast<double>(values.size());
}

double pattern_shift(std::span<const double> previous, std::span<const double> current) {
    const std::size_t n = previous.size();
    if (current.size() != n || n < 3) {
        throw DegenerateConfigurationError("pattern_shift needs equal lengths >= 3");
    }
    double mp = 0.0, mc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        mp += previous[m];
        mc += current[m];
    }
    mp /= static_cast<double>(n);
    mc /= static_cast<double>(n);

    // corr[j] = sum_m prev[m] * cur[m - j]; peaks at j = shift.
    const auto ni = static_cast<long>(n);
    std::vector<double> corr(n);
    for (long j = 0; j < ni; ++j) {
        double acc = 0.0;
        for (long m = 0; m < ni; ++m) {
            acc += (previous[static_cast<std::size_t>(m)] - mp) *
                   (current[static_cast<std::size_t>(((m - j) % ni + ni) % ni)] - mc);
        }
        corr[static_cast<std::size_t>(j)] = acc;
    }
    // A k-lobed pattern has k near-equal periodic copies of the peak; take
    // the smallest displacement among local maxima close to the global one.
    const auto [lo_it, hi_it] = std::minmax_element(corr.begin(), corr.end());
    const double floor_value = *hi_it - 0.1 * (*hi_it - *lo_it);
    auto displacement = [n](std::size_t j) { return std::min(j, n - j); };
    std::size_t best = static_cast<std::size_t>(hi_it - corr.begin());
    for (std::size_t j = 0; j < n; ++j) {
        const bool local_max = corr[j] >= corr[(j + n - 1) % n] && corr[j] >= corr[(j + 1) % n];
        if (local_max && corr[j] >= floor_value && displacement(j) < displacement(best)) best = j;
    }
    const double left = corr[(best + n - 1) % n];
    const double right = corr[(best + 1) % n];
    const double centre = corr[best];
    const double curvature = left - 2.0 * centre + right;
    double offset = 0.0;
    if (curvature < 0.0) offset = 0.5 * (left - right) / curvature;

    double lag = static_cast<double>(best);
    if (lag > static_cast<double>(n) / 2.0) lag -= static_cast<double>(n);
    return lag + offset;
}

std::vector<PatternRate> omega_mc_empirical(std::span<const std::vector<double>> history,
                                            double interval, const EmpiricalOptions& options) {
    std::vector<PatternRate> rates;
    if (history.size() < 2) return rates;
    rates.reserve(history.size() - 1);
    const double n = static_cast<double>(history.front().size());
    for (std::size_t i = 1; i < history.size(); ++i) {
        PatternRate r;
        if (ring_variance(history[i - 1]) < options.uniform_variance ||
            ring_variance(history[i]) < options.uniform_variance) {
            r.uniform = true;
        } else {
            r.shift = pattern_shift(history[i - 1], history[i]);
            r.omega = r.shift / interval * (2.0 * std::numbers::pi / n);
        }
        rates.push_back(r);
    }
    return rates;
}

}  // namespace loopy
