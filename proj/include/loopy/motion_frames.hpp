#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "loopy/chain_geometry.hpp"
#include "loopy/vec2.hpp"

namespace loopy {

/// Placement of the shape-local frame in the environment:
/// world = R(rotation) * local + translation. `rotation` is unwrapped.
struct WorldPose {
    double rotation = 0.0;
    Vec2 translation{};
};

struct OmegaTriple {
    double omega_mc = 0.0;
    double omega_me = 0.0;
    double omega_ce = 0.0;
};

/// x -> R(rotation) * x + translation maps candidate onto reference in the
/// least-squares sense.
struct RigidTransform {
    double rotation = 0.0;
    Vec2 translation{};
};

/// Closed-form planar orthogonal registration.
/// Throws DegenerateConfigurationError when the centred candidate (or
/// reference) collapses to a point.
RigidTransform rigid_register(std::span<const Vec2> reference, std::span<const Vec2> candidate);

struct PlacedShape {
    WorldPose pose;
    std::vector<Vec2> world_positions;
};

/// Quasi-static motion step: the new shape is placed by the rigid transform
/// that minimises total squared cell displacement from the previous world
/// positions, with the centroid pinned at the origin. An empty
/// `prev_world_positions` places the first shape at `prev_pose.rotation`.
PlacedShape advance_pose(const WorldPose& prev_pose, std::span<const Vec2> prev_world_positions,
                         const ChainShape& new_shape);

/// omega_mc = v * 2*pi / (N * s).
double omega_mc_analytic(double v, std::size_t n_cells, double s);

/// Sub-cell shift of `current` relative to `previous`, in cells. Positive when
/// the pattern moved toward lower cell indices (the transport direction for
/// v > 0), i.e. current[m] ~= previous[m + shift].
double pattern_shift(std::span<const double> previous, std::span<const double> current);

struct PatternRate {
    double omega = 0.0;     // rad / time
    double shift = 0.0;     // cells over the interval
    bool uniform = false;   // no usable gradient; omega forced to 0
};

struct EmpiricalOptions {
    double uniform_variance = 1e-6;
};

/// Rate at which the q_act pattern slides along the chain between successive
/// snapshots spaced `interval` apart.
std::vector<PatternRate> omega_mc_empirical(std::span<const std::vector<double>> history,
                                            double interval, const EmpiricalOptions& options = {});

/// Variance of a ring-valued sequence about its mean.
double ring_variance(std::span<const double> values);

/// omega_me = omega_mc + omega_ce.
inline double compose_frames(double omega_mc, double omega_ce) { return omega_mc + omega_ce; }

}  // namespace loopy
