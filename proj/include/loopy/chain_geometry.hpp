#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "loopy/vec2.hpp"

namespace loopy {

/// Planar closed chain of N equal links.
///
/// The chain starts at the origin heading along +x. Link m is laid down and
/// then the heading turns by angles[m], so positions[m] is the joint at the
/// end of link m and angles[m] is the exterior turning angle there. A closed
/// counter-clockwise loop has sum(angles) == 2*pi and positions[N-1] at the
/// origin.
struct ChainShape {
    std::vector<Vec2> positions;
    std::vector<double> angles;
    double closure_gap = 0.0;        // |positions[N-1]|
    double heading_mismatch = 0.0;   // sum(angles) - 2*pi, wrapped to (-pi, pi]
    double closure_residual = 0.0;   // closure_gap + s*|heading_mismatch|
};

ChainShape angles_to_polyline(std::span<const double> angles, double s);

struct ProjectionOptions {
    double tolerance = 1e-9;
    int max_iterations = 50;
};

struct ProjectionResult {
    std::vector<double> angles;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    // False when the free joints cannot span the closure constraints
    // (fewer than three free joints or a rank-deficient Jacobian at the end).
    bool feasible = true;
};

/// Least-change projection of `goal_angles` onto the closed-loop manifold
/// (sum = 2*pi, end point at the origin) by Gauss-Newton iteration.
/// Joints with `frozen[m] != 0` are held exactly at their goal value.
/// Never throws on non-convergence; inspect `converged` / `feasible`.
ProjectionResult project_to_closure(std::span<const double> goal_angles, double s,
                                    const ProjectionOptions& options = {},
                                    std::span<const std::uint8_t> frozen = {});

Vec2 centroid(std::span<const Vec2> positions);
inline Vec2 centroid(const ChainShape& shape) { return centroid(shape.positions); }

struct PolarProfile {
    Vec2 center;
    std::vector<double> radii;
    std::vector<double> azimuths;   // unwrapped by cell order
};

/// Radius and azimuth of every cell about the centroid.
/// Throws DegenerateShapeError if a cell sits on the centroid (r < 1e-9*s).
PolarProfile polar_profile(std::span<const Vec2> positions, double s);

/// Exterior turning angle at every vertex, wrapped to (-pi, pi].
std::vector<double> turning_angles(std::span<const Vec2> positions);

}  // namespace loopy
