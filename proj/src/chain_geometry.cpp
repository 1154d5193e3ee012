#include "loopy/chain_geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "loopy/errors.hpp"

namespace loopy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

std::vector<Vec2> chain_positions(std::span<const double> angles, double s) {
    std::vector<Vec2> positions(angles.size());
    Vec2 p{};
    double heading = 0.0;
    for (std::size_t m = 0; m < angles.size(); ++m) {
        p += Vec2{s * std::cos(heading), s * std::sin(heading)};
        positions[m] = p;
        heading += angles[m];
    }
    return positions;
}

double sum(std::span<const double> values) {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

struct ClosureEval {
    Eigen::Vector3d c;    // heading, end-x, end-y
    double residual;      // same measure as ChainShape::closure_residual
};

ClosureEval evaluate(std::span<const double> angles, double s, std::vector<Vec2>& positions) {
    positions = chain_positions(angles, s);
    const Vec2 end = positions.back();
    const double heading = sum(angles) - kTwoPi;
    ClosureEval e;
    e.c = Eigen::Vector3d(heading, end.x, end.y);
    e.residual = norm(end) + s * std::abs(wrap_angle(heading));
    return e;
}

}  // namespace

ChainShape angles_to_polyline(std::span<const double> angles, double s) {
    ChainShape shape;
    shape.angles.assign(angles.begin(), angles.end());
    shape.positions = chain_positions(angles, s);
    if (!shape.positions.empty()) {
        shape.closure_gap = norm(shape.positions.back());
        shape.heading_mismatch = wrap_angle(sum(angles) - kTwoPi);
        shape.closure_residual = shape.closure_gap + s * std::abs(shape.heading_mismatch);
    }
    return shape;
}

ProjectionResult project_to_closure(std::span<const double> goal_angles, double s,
                                    const ProjectionOptions& options, std::span<const std::uint8_t> frozen) {
    const std::size_t n = goal_angles.size();
    if (n < 4) throw ConfigError("project_to_closure needs at least 4 angles");
    if (!frozen.empty() && frozen.size() != n) throw ConfigError("frozen mask length mismatch");

    auto is_free = [&](std::size_t m) { return frozen.empty() || !frozen[m]; };
    std::vector<std::size_t> free_idx;
    for (std::size_t m = 0; m < n; ++m) {
        if (is_free(m)) free_idx.push_back(m);
    }

    ProjectionResult result;
    result.angles.assign(goal_angles.begin(), goal_angles.end());

    // Exact least-change correction for the linear constraint sum = 2*pi.
    if (!free_idx.empty()) {
        const double shift = (kTwoPi - sum(result.angles)) / static_cast<double>(free_idx.size());
        for (std::size_t m : free_idx) result.angles[m] += shift;
    }

    std::vector<Vec2> positions;
    ClosureEval eval = evaluate(result.angles, s, positions);
    result.residual = eval.residual;

    if (free_idx.size() < 3) {
        result.feasible = false;
        result.converged = eval.residual <= options.tolerance;
        return result;
    }

    const std::size_t k = free_idx.size();
    Eigen::MatrixXd jac(3, static_cast<Eigen::Index>(k));
    Eigen::VectorXd d(static_cast<Eigen::Index>(k));
    std::vector<double> trial(n);
    std::vector<Vec2> trial_positions;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const Vec2 end = positions.back();
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t m = free_idx[j];
            const Vec2 arm = end - positions[m];
            const auto col = static_cast<Eigen::Index>(j);
            jac(0, col) = 1.0;
            jac(1, col) = -arm.y;
            jac(2, col) = arm.x;
            d(col) = goal_angles[m] - result.angles[m];
        }

        // Gauss-Newton step on the constraint manifold:
        //   delta = d - J^T (J J^T)^-1 (c + J d)
        Eigen::Matrix3d jjt = jac * jac.transpose();
        const double ridge = 1e-14 * std::max(1.0, jjt.trace());
        jjt.diagonal().array() += ridge;
        const Eigen::LDLT<Eigen::Matrix3d> ldlt(jjt);
        const Eigen::Vector3d rhs = eval.c + jac * d;
        const Eigen::Vector3d mult = ldlt.solve(rhs);
        const Eigen::VectorXd delta = d - jac.transpose() * mult;
        const double step_norm = delta.cwiseAbs().maxCoeff();

        result.iterations = iter + 1;
        if (eval.residual <= options.tolerance && step_norm <= 1e-13) break;

        // Backtrack only while the constraints are not yet met; once feasible
        // the step is a tangential refinement of the objective.
        double scale = 1.0;
        ClosureEval trial_eval{};
        for (int attempt = 0; attempt < 30; ++attempt) {
            trial = result.angles;
            for (std::size_t j = 0; j < k; ++j) {
                trial[free_idx[j]] += scale * delta(static_cast<Eigen::Index>(j));
            }
            trial_eval = evaluate(trial, s, trial_positions);
            if (eval.residual <= options.tolerance || trial_eval.residual < eval.residual) break;
            scale *= 0.5;
        }
        if (!(trial_eval.residual < eval.residual) && eval.residual > options.tolerance) {
            break;  // stalled
        }
        result.angles = trial;
        positions = trial_positions;
        eval = trial_eval;
        result.residual = eval.residual;
    }

    result.converged = result.residual <= options.tolerance;
    if (!result.converged) {
        Eigen::MatrixXd j_end(3, static_cast<Eigen::Index>(k));
        const Vec2 end = positions.back();
        for (std::size_t j = 0; j < k; ++j) {
            const Vec2 arm = end - positions[free_idx[j]];
            j_end.col(static_cast<Eigen::Index>(j)) << 1.0, -arm.y, arm.x;
        }
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(j_end);
        const auto& sv = svd.singularValues();
        result.feasible = sv(sv.size() - 1) > 1e-9 * std::max(1.0, sv(0));
    }
    return result;
}

Vec2 centroid(std::span<const Vec2> positions) {
    Vec2 c{};
    for (const Vec2& p : positions) c += p;
    if (!positions.empty()) c *= 1.0 / static_cast<double>(positions.size());
    return c;
}

PolarProfile polar_profile(std::span<const Vec2> positions, double s) {
    PolarProfile out;
    out.center = centroid(positions);
    out.radii.resize(positions.size());
    out.azimuths.resize(positions.size());
    for (std::size_t m = 0; m < positions.size(); ++m) {
        const Vec2 rel = positions[m] - out.center;
        const double r = norm(rel);
        if (r < 1e-9 * s) throw DegenerateShapeError("cell coincides with the centroid");
        out.radii[m] = r;
        const double raw = std::atan2(rel.y, rel.x);
        out.azimuths[m] = m == 0 ? raw : out.azimuths[m - 1] + wrap_angle(raw - out.azimuths[m - 1]);
    }
    return out;
}

std::vector<double> turning_angles(std::span<const Vec2> positions) {
    const std::size_t n = positions.size();
    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        const Vec2 incoming = positions[m] - positions[(m + n - 1) % n];
        const Vec2 outgoing = positions[(m + 1) % n] - positions[m];
        out[m] = std::atan2(cross(incoming, outgoing), dot(incoming, outgoing));
    }
    return out;
}

}  // namespace loopy
