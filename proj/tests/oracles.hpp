#pragma once

// Brute-force reference implementations used as test oracles. They share no
// code with the library beyond Vec2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "loopy/vec2.hpp"

namespace oracle {

using loopy::Vec2;

inline constexpr double kPi = std::numbers::pi;

// Cumulative turning function of the polygon starting at vertex `start`,
// sampled at `samples` evenly spaced normalised arc-length midpoints.
inline std::vector<double> sampled_turning(std::span<const Vec2> poly, std::size_t start, std::size_t samples) {
    const std::size_t n = poly.size();
    std::vector<double> len(n), heading(n);
    double perimeter = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 a = poly[(start + k) % n];
        const Vec2 b = poly[(start + k + 1) % n];
        const Vec2 c = poly[(start + k + 2) % n];
        len[k] = std::hypot(b.x - a.x, b.y - a.y);
        perimeter += len[k];
        heading[k] = h;
        const double turn = std::atan2((b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x),
                                       (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y));
        h += turn;
    }
    std::vector<double> out(samples);
    std::size_t edge = 0;
    double edge_end = len[0] / perimeter;
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
        while (u > edge_end && edge + 1 < n) edge_end += len[++edge] / perimeter;
        out[i] = heading[edge];
    }
    return out;
}

// Dense-sampling turning distance: exhaustive scan of start vertices on both
// polygons and of the rotation offset on a fine grid around its optimum.
inline double turning_distance(std::span<const Vec2> a, std::span<const Vec2> b, std::size_t samples = 10000) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto fa = sampled_turning(a, i, samples);
        for (std::size_t j = 0; j < b.size(); ++j) {
            const auto fb = sampled_turning(b, j, samples);
            // Scan the offset on a coarse grid then refine by ternary search.
            auto cost = [&](double c) {
                double acc = 0.0;
                for (std::size_t k = 0; k < samples; ++k) {
                    const double d = fa[k] - fb[k] + c;
                    acc += d * d;
                }
                return acc / static_cast<double>(samples);
            };
            double lo = -4.0 * kPi, hi = 4.0 * kPi;
            double c0 = lo, v0 = cost(lo);
            for (int g = 1; g <= 400; ++g) {
                const double c = lo + (hi - lo) * g / 400.0;
                const double v = cost(c);
                if (v < v0) v0 = v, c0 = c;
            }
            double l = c0 - (hi - lo) / 400.0, r = c0 + (hi - lo) / 400.0;
            for (int it = 0; it < 100; ++it) {
                const double m1 = l + (r - l) / 3.0, m2 = r - (r - l) / 3.0;
                if (cost(m1) < cost(m2)) r = m2; else l = m1;
            }
            best = std::min(best, cost(0.5 * (l + r)));
        }
    }
    return std::sqrt(best);
}

// Rotation minimising the summed squared distance after centring, by grid
// search with the given step followed by local refinement.
inline double registration_angle(std::span<const Vec2> reference, std::span<const Vec2> candidate, double step) {
    Vec2 cr{}, cc{};
    for (std::size_t m = 0; m < reference.size(); ++m) {
        cr = cr + reference[m];
        cc = cc + candidate[m];
    }
    cr = cr * (1.0 / static_cast<double>(reference.size()));
    cc = cc * (1.0 / static_cast<double>(candidate.size()));
    auto cost = [&](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        double acc = 0.0;
        for (std::size_t m = 0; m < reference.size(); ++m) {
            const Vec2 p = candidate[m] - cc;
            const Vec2 q = reference[m] - cr;
            const double dx = c * p.x - s * p.y - q.x;
            const double dy = s * p.x + c * p.y - q.y;
            acc += dx * dx + dy * dy;
        }
        return acc;
    };
    double best_phi = -kPi, best = cost(-kPi);
    for (double phi = -kPi; phi <= kPi; phi += step) {
        const double v = cost(phi);
        if (v < best) best = v, best_phi = phi;
    }
    return best_phi;
}

// Ordinary least-squares slope and intercept through the normal equations.
inline Eigen::Vector2d least_squares(std::span<const double> x, std::span<const double> y) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        a(static_cast<Eigen::Index>(i), 0) = x[i];
        a(static_cast<Eigen::Index>(i), 1) = 1.0;
        b(static_cast<Eigen::Index>(i)) = y[i];
    }
    return (a.transpose() * a).ldlt().solve(a.transpose() * b);
}

// Closure residual of a chain laid down from angles (same convention as the
// library, written independently): position gap plus heading mismatch.
inline double closure_gap(std::span<const double> angles, double s) {
    double x = 0.0, y = 0.0, h = 0.0, total = 0.0;
    for (double t : angles) {
        x += s * std::cos(h);
        y += s * std::sin(h);
        h += t;
        total += t;
    }
    return std::hypot(x, y) + s * std::abs(std::remainder(total - 2.0 * kPi, 2.0 * kPi));
}

}  // namespace oracle
