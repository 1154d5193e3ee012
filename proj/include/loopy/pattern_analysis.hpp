#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "loopy/vec2.hpp"

namespace loopy {

struct TimeSeriesF {
    std::vector<double> values;
    double dt = 1.0;
    std::string label;
};

struct LobeMetrics {
    int count = 0;
    double amplitude = 0.0;               // (r_max - r_min) / r_mean
    std::vector<double> peak_azimuths;    // radians, one per counted lobe
};

struct LobeOptions {
    double prominence = 0.25;             // fraction of (r_max - r_min)
    double circle_threshold = 0.02;       // amplitude below which the shape is a circle
};

/// Central differences (one-sided at the ends) followed by a centred
/// rectangular moving average of odd width max(1, round(window_fraction * n)).
/// Near the ends the average runs over the samples that exist.
/// Throws TooShortError for fewer than 3 samples.
TimeSeriesF estimate_angular_velocity(const TimeSeriesF& angles, double window_fraction = 0.05);

/// Odd kernel width used by estimate_angular_velocity for a series of n samples.
std::size_t smoothing_width(std::size_t n, double window_fraction);

/// Circular peak detection on a radius profile ordered around the ring.
LobeMetrics count_lobes(std::span<const double> radii, std::span<const double> azimuths,
                        const LobeOptions& options = {});

/// Tracks the unwrapped mean azimuth of lobe peaks frame to frame.
class MorphologyTracker {
public:
    struct Sample {
        double azimuth = 0.0;
        bool segment_start = false;   // lobe count changed (or first frame)
    };

    Sample update(const LobeMetrics& metrics);
    double azimuth() const { return azimuth_; }

private:
    std::vector<double> peaks_;       // unwrapped per-peak azimuths
    double azimuth_ = 0.0;            // continuous across segments
    double segment_offset_ = 0.0;
    bool started_ = false;
};

struct MorphologySegments {
    std::vector<TimeSeriesF> segments;
    std::vector<std::size_t> boundaries;   // frame index where each segment starts
};

/// Splits a lobe history into stable-count segments and tracks the
/// morphology azimuth inside each.
MorphologySegments morphology_azimuth(std::span<const LobeMetrics> history, double dt);

/// L2 distance between perimeter-normalised cumulative turning functions,
/// minimised over the starting vertex of both polygons and over the rotation
/// offset. Throws DegeneratePolygonError for zero perimeter or < 3 vertices.
double turning_distance(std::span<const Vec2> a, std::span<const Vec2> b);

struct TangentialSpeedProfile {
    std::vector<double> per_cell;   // mean |tangential speed| per cell
    double valley_mean = 0.0;       // samples in the bottom radius quartile
    double peak_mean = 0.0;         // samples in the top radius quartile
};

/// Speed perpendicular to the centroid ray, from frames spaced `dt` apart.
TangentialSpeedProfile tangential_speed_profile(std::span<const std::vector<Vec2>> frames, double dt);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

/// Ordinary least squares. Throws DegenerateXError with < 2 distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Least-squares non-decreasing fit (pool adjacent violators).
std::vector<double> isotonic_fit(std::span<const double> y);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

MeanStd mean_std(std::span<const double> values);

}  // namespace loopy
