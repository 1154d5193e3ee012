#include "loopy/pattern_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "loopy/chain_geometry.hpp"
#include "loopy/errors.hpp"

namespace loopy {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBreakSnap = 1e-12;
double wrap_angle(double a) { return std::remainder(a, kTwoPi); }
}  // namespace

std::size_t smoothing_width(std::size_t n, double window_fraction) {
    auto width = static_cast<std::size_t>(std::llround(window_fraction * static_cast<double>(n)));
    width = std::max<std::size_t>(1, width);
    if (width % 2 == 0) ++width;
    return width;
}

TimeSeriesF estimate_angular_velocity(const TimeSeriesF& angles, double window_fraction) {
    const std::vector<double>& x = angles.values;
    const std::size_t n = x.size();
    if (n < 3) throw TooShortError("angular velocity needs at least 3 samples");
    if (!(window_fraction > 0.0 && window_fraction <= 0.5)) {
        throw ConfigError("window_fraction must lie in (0, 0.5]");
    }
    if (!(angles.dt > 0.0)) throw ConfigError("series dt must be > 0");

    std::vector<double> rate(n);
    rate[0] = (x[1] - x[0]) / angles.dt;
    rate[n - 1] = (x[n - 1] - x[n - 2]) / angles.dt;
    for (std::size_t i = 1; i + 1 < n; ++i) rate[i] = (x[i + 1] - x[i - 1]) / (2.0 * angles.dt);

    const std::size_t half = smoothing_width(n, window_fraction) / 2;
    TimeSeriesF out{std::vector<double>(n), angles.dt, angles.label};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += rate[j];
        out.values[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

LobeMetrics count_lobes(std::span<const double> radii, std::span<const double> azimuths,
                        const LobeOptions& options) {
    const std::size_t n = radii.size();
    if (n < 8) throw TooShortError("lobe counting needs at least 8 samples");
    if (azimuths.size() != n) throw ConfigError("radii / azimuths length mismatch");

    const auto [min_it, max_it] = std::minmax_element(radii.begin(), radii.end());
    const double r_min = *min_it;
    const double r_max = *max_it;
    double r_mean = 0.0;
    for (double r : radii) r_mean += r;
    r_mean /= static_cast<double>(n);

    LobeMetrics metrics;
    const double span = r_max - r_min;
    metrics.amplitude = r_mean > 0.0 ? span / r_mean : 0.0;
    if (metrics.amplitude < options.circle_threshold || span <= 0.0) return metrics;

    auto at = [&](long i) { return radii[static_cast<std::size_t>(((i % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n))]; };
    const double needed = options.prominence * span;

    for (std::size_t i = 0; i < n; ++i) {
        const auto li = static_cast<long>(i);
        const double r = radii[i];
        // Plateaus count once, at their first sample.
        if (!(r > at(li - 1) && r >= at(li + 1))) continue;
        if (r == at(li + 1)) {
            long j = li + 1;
            while (j < li + static_cast<long>(n) && at(j) == r) ++j;
            if (at(j) > r) continue;
        }

        // Topographic prominence on the ring: walk each way until a higher
        // sample (or the full circle), keeping the lowest point passed.
        double left_min = r;
        for (long j = 1; j < static_cast<long>(n); ++j) {
            const double q = at(li - j);
            if (q > r) break;
            left_min = std::min(left_min, q);
        }
        double right_min = r;
        for (long j = 1; j < static_cast<long>(n); ++j) {
            const double q = at(li + j);
            if (q > r) break;
            right_min = std::min(right_min, q);
        }
        if (r - std::max(left_min, right_min) < needed) continue;

        // Parabolic refinement of the peak position between neighbours.
        const double rl = at(li - 1);
        const double rr = at(li + 1);
        const double curv = rl - 2.0 * r + rr;
        double offset = curv < 0.0 ? 0.5 * (rl - rr) / curv : 0.0;
        offset = std::clamp(offset, -0.5, 0.5);
        const double az = azimuths[i];
        const double az_l = az + wrap_angle(azimuths[(i + n - 1) % n] - az);
        const double az_r = az + wrap_angle(azimuths[(i + 1) % n] - az);
        const double peak = offset >= 0.0 ? az + offset * (az_r - az) : az - offset * (az_l - az);
        metrics.peak_azimuths.push_back(wrap_angle(peak));
    }
    metrics.count = static_cast<int>(metrics.peak_azimuths.size());
    return metrics;
}

MorphologyTracker::Sample MorphologyTracker::update(const LobeMetrics& metrics) {
    Sample sample;
    const std::vector<double>& raw = metrics.peak_azimuths;
    if (!started_ || raw.size() != peaks_.size()) {
        sample.segment_start = true;
        started_ = true;
        peaks_ = raw;
        double mean = 0.0;
        for (double p : peaks_) mean += p;
        if (!peaks_.empty()) mean /= static_cast<double>(peaks_.size());
        // Keep the series continuous across a segment boundary.
        segment_offset_ = azimuth_ - mean;
        sample.azimuth = azimuth_;
        return sample;
    }

    // Match every tracked peak to the nearest new peak on the circle.
    std::vector<double> next(peaks_.size());
    std::vector<bool> used(raw.size(), false);
    for (std::size_t i = 0; i < peaks_.size(); ++i) {
        std::size_t best = raw.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < raw.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(wrap_angle(raw[j] - peaks_[i]));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        used[best] = true;
        next[i] = peaks_[i] + wrap_angle(raw[best] - peaks_[i]);
    }
    peaks_ = std::move(next);
    double mean = 0.0;
    for (double p : peaks_) mean += p;
    if (!peaks_.empty()) mean /= static_cast<double>(peaks_.size());
    azimuth_ = peaks_.empty() ? azimuth_ : mean + segment_offset_;
    sample.azimuth = azimuth_;
    return sample;
}

MorphologySegments morphology_azimuth(std::span<const LobeMetrics> history, double dt) {
    MorphologySegments out;
    MorphologyTracker tracker;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto sample = tracker.update(history[i]);
        if (sample.segment_start) {
            out.boundaries.push_back(i);
            out.segments.push_back(TimeSeriesF{{}, dt, "morphology_azimuth"});
        }
        out.segments.back().values.push_back(sample.azimuth);
    }
    return out;
}

namespace {

struct TurningFunction {
    std::vector<double> breaks;    // cumulative normalised arc length at the end of each edge
    std::vector<double> heading;   // cumulative turning of each edge relative to edge 0
};

// Turning function of the polygon traversed from vertex `start`.
TurningFunction turning_function(std::span<const Vec2> poly, std::size_t start) {
    const std::size_t n = poly.size();
    std::vector<double> lengths(n);
    double perimeter = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        lengths[k] = norm(poly[(start + k + 1) % n] - poly[(start + k) % n]);
        perimeter += lengths[k];
    }
    TurningFunction tf;
    tf.breaks.resize(n);
    tf.heading.resize(n);
    double acc = 0.0;
    double heading = 0.0;
    Vec2 prev_edge = poly[(start + 1) % n] - poly[start % n];
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 edge = poly[(start + k + 1) % n] - poly[(start + k) % n];
        if (k > 0 && norm(edge) > 0.0 && norm(prev_edge) > 0.0) {
            heading += std::atan2(cross(prev_edge, edge), dot(prev_edge, edge));
        }
        if (norm(edge) > 0.0) prev_edge = edge;
        acc += lengths[k];
        tf.breaks[k] = acc / perimeter;
        tf.heading[k] = heading;
    }
    tf.breaks.back() = 1.0;
    return tf;
}

double perimeter_of(std::span<const Vec2> poly) {
    double p = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) p += norm(poly[(k + 1) % poly.size()] - poly[k]);
    return p;
}

// min over c of integral (fa - fb + c)^2 = Var(fa - fb) over [0, 1], two-pass
// so that near-identical shapes do not lose precision to cancellation.
double turning_gap(const TurningFunction& fa, const TurningFunction& fb, std::vector<std::pair<double, double>>& pieces) {
    pieces.clear();
    std::size_t ia = 0, ib = 0;
    double u = 0.0;
    while (ia < fa.breaks.size() && ib < fb.breaks.size()) {
        // Breakpoints closer than kBreakSnap are the same vertex up to rounding.
        const bool same = std::abs(fa.breaks[ia] - fb.breaks[ib]) <= kBreakSnap;
        const double end = same ? fa.breaks[ia] : std::min(fa.breaks[ia], fb.breaks[ib]);
        if (end > u) pieces.emplace_back(end - u, fa.heading[ia] - fb.heading[ib]);
        u = end;
        const bool advance_a = same || fa.breaks[ia] <= end;
        const bool advance_b = same || fb.breaks[ib] <= end;
        if (advance_a) ++ia;
        if (advance_b) ++ib;
    }
    double mean = 0.0;
    for (const auto& [w, d] : pieces) mean += w * d;
    double var = 0.0;
    for (const auto& [w, d] : pieces) var += w * (d - mean) * (d - mean);
    return var;
}

}  // namespace

double turning_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
    if (a.size() < 3 || b.size() < 3) throw DegeneratePolygonError("polygon needs >= 3 vertices");
    if (!(perimeter_of(a) > 0.0) || !(perimeter_of(b) > 0.0)) {
        throw DegeneratePolygonError("polygon has zero perimeter");
    }
    std::vector<TurningFunction> fa(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = turning_function(a, i);
    std::vector<TurningFunction> fb(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) fb[j] = turning_function(b, j);

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> pieces;
    pieces.reserve(a.size() + b.size());
    for (const auto& ta : fa) {
        for (const auto& tb : fb) best = std::min(best, turning_gap(ta, tb, pieces));
    }
    return std::sqrt(best);
}

TangentialSpeedProfile tangential_speed_profile(std::span<const std::vector<Vec2>> frames, double dt) {
    TangentialSpeedProfile out;
    if (frames.size() < 2) return out;
    const std::size_t n = frames.front().size();
    out.per_cell.assign(n, 0.0);

    std::vector<std::pair<double, double>> samples;   // (radius, |v_t|)
    samples.reserve((frames.size() - 1) * n);
    for (std::size_t f = 0; f + 1 < frames.size(); ++f) {
        const Vec2 c0 = centroid(frames[f]);
        const Vec2 c1 = centroid(frames[f + 1]);
        const Vec2 cm = 0.5 * (c0 + c1);
        for (std::size_t m = 0; m < n; ++m) {
            const Vec2 mid = 0.5 * (frames[f][m] + frames[f + 1][m]) - cm;
            const Vec2 vel = ((frames[f + 1][m] - c1) - (frames[f][m] - c0)) * (1.0 / dt);
            const double r = norm(mid);
            const double vt = r > 0.0 ? std::abs(cross(mid, vel)) / r : 0.0;
            out.per_cell[m] += vt;
            samples.emplace_back(r, vt);
        }
    }
    for (double& v : out.per_cell) v /= static_cast<double>(frames.size() - 1);

    // Quartile membership is decided frame by frame so slow breathing of the
    // shape does not move every sample into one bucket.
    double valley_sum = 0.0, peak_sum = 0.0;
    std::size_t valley_n = 0, peak_n = 0;
    std::vector<double> radii(n);
    for (std::size_t f = 0; f + 1 < frames.size(); ++f) {
        for (std::size_t m = 0; m < n; ++m) radii[m] = samples[f * n + m].first;
        std::vector<double> sorted = radii;
        std::sort(sorted.begin(), sorted.end());
        const double q1 = sorted[(n - 1) / 4];
        const double q3 = sorted[n - 1 - (n - 1) / 4];
        for (std::size_t m = 0; m < n; ++m) {
            const auto& [r, vt] = samples[f * n + m];
            if (r <= q1) { valley_sum += vt; ++valley_n; }
            if (r >= q3) { peak_sum += vt; ++peak_n; }
        }
    }
    out.valley_mean = valley_n ? valley_sum / static_cast<double>(valley_n) : 0.0;
    out.peak_mean = peak_n ? peak_sum / static_cast<double>(peak_n) : 0.0;
    return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("linear_fit: length mismatch");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    if (n < 2) throw DegenerateXError("linear_fit needs at least 2 distinct x");
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw DegenerateXError("linear_fit needs at least 2 distinct x");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

std::vector<double> isotonic_fit(std::span<const double> y) {
    struct Block {
        double sum;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (double v : y) {
        blocks.push_back({v, 1});
        while (blocks.size() > 1) {
            const Block& b = blocks.back();
            const Block& a = blocks[blocks.size() - 2];
            if (a.sum / static_cast<double>(a.count) <= b.sum / static_cast<double>(b.count)) break;
            const Block merged{a.sum + b.sum, a.count + b.count};
            blocks.pop_back();
            blocks.back() = merged;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (const Block& b : blocks) out.insert(out.end(), b.count, b.sum / static_cast<double>(b.count));
    return out;
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd out;
    if (values.empty()) return out;
    for (double v : values) out.mean += v;
    out.mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(var / static_cast<double>(values.size()));
    return out;
}

}  // namespace loopy
