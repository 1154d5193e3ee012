#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "loopy/errors.hpp"
#include "loopy/pattern_analysis.hpp"
#include "oracles.hpp"

using namespace loopy;

namespace {

constexpr double kPi = std::numbers::pi;

struct Profile {
    std::vector<double> radii;
    std::vector<double> azimuths;
};

Profile lobed_profile(std::size_t n, int lobes, double amp, double phase = 0.0) {
    Profile p;
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        p.azimuths.push_back(phi);
        p.radii.push_back(1.0 + amp * std::cos(lobes * (phi - phase)));
    }
    return p;
}

std::vector<Vec2> polygon_from(const Profile& p) {
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
        out.push_back({p.radii[k] * std::cos(p.azimuths[k]), p.radii[k] * std::sin(p.azimuths[k])});
    }
    return out;
}

std::vector<Vec2> rectangle(double w, double h) { return {{0, 0}, {w, 0}, {w, h}, {0, h}}; }

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

}  // namespace

TEST_CASE("angular velocity of a ramp is constant") {
    TimeSeriesF ramp{{}, 0.5, "ramp"};
    for (int i = 0; i < 200; ++i) ramp.values.push_back(0.3 * i * 0.5);
    const TimeSeriesF rate = estimate_angular_velocity(ramp);
    for (double r : rate.values) CHECK(r == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("angular velocity of a constant is zero and offsets do not matter") {
    TimeSeriesF flat{std::vector<double>(50, 2.0), 1.0, "flat"};
    for (double r : estimate_angular_velocity(flat).values) CHECK(r == 0.0);

    // Dyadic samples keep every difference exact, so equality is bitwise.
    TimeSeriesF wiggle{{}, 1.0, "w"};
    for (int i = 0; i < 64; ++i) wiggle.values.push_back(std::round(1024.0 * std::sin(0.1 * i * i)) / 1024.0);
    TimeSeriesF lifted = wiggle;
    for (double& v : lifted.values) v += 3.0;
    CHECK(estimate_angular_velocity(wiggle).values == estimate_angular_velocity(lifted).values);
}

TEST_CASE("noisy ramp rate matches the least-squares slope") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    TimeSeriesF series{{}, 0.1, "noisy"};
    std::vector<double> t;
    for (int i = 0; i < 1000; ++i) {
        t.push_back(0.1 * i);
        series.values.push_back(0.7 * t.back() + noise(rng));
    }
    const auto rate = estimate_angular_velocity(series).values;
    const double mean = mean_std(rate).mean;
    const double slope = oracle::least_squares(t, series.values)(0);
    CHECK(std::abs(mean - slope) <= 0.02 * std::abs(slope));
}

TEST_CASE("smoothing width is odd") {
    CHECK(smoothing_width(100, 0.05) == 5);
    CHECK(smoothing_width(120, 0.05) == 7);
    CHECK(smoothing_width(10, 0.05) == 1);
    TimeSeriesF tiny{{0.0, 1.0}, 1.0, "tiny"};
    CHECK_THROWS_AS(estimate_angular_velocity(tiny), TooShortError);
}

TEST_CASE("count_lobes on constructed profiles") {
    const Profile circle{std::vector<double>(36, 2.0), lobed_profile(36, 3, 0.0).azimuths};
    CHECK(count_lobes(circle.radii, circle.azimuths).count == 0);

    const Profile three = lobed_profile(36, 3, 0.2);
    const LobeMetrics m = count_lobes(three.radii, three.azimuths);
    REQUIRE(m.count == 3);
    CHECK(m.amplitude == doctest::Approx(0.4).epsilon(1e-9));
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(wrap(m.peak_azimuths[i] - 2.0 * kPi * i / 3.0)) <= 1e-9);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    Profile noisy = three;
    for (double& r : noisy.radii) r += noise(rng);
    CHECK(count_lobes(noisy.radii, noisy.azimuths).count == 3);

    for (int lobes : {2, 4, 5, 6}) {
        const Profile p = lobed_profile(36, lobes, 0.15, 0.1);
        CHECK(count_lobes(p.radii, p.azimuths).count == lobes);
    }
}

TEST_CASE("count_lobes is invariant under cyclic rotation and scaling") {
    Profile p = lobed_profile(36, 4, 0.2, 0.05);
    p.radii[3] += 0.05;
    const int base = count_lobes(p.radii, p.azimuths).count;
    for (std::size_t k = 1; k < 36; k += 5) {
        Profile q = p;
        std::rotate(q.radii.begin(), q.radii.begin() + static_cast<long>(k), q.radii.end());
        CHECK(count_lobes(q.radii, q.azimuths).count == base);
    }
    Profile scaled = p;
    for (double& r : scaled.radii) r *= 7.5;
    CHECK(count_lobes(scaled.radii, scaled.azimuths).count == base);
    CHECK(count_lobes(scaled.radii, scaled.azimuths).amplitude == doctest::Approx(count_lobes(p.radii, p.azimuths).amplitude));
}

TEST_CASE("morphology azimuth tracks rotating and stationary peaks") {
    std::vector<LobeMetrics> rotating, still;
    for (int i = 0; i < 40; ++i) {
        const Profile p = lobed_profile(360, 3, 0.2, 0.01 * i);
        rotating.push_back(count_lobes(p.radii, p.azimuths));
        const Profile q = lobed_profile(360, 3, 0.2, 0.4);
        still.push_back(count_lobes(q.radii, q.azimuths));
    }
    const auto r = morphology_azimuth(rotating, 1.0);
    REQUIRE(r.segments.size() == 1);
    for (double w : estimate_angular_velocity(r.segments[0]).values) CHECK(w == doctest::Approx(0.01).epsilon(1e-6));
    const auto s = morphology_azimuth(still, 1.0);
    for (double w : estimate_angular_velocity(s.segments[0]).values) CHECK(std::abs(w) <= 1e-12);
}

TEST_CASE("morphology azimuth segments at lobe-count changes") {
    std::vector<LobeMetrics> history;
    for (int i = 0; i < 10; ++i) {
        const Profile p = lobed_profile(72, i < 5 ? 3 : 4, 0.2, 0.02 * i);
        history.push_back(count_lobes(p.radii, p.azimuths));
    }
    const auto out = morphology_azimuth(history, 1.0);
    CHECK(out.segments.size() == 2);
    CHECK(out.boundaries == std::vector<std::size_t>{0, 5});
    // Continuous across the boundary.
    CHECK(out.segments[1].values.front() == out.segments[0].values.back());
}

TEST_CASE("turning distance identity and invariances") {
    const auto a = polygon_from(lobed_profile(24, 3, 0.25));
    CHECK(turning_distance(a, a) <= 1e-12);

    std::vector<Vec2> moved;
    for (const Vec2& p : a) moved.push_back(rotated(p, 1.234) * 3.5 + Vec2{4.0, -1.0});
    CHECK(turning_distance(a, moved) <= 1e-9);

    std::vector<Vec2> reindexed(a.begin() + 7, a.end());
    reindexed.insert(reindexed.end(), a.begin(), a.begin() + 7);
    CHECK(turning_distance(a, reindexed) <= 1e-9);

    const auto b = polygon_from(lobed_profile(24, 4, 0.2, 0.3));
    CHECK(turning_distance(a, b) == turning_distance(b, a));
    CHECK(turning_distance(a, b) > 0.01);
}

TEST_CASE("turning distance of a square and a 2:1 rectangle matches the dense oracle") {
    const auto sq = rectangle(1.0, 1.0);
    const auto rect = rectangle(2.0, 1.0);
    const double exact = turning_distance(sq, rect);
    CHECK(exact > 0.0);
    CHECK(exact == doctest::Approx(oracle::turning_distance(sq, rect)).epsilon(1e-3));

    const auto tri = std::vector<Vec2>{{0, 0}, {3, 0}, {0, 1}};
    CHECK(turning_distance(tri, rect) == doctest::Approx(oracle::turning_distance(tri, rect)).epsilon(1e-3));
}

TEST_CASE("turning distance triangle inequality on a sampled corpus") {
    std::vector<std::vector<Vec2>> corpus;
    for (int lobes = 2; lobes <= 5; ++lobes) {
        for (double amp : {0.05, 0.2}) corpus.push_back(polygon_from(lobed_profile(18, lobes, amp, 0.1 * lobes)));
    }
    corpus.push_back(rectangle(1.0, 1.0));
    corpus.push_back(rectangle(3.0, 1.0));
    for (const auto& x : corpus) {
        for (const auto& y : corpus) {
            const double dxy = turning_distance(x, y);
            for (const auto& z : corpus) CHECK(turning_distance(x, z) <= dxy + turning_distance(y, z) + 1e-9);
        }
    }
}

TEST_CASE("turning distance rejects degenerate polygons") {
    const std::vector<Vec2> two{{0, 0}, {1, 0}};
    const std::vector<Vec2> point(4, Vec2{1, 1});
    CHECK_THROWS_AS(turning_distance(two, rectangle(1, 1)), DegeneratePolygonError);
    CHECK_THROWS_AS(turning_distance(point, rectangle(1, 1)), DegeneratePolygonError);
}

TEST_CASE("tangential speed profile of rigid rotation and of stationary shapes") {
    const auto shape = polygon_from(lobed_profile(36, 3, 0.3));
    std::vector<std::vector<Vec2>> rigid, still;
    for (int f = 0; f < 10; ++f) {
        std::vector<Vec2> frame;
        for (const Vec2& p : shape) frame.push_back(rotated(p, 0.02 * f));
        rigid.push_back(frame);
        still.push_back(shape);
    }
    const auto r = tangential_speed_profile(rigid, 1.0);
    CHECK(r.peak_mean > r.valley_mean);
    const auto s = tangential_speed_profile(still, 1.0);
    CHECK(s.peak_mean == 0.0);
    CHECK(s.valley_mean == 0.0);
    for (double v : s.per_cell) CHECK(v == 0.0);
}

TEST_CASE("linear fit") {
    const std::vector<double> x{-2, -1, 0, 1, 2};
    const std::vector<double> y2{-4, -2, 0, 2, 4};
    const LinearFit f = linear_fit(x, y2);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(0.0));
    CHECK(f.r_squared == doctest::Approx(1.0));

    const std::vector<double> flat(5, 3.0);
    CHECK(linear_fit(x, flat).slope == 0.0);
    CHECK(linear_fit(x, flat).r_squared == 1.0);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<double> xs, ys;
    for (int i = 0; i < 40; ++i) {
        xs.push_back(0.25 * i);
        ys.push_back(-1.5 * xs.back() + 2.0 + noise(rng));
    }
    const auto ref = oracle::least_squares(xs, ys);
    const LinearFit g = linear_fit(xs, ys);
    CHECK(g.slope == doctest::Approx(ref(0)).epsilon(1e-10));
    CHECK(g.intercept == doctest::Approx(ref(1)).epsilon(1e-10));

    const std::vector<double> same(4, 1.0);
    CHECK_THROWS_AS(linear_fit(same, same), DegenerateXError);
}

TEST_CASE("isotonic fit") {
    const std::vector<double> up{1, 2, 3};
    CHECK(isotonic_fit(up) == up);
    const std::vector<double> dip{1, 3, 2, 4};
    const std::vector<double> pooled{1, 2.5, 2.5, 4};
    CHECK(isotonic_fit(dip) == pooled);
    const std::vector<double> down{3, 2, 1};
    for (double v : isotonic_fit(down)) CHECK(v == doctest::Approx(2.0));
}
