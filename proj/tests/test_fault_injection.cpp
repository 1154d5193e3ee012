#include <doctest.h>

#include <algorithm>
#include <vector>

#include "loopy/errors.hpp"
#include "loopy/fault_injection.hpp"

using namespace loopy;

TEST_CASE("no failures in mode none") {
    FailureSchedule s;
    CHECK(disabled_at(s, 0.0).empty());
    CHECK(disabled_at(s, 1e9).empty());
}

TEST_CASE("sequential failures follow cell order") {
    FailureSchedule s{FailureMode::sequential, 300.0, 1, 36};
    CHECK(disabled_at(s, 650.0) == std::vector<std::size_t>{0, 1});
    CHECK(disabled_at(s, 299.0).empty());
    CHECK(disabled_at(s, 1e9).size() == 36);
}

TEST_CASE("random failures are a seeded permutation") {
    FailureSchedule s{FailureMode::random, 1.0, 42, 36};
    CHECK(disabled_at(s, 10.5) == disabled_at(s, 10.5));
    auto all = disabled_at(s, 100.0);
    REQUIRE(all.size() == 36);
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < 36; ++i) CHECK(all[i] == i);
    FailureSchedule other = s;
    other.seed = 43;
    CHECK(disabled_at(s, 36.0) != disabled_at(other, 36.0));
}

TEST_CASE("disabled sets grow monotonically") {
    for (FailureMode mode : {FailureMode::sequential, FailureMode::random}) {
        FailureSchedule s{mode, 2.5, 9, 20};
        std::vector<std::size_t> prev;
        for (double t = 0.0; t < 60.0; t += 0.7) {
            const auto cur = disabled_at(s, t);
            REQUIRE(cur.size() >= prev.size());
            CHECK(std::equal(prev.begin(), prev.end(), cur.begin()));
            prev = cur;
        }
    }
}

TEST_CASE("apply_actuation freezes disabled cells") {
    const std::vector<double> goal{0.1, 0.2, 0.3, 0.4};
    const std::vector<double> current{1.0, 2.0, 3.0, 4.0};
    CHECK(apply_actuation(goal, current, {}) == goal);
    const std::vector<std::size_t> some{1, 3};
    CHECK(apply_actuation(goal, current, some) == std::vector<double>{0.1, 2.0, 0.3, 4.0});
    const std::vector<std::size_t> every{0, 1, 2, 3};
    CHECK(apply_actuation(goal, current, every) == current);
    const std::vector<double> short_goal{0.1};
    CHECK_THROWS_AS(apply_actuation(short_goal, current, {}), ConfigError);
}

TEST_CASE("schedule validation and names") {
    FailureSchedule s{FailureMode::sequential, 0.0, 1, 36};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    CHECK(failure_mode_from_string("random") == FailureMode::random);
    CHECK(to_string(FailureMode::sequential) == "sequential");
    CHECK_THROWS_AS(failure_mode_from_string("all"), ConfigError);
    const std::vector<std::size_t> idx{2};
    CHECK(disabled_mask(idx, 4) == std::vector<std::uint8_t>{0, 0, 1, 0});
}
