#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "loopy/errors.hpp"
#include "loopy/morphogen_ring.hpp"

using namespace loopy;

namespace {

RingParams transport_only(std::size_t n) {
    RingParams p;
    p.n_cells = n;
    p.gamma_act = 0.0;
    p.gamma_inh = 0.0;
    p.gamma_pas = 0.0;
    p.alpha = 0.0;
    p.beta = 0.0;
    return p;
}

std::vector<double> rotate(const std::vector<double>& x, std::size_t k) {
    std::vector<double> out(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) out[(m + k) % x.size()] = x[m];
    return out;
}

MorphogenState rotate(const MorphogenState& s, std::size_t k) {
    return {rotate(s.q_act, k), rotate(s.q_inh, k), rotate(s.q_pas, k)};
}

MorphogenState reverse(MorphogenState s) {
    std::reverse(s.q_act.begin(), s.q_act.end());
    std::reverse(s.q_inh.begin(), s.q_inh.end());
    std::reverse(s.q_pas.begin(), s.q_pas.end());
    return s;
}

RingParams lively_params() {
    RingParams p;
    p.beta_scale = 0.18;
    p.v = 1.3;
    p.dt = 0.002;
    p.init_amplitude = 0.5;
    p.seed = 11;
    p.diffusion_denominator = DiffusionDenominator::classic_s_squared;
    return p;
}

}  // namespace

TEST_CASE("init_state with zero amplitude is all zero") {
    RingParams p;
    p.init_amplitude = 0.0;
    const MorphogenState s = init_state(p);
    CHECK(s.size() == p.n_cells);
    for (std::size_t m = 0; m < s.size(); ++m) {
        CHECK(s.q_act[m] == 0.0);
        CHECK(s.q_inh[m] == 0.0);
        CHECK(s.q_pas[m] == 0.0);
    }
}

TEST_CASE("init_state is deterministic and seed dependent") {
    RingParams p;
    CHECK(init_state(p) == init_state(p));
    RingParams q = p;
    q.seed = 2;
    CHECK_FALSE(init_state(p) == init_state(q));
    const MorphogenState s = init_state(p);
    for (double x : s.q_act) CHECK(std::abs(x) <= p.init_amplitude);
}

TEST_CASE("advection stencil moves a spike by central differences") {
    RingParams p = transport_only(5);
    p.v = 1.0;
    p.dt = 0.1;
    MorphogenState s{std::vector<double>(5, 0.0), std::vector<double>(5, 0.0), {0, 0, 1, 0, 0}};
    const MorphogenState next = step_morphogens(s, p);
    // dq_m = v (q[m+1] - q[m-1]) / (2s) evaluated by hand.
    const std::vector<double> expected{0.0, 0.05, 1.0, -0.05, 0.0};
    for (std::size_t m = 0; m < 5; ++m) CHECK(next.q_pas[m] == doctest::Approx(expected[m]).epsilon(1e-15));
}

TEST_CASE("diffusion denominators differ by the configured divisor") {
    RingParams p = transport_only(6);
    p.gamma_pas = 1.0;
    p.dt = 0.01;
    MorphogenState s{std::vector<double>(6, 0.0), std::vector<double>(6, 0.0), {0, 0, 1, 0, 0, 0}};
    const double a = step_morphogens(s, p).q_pas[1];
    p.s = 2.0;
    const double b = step_morphogens(s, p).q_pas[1];
    p.diffusion_denominator = DiffusionDenominator::classic_s_squared;
    const double c = step_morphogens(s, p).q_pas[1];
    CHECK(a == doctest::Approx(0.01 * 1.0 / 2.0));
    CHECK(b == doctest::Approx(0.01 * 1.0 / 4.0));
    CHECK(c == doctest::Approx(0.01 * 1.0 / 4.0));
}

TEST_CASE("uniform states are fixed points of the reaction") {
    RingParams p;
    p.alpha = 0.0;
    SUBCASE("zero state") {
        MorphogenState s{std::vector<double>(36, 0.0), std::vector<double>(36, 0.0), std::vector<double>(36, 0.0)};
        CHECK(step_morphogens(s, p) == s);
    }
    SUBCASE("q_act = 1, q_inh = 0 has zero activator reaction") {
        RingParams q = p;
        q.beta = 0.0;
        MorphogenState s{std::vector<double>(36, 1.0), std::vector<double>(36, 0.0), std::vector<double>(36, 0.0)};
        CHECK(step_morphogens(s, q) == s);
    }
    SUBCASE("q_act = q_inh = q_pas with q - q^3 - q + alpha = 0") {
        RingParams q = p;
        q.alpha = 0.125;   // q^3 = alpha at q = 0.5
        MorphogenState s{std::vector<double>(36, 0.5), std::vector<double>(36, 0.5), std::vector<double>(36, 0.5)};
        MorphogenState cur = s;
        for (int i = 0; i < 100; ++i) cur = step_morphogens(cur, q);
        CHECK(cur == s);
    }
}

TEST_CASE("passive morphogen total is conserved per step") {
    RingParams p = lively_params();
    p.gamma_pas = 3.0;
    MorphogenState s = init_state(p);
    double before = total_passive(s);
    for (int i = 0; i < 2000; ++i) {
        s = step_morphogens(s, p);
        const double after = total_passive(s);
        REQUIRE(std::abs(after - before) <= 1e-12);
        before = after;
    }
}

TEST_CASE("step_morphogens is exactly cyclically equivariant") {
    const RingParams p = lively_params();
    const MorphogenState s = init_state(p);
    for (std::size_t k : {1u, 5u, 17u, 35u}) {
        CHECK(rotate(step_morphogens(s, p), k) == step_morphogens(rotate(s, k), p));
    }
}

TEST_CASE("reversing cell order and negating v commutes with stepping") {
    RingParams p = lively_params();
    const MorphogenState s = init_state(p);
    RingParams mirrored = p;
    mirrored.v = -p.v;
    CHECK(reverse(step_morphogens(s, p)) == step_morphogens(reverse(s), mirrored));
}

TEST_CASE("disabled cells do not change the chemistry") {
    const RingParams p = lively_params();
    const MorphogenState s = init_state(p);
    const std::vector<std::size_t> disabled{0, 4, 9};
    CHECK(step_morphogens(s, p, disabled) == step_morphogens(s, p));
    const std::vector<std::size_t> bad{36};
    CHECK_THROWS_AS(step_morphogens(s, p, bad), ConfigError);
}

TEST_CASE("non-finite updates report the cell and term") {
    RingParams p;
    p.n_cells = 8;
    MorphogenState s = init_state(p);
    s.q_act[3] = 1e200;
    try {
        (void)step_morphogens(s, p);
        FAIL("expected NonFiniteError");
    } catch (const NonFiniteError& e) {
        CHECK(e.cell() == 3);
        CHECK(e.term() == "q_act reaction");
    }
}

TEST_CASE("parameter validation") {
    RingParams p;
    CHECK_NOTHROW(p.validate());
    p.dt = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = RingParams{};
    p.n_cells = 3;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = RingParams{};
    p.dt = 0.05;   // gamma_inh / 2s = 50 -> guard violated
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK(diffusion_denominator_from_string("classic_s_squared") == DiffusionDenominator::classic_s_squared);
    CHECK(to_string(DiffusionDenominator::paper_2s) == "paper_2s");
    CHECK_THROWS_AS(diffusion_denominator_from_string("s"), ConfigError);
}

TEST_CASE("morphogen_to_angles sums and clamps") {
    RingParams p;
    p.n_cells = 4;
    MorphogenState s{{0.2, 1.0, -3.0, 0.0}, std::vector<double>(4, 0.0), {0.3, 1.5, 0.0, 0.0}};
    const auto theta = morphogen_to_angles(s, p);
    CHECK(theta[0] == doctest::Approx(0.5));
    CHECK(theta[1] == 1.9);
    CHECK(theta[2] == -1.9);
    CHECK(theta[3] == 0.0);
}

TEST_CASE("total_passive") {
    MorphogenState s{{0, 0, 0}, {0, 0, 0}, {1, 2, 3}};
    CHECK(total_passive(s) == 6.0);
}
