#include <doctest.h>

#include <cmath>

#include "bdpp/bounds.hpp"
#include "bdpp/error.hpp"

using namespace bdpp;

namespace {

BoundsInput base_input() {
    BoundsInput in;
    in.F = 2.0;
    in.G = 1.0;
    in.R = 2.0;
    in.eps = 0.5;
    in.n_agents = 10;
    in.window = 4;
    in.a = 0.2;
    in.p = 1;
    in.buffer_c = 0.27;
    return in;
}

}  // namespace

TEST_SUITE_BEGIN("bounds");

TEST_CASE("contraction constants") {
    BoundsInput in = base_input();
    in.n_agents = 2;
    BoundsReport r = compute_bounds(in);
    // 1 - 0.2/8 = 0.975
    CHECK(r.r == doctest::Approx(1.0 / (0.975 * 0.975)).epsilon(1e-14));
    CHECK(r.r == doctest::Approx(1.05194).epsilon(1e-5));
    CHECK(r.beta == doctest::Approx(std::pow(0.975, 0.25)).epsilon(1e-14));
    CHECK(r.beta == doctest::Approx(0.99369).epsilon(1e-5));
    CHECK(r.r > 1.0);
    CHECK(r.beta > 0.0);
    CHECK(r.beta < 1.0);
}

TEST_CASE("margin constant") {
    BoundsReport r = compute_bounds(base_input());
    CHECK(r.delta == doctest::Approx(2.0 + 0.5 / 20.0).epsilon(1e-14));  // 2.025
    CHECK(r.sigma == r.delta);

    BoundsInput with_sigma = base_input();
    with_sigma.sigma_override = 7.0;
    CHECK(compute_bounds(with_sigma).sigma == 7.0);
}

TEST_CASE("feasibility threshold consistency") {
    // with buffer c = c0 the denominator of t1 is exactly 1
    BoundsReport first = compute_bounds(base_input());
    BoundsInput at_c0 = base_input();
    at_c0.buffer_c = first.c0;
    BoundsReport r = compute_bounds(at_c0);
    CHECK(r.c0 == first.c0);  // c0 does not depend on c
    CHECK(r.t1_finite);
    CHECK(r.t1 == doctest::Approx(std::ceil(r.c2 * r.c2)));
}

TEST_CASE("t1 is infinite below the threshold") {
    BoundsReport r = compute_bounds(base_input());  // c = 0.27 << c0
    CHECK_FALSE(r.t1_finite);
    CHECK(std::isinf(r.t1));
    CHECK(r.vacuous);
}

TEST_CASE("constants grow with F") {
    BoundsInput in = base_input();  // 8*delta^2/eps^2 = 131 >> 1, log term live
    BoundsReport small = compute_bounds(in);
    CHECK_FALSE(small.degenerate_log);
    in.F = 4.0;
    BoundsReport big = compute_bounds(in);
    CHECK(big.c1 > small.c1);
    CHECK(big.c2 > small.c2);
    CHECK(big.cf > small.cf);
    CHECK(big.c0 > small.c0);
}

TEST_CASE("log term clamps in the wide-margin regime") {
    BoundsInput in = base_input();
    in.eps = 50.0;  // 8*delta^2/eps^2 < 1
    BoundsReport r = compute_bounds(in);
    CHECK(r.degenerate_log);
    CHECK(r.c1 > 0.0);  // remaining terms still contribute
    CHECK(std::isfinite(r.cf));
}

TEST_CASE("report renders") {
    BoundsReport r = compute_bounds(base_input());
    std::string text = r.pretty();
    CHECK(text.find("Cf=") != std::string::npos);
    CHECK(text.find("C1=") != std::string::npos);
}

TEST_CASE("input validation") {
    BoundsInput in = base_input();
    in.F = 0.0;
    CHECK_THROWS_AS(compute_bounds(in), Error);
    in = base_input();
    in.a = 1.0;
    CHECK_THROWS_AS(compute_bounds(in), Error);
    in = base_input();
    in.eps = 0.0;
    CHECK_THROWS_AS(compute_bounds(in), Error);
    in = base_input();
    in.buffer_c = -1.0;
    CHECK_THROWS_AS(compute_bounds(in), Error);
}

TEST_SUITE_END();
