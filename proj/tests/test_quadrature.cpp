#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ridgeline/quadrature.hpp"

using namespace ridgeline;

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    const auto nodes = gauss_legendre(16);
    REQUIRE(nodes.size() == 16);
    double wsum = 0.0;
    for (const auto& n : nodes) wsum += n.w;
    CHECK_THAT(wsum, Catch::Matchers::WithinAbs(2.0, 1e-14));

    // degree 31 monomial on [-1, 1]: odd -> 0, x^30 -> 2/31
    double odd = 0.0, even = 0.0;
    for (const auto& n : nodes) {
        odd += n.w * std::pow(n.x, 31);
        even += n.w * std::pow(n.x, 30);
    }
    CHECK_THAT(odd, Catch::Matchers::WithinAbs(0.0, 1e-14));
    CHECK_THAT(even, Catch::Matchers::WithinRel(2.0 / 31.0, 1e-12));
}

TEST_CASE("composite integration handles oscillation and splits") {
    // int_0^0.5 (1 - cos 4 pi s) ds = 0.5
    const double osc = integrate([](double s) { return 1.0 - std::cos(4.0 * M_PI * s); }, 0.0,
                                 0.5, 1.0 / 16.0);
    CHECK_THAT(osc, Catch::Matchers::WithinRel(0.5, 1e-13));

    // kink at 0.3 resolved by a split point: int_0^1 |s - 0.3| ds = 0.29
    const double kink =
        integrate([](double s) { return std::abs(s - 0.3); }, 0.0, 1.0, 0.05, {0.3});
    CHECK_THAT(kink, Catch::Matchers::WithinRel(0.29, 1e-13));

    // sharp exponential: int_0^0.5 e^{-100 s} ds
    const double exp_int =
        integrate([](double s) { return std::exp(-100.0 * s); }, 0.0, 0.5, 0.5 / 32.0);
    CHECK_THAT(exp_int, Catch::Matchers::WithinRel((1.0 - std::exp(-50.0)) / 100.0, 1e-12));

    CHECK(integrate([](double) { return 1.0; }, 0.3, 0.3, 0.1) == 0.0);
}
