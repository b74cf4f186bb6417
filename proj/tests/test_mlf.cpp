#include <doctest.h>

#include <cmath>

#include "relaxkit/error.hpp"
#include "relaxkit/mlf.hpp"

using namespace relaxkit;
using namespace relaxkit::mlf;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("ml3 against high-precision reference values") {
    CHECK(rel(ml3({0.6, 0.8, 0.9}, -0.5), 0.50975338183705479757) < 1e-13);
    CHECK(rel(ml3({0.6, 0.0, -0.4}, -3.0), 0.35932939860801832424) < 1e-12);
    // erfc-scaled exponential, evaluated on the Talbot path
    CHECK(rel(ml3({0.5, 1.0, 1.0}, -8.0), 0.069985166200880927723) < 1e-10);
    CHECK(rel(ml3({0.7, 0.9, 1.3}, -20.0), 0.00013048566563581371212) < 1e-8);
}

TEST_CASE("ml3 tiny values keep relative accuracy") {
    const double x = -std::sqrt(3.0);
    CHECK(rel(ml3({0.5, 20.0, 21.0}, x), 6.3479824835626281e-21) < 1e-10);
    CHECK(rel(ml3({0.5, 30.0, 31.0}, x), 1.6814406923879818e-35) < 1e-10);
}

TEST_CASE("ml3 elementary reductions") {
    for (double x : {-20.0, -3.0, -0.7, 0.0, 0.4, 2.5}) {
        CHECK(rel(ml3({1.0, 1.0, 1.0}, x), std::exp(x)) < 1e-12);
        CHECK(std::abs(ml3({2.0, 1.0, 1.0}, -x * x) - std::cos(x)) < 1e-12);
    }
    for (double x : {0.1, 1.0, 3.0})
        CHECK(rel(ml3({0.5, 1.0, 1.0}, -x), std::exp(x * x) * std::erfc(x)) < 1e-12);
    // lambda = 0 leaves only the first term
    CHECK(rel(ml3({0.4, 2.5, 0.0}, -7.0), 1.0 / std::tgamma(2.5)) < 1e-13);
}

TEST_CASE("rgamma vanishes at the poles") {
    CHECK(rgamma(0.0) == 0.0);
    CHECK(rgamma(-3.0) == 0.0);
    CHECK(rel(rgamma(0.5), 1.0 / std::sqrt(M_PI)) < 1e-15);
}

TEST_CASE("binomial function") {
    CHECK(rel(ml_binom({1.0, 0.3, 1.0}, -0.5, -0.25), 0.50513903611732623207) < 1e-12);

    SUBCASE("rearrangements agree") {
        const Ml2Params p{0.8, 0.3, 1.2};
        const auto a = ml_binom_series(p, -0.6, -0.9, Rearrangement::outer_first);
        const auto b = ml_binom_series(p, -0.6, -0.9, Rearrangement::outer_second);
        REQUIRE(a.converged);
        REQUIRE(b.converged);
        CHECK(rel(a.value, b.value) < 1e-10);
    }
    SUBCASE("one argument zero") {
        CHECK(rel(ml_binom({0.7, 0.4, 1.1}, -1.3, 0.0), ml3({0.7, 1.1, 1.0}, -1.3)) < 1e-12);
    }
    SUBCASE("series and inversion meet") {
        EvalOptions series_only;
        series_only.binom_switch_abs = 10.0;
        const Ml2Params p{1.0, 0.5, 1.0};
        CHECK(rel(ml_binom(p, -2.0, -1.5), ml_binom(p, -2.0, -1.5, series_only)) < 1e-9);
    }
    SUBCASE("small order") {
        // tau1 = tau2 = 1, alpha close to 1: n(t) = E_{(1,1-a),1}(-t, -t^(1-a)) approaches exp(-t/2)/2
        const double a = 0.999;
        const double n = ml_binom({1.0, 1.0 - a, 1.0}, -1.0, -1.0);
        CHECK(std::abs(n - 0.5 * std::exp(-0.5)) < 5e-3);
    }
}

TEST_CASE("derivative identity for x > 0") {
    const Ml3Params p{0.6, 1.4, 0.8};
    const double a = 0.9, x = 0.8, h = 1e-3;
    auto f = [&](double y) { return std::pow(y, p.mu - 1) * ml3(p, a * std::pow(y, p.nu)); };
    const double fd = (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
    CHECK(rel(ml3_deriv(p, a, 1, x), fd) < 1e-6);
}

TEST_CASE("prabhakar function") {
    const Ml3Params p{0.7, 0.7, 1.0};
    CHECK(rel(prabhakar(p, 1.0, 2.0), std::pow(2.0, -0.3) * ml3(p, -std::pow(2.0, 0.7))) < 1e-14);
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(ml3({0.0, 1.0, 1.0}, 0.5), InputError);
    CHECK_THROWS_AS(ml3({-1.0, 1.0, 1.0}, 0.5), InputError);
    CHECK_THROWS_AS(ml3({0.5, 1.0, 1.0}, std::nan("")), InputError);
    CHECK_THROWS_AS(ml_binom({0.5, 0.0, 1.0}, -1.0, -1.0), InputError);
}
