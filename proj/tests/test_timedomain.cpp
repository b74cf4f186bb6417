#include <doctest.h>

#include <cmath>

#include "relaxkit/error.hpp"
#include "relaxkit/timedomain.hpp"

using namespace relaxkit;
using namespace relaxkit::timedomain;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("responses against reference inversions") {
    CHECK(rel(response(RelaxationModel::havriliak_negami(0.6, 0.8, 1.0), 0.5).regular, 0.31601733422038308743) <
          1e-10);
    CHECK(rel(response(RelaxationModel::jws(0.5, 0.5, 1.0), 1.0).regular, 0.099769126328845832658) < 1e-10);
    CHECK(rel(response(RelaxationModel::excess_wing(0.5, 1.0, 1.0), 1.0).regular, 0.18719368881107174403) < 1e-10);
    CHECK(rel(relaxation(RelaxationModel::excess_wing(0.5, 1.0, 1.0), 1.0), 0.2162429044011394452) < 1e-10);
}

TEST_CASE("kernels against reference inversions") {
    CHECK(rel(kernel_M(RelaxationModel::havriliak_negami(0.6, 0.7, 1.0), 0.5).regular, 1.3049005037753946629) <
          1e-9);
    CHECK(rel(kernel_k(RelaxationModel::jws(0.5, 0.5, 1.0), 1.0).regular, 1.5298341608171400777) < 1e-9);
    CHECK(rel(kernel_k(RelaxationModel::excess_wing(0.5, 1.0, 1.0), 1.0).regular, 0.13660600739194928254) < 1e-10);
}

TEST_CASE("Debye closed forms") {
    const auto d = RelaxationModel::debye(2.0);
    for (double t : {0.01, 1.0, 5.0}) {
        CHECK(rel(relaxation(d, t), std::exp(-t / 2.0)) < 1e-14);
        CHECK(rel(response(d, t).regular, 0.5 * std::exp(-t / 2.0)) < 1e-14);
        CHECK(kernel_M(d, t).regular == doctest::Approx(1.0));
    }
    const auto k = kernel_k(d, 1.0);
    CHECK(k.delta_weight == doctest::Approx(1.0));
    CHECK(k.regular == 0.0);
}

TEST_CASE("net delta weights") {
    CHECK(response(RelaxationModel::jws(0.5, 0.5, 1.0)).delta_weight == 0.0);
    CHECK(response(RelaxationModel::excess_wing(0.5, 1.0, 1.0)).delta_weight == 0.0);
    CHECK(kernel_M(RelaxationModel::jws(0.5, 0.5, 1.0)).delta_weight == 0.0);
    CHECK(response(RelaxationModel::havriliak_negami(0.6, 0.8, 1.0)).delta_weight == 0.0);
}

TEST_CASE("declared singular behaviour matches the regular part") {
    for (const auto& m : {RelaxationModel::havriliak_negami(0.6, 0.8, 1.0), RelaxationModel::jws(0.5, 0.5, 1.0),
                          RelaxationModel::excess_wing(0.5, 1.0, 1.0)}) {
        for (const auto& f : {response(m), kernel_M(m), kernel_k(m)}) {
            const double t = 1e-9;
            const double scaled = std::pow(t, 1.0 - f.sing_exponent) * f.regular(t) * std::tgamma(f.sing_exponent);
            CHECK(scaled == doctest::Approx(f.sing_coefficient).epsilon(2e-2));
        }
    }
}

TEST_CASE("switch points are continuous") {
    // HN memory kernel: series below 0.01 tau, inversion above
    const auto hn = RelaxationModel::havriliak_negami(0.6, 0.7, 1.0);
    CHECK(rel(hn_memory_series(hn, 0.5), 1.3049005037753946629) < 1e-9);
    CHECK(rel(kernel_M(hn, 0.01 * (1 - 1e-12)).regular, kernel_M(hn, 0.01 * (1 + 1e-12)).regular) < 1e-9);
    CHECK(rel(response(hn, 1.0 - 1e-12).regular, response(hn, 1.0 + 1e-12).regular) < 1e-9);
    CHECK(rel(kernel_k(hn, 1.0 - 1e-12).regular, kernel_k(hn, 1.0 + 1e-12).regular) < 1e-9);
}

TEST_CASE("relaxation starts at one and decays") {
    for (const auto& m : {RelaxationModel::cole_cole(0.5, 1.0), RelaxationModel::cole_davidson(0.5, 1.0),
                          RelaxationModel::jws(0.7, 0.4, 1.0), RelaxationModel::excess_wing(0.6, 1.0, 2.0)}) {
        double prev = 1.0;
        for (double t : {1e-6, 1e-3, 0.1, 1.0, 10.0}) {
            const double n = relaxation(m, t);
            CHECK(n < prev);
            CHECK(n > 0.0);
            prev = n;
        }
        CHECK(relaxation(m, 1e-12) > 0.99);
    }
}

TEST_CASE("value at zero and negative times") {
    CHECK(relaxation(RelaxationModel::debye(1.0), 0.0) == 1.0);
    CHECK_THROWS_AS(relaxation(RelaxationModel::debye(1.0), -1.0), InputError);
    CHECK_THROWS_AS(response(RelaxationModel::debye(1.0), -1.0), InputError);
}
