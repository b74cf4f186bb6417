#include <doctest.h>

#include <cmath>

#include "relaxkit/error.hpp"
#include "relaxkit/models.hpp"

using namespace relaxkit;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("factories and defaults") {
    const auto d = RelaxationModel::debye(2.0);
    CHECK(d.kind == ModelKind::Debye);
    CHECK(d.B == doctest::Approx(0.5));
    CHECK(d.is_debye_limit());
    const auto ew = RelaxationModel::excess_wing(0.5, 4.0, 1.0);
    CHECK(ew.B == doctest::Approx(0.25));
    CHECK(ew.time_scale() == 4.0);
    CHECK(RelaxationModel::jws(0.5, 0.5, 1.0, 3.0).B == 3.0);
    CHECK(parse_model_kind("hn") == ModelKind::HavriliakNegami);
    CHECK(to_string(ModelKind::ExcessWing) == "ew");
}

TEST_CASE("invalid models") {
    CHECK_THROWS_AS(RelaxationModel::havriliak_negami(0.0, 0.5, 1.0), InputError);
    CHECK_THROWS_AS(RelaxationModel::havriliak_negami(0.5, 1.2, 1.0), InputError);
    CHECK_THROWS_AS(RelaxationModel::debye(-1.0), InputError);
    CHECK_THROWS_AS(RelaxationModel::excess_wing(1.0, 1.0, 1.0), InputError);
    CHECK_THROWS_AS(RelaxationModel::cole_cole(0.5, 1.0, 0.0), InputError);
    CHECK_THROWS_AS(parse_model_kind("kww"), InputError);
}

TEST_CASE("spectral functions") {
    CHECK(models::spectral(RelaxationModel::havriliak_negami(0.5, 0.5, 1.0), 1.0) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(models::spectral(RelaxationModel::debye(2.0), 3.0) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    // JWS: 1 - (1 + (s tau)^-a)^-b
    CHECK(models::spectral(RelaxationModel::jws(0.5, 0.5, 1.0), 4.0) ==
          doctest::Approx(1.0 - std::pow(1.5, -0.5)).epsilon(1e-15));
    // EW: (1 + (s t2)^a) / (1 + s t1 + (s t2)^a)
    CHECK(models::spectral(RelaxationModel::excess_wing(0.5, 1.0, 1.0), 4.0) ==
          doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    for (double s : {1e-6, 1e-2, 1.0, 1e3, 1e8}) {
        const double v = models::spectral(RelaxationModel::havriliak_negami(0.6, 0.8, 1.0), s);
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("exponents and kernels in the s domain") {
    const auto hn = RelaxationModel::havriliak_negami(0.6, 0.8, 1.0);
    CHECK(rel(models::levy_exponent_dual(hn, 2.0), 1.8317629139065316441) < 1e-14);
    for (double s : {1e-3, 0.5, 7.0}) {
        CHECK(rel(models::memory_M_hat(hn, s) * models::levy_exponent(hn, s), 1.0) < 1e-14);
        CHECK(rel(s * models::memory_k_hat(hn, s) * models::memory_M_hat(hn, s), 1.0) < 1e-14);
        const auto z = models::levy_exponent(hn, std::complex<double>(s, 0.0));
        CHECK(rel(z.real(), models::levy_exponent(hn, s)) < 1e-13);
        CHECK(std::abs(z.imag()) < 1e-14 * std::abs(z.real()));
    }
    // Debye: Psi(s) = s, so M = 1 and k = delta
    const auto d = RelaxationModel::debye(1.0);
    CHECK(models::levy_exponent(d, 3.0) == doctest::Approx(3.0));
    CHECK(models::memory_k_hat(d, 3.0) == doctest::Approx(1.0));
    // small-s behaviour of the HN exponent stays accurate (no cancellation)
    CHECK(rel(models::levy_exponent(hn, 1e-12), 0.8 * std::pow(1e-12, 0.6)) < 1e-6);
}

TEST_CASE("complex permittivity") {
    const auto hn = RelaxationModel::havriliak_negami(0.8, 0.6, 1.0);
    const auto p = models::complex_permittivity(hn, 1.0, 2.0, 1.0);
    CHECK(rel(p.eps_real, 1.6966040169828750648) < 1e-14);
    CHECK(rel(p.eps_imag, -0.27580504136452372903) < 1e-14);
    const auto lo = models::complex_permittivity(hn, 1e-8, 5.0, 2.0);
    CHECK(lo.eps_real == doctest::Approx(5.0).epsilon(1e-5));
    const auto hi = models::complex_permittivity(hn, 1e8, 5.0, 2.0);
    CHECK(hi.eps_real == doctest::Approx(2.0).epsilon(1e-3));
    CHECK_THROWS_AS(models::complex_permittivity(hn, 1.0, 1.0, 2.0), InputError);
}

TEST_CASE("universal-relaxation exponents") {
    const auto e = models::url_exponents(RelaxationModel::havriliak_negami(0.5, 0.6, 1.0));
    CHECK(e.a == doctest::Approx(0.7));
    CHECK(e.b == doctest::Approx(0.5));
    const auto j = models::url_exponents(RelaxationModel::jws(0.5, 0.6, 1.0));
    CHECK(j.a == doctest::Approx(0.5));
    CHECK(j.b == doctest::Approx(0.3));
    CHECK_THROWS_AS(models::url_exponents(RelaxationModel::excess_wing(0.5, 1.0, 1.0)), InputError);
}
