#include <doctest.h>

#include <cmath>
#include <sstream>

#include "relaxkit/error.hpp"
#include "relaxkit/fit.hpp"

using namespace relaxkit;

namespace {

std::vector<PermittivityPoint> synthetic(const RelaxationModel& m, double eps0, double epsinf, int n) {
    std::vector<PermittivityPoint> d;
    for (int i = 0; i < n; ++i) {
        const double w = std::pow(10.0, -2.0 + 4.0 * i / (n - 1)) / m.time_scale();
        d.push_back(models::complex_permittivity(m, w, eps0, epsinf));
    }
    return d;
}

}  // namespace

TEST_CASE("CSV reading") {
    std::istringstream ok("# measured\nomega, eps_real, eps_imag\n1,3,-1\n2,2.9,-1.1\n3,2.8,-1.2\n4,2.7,-1.3\n"
                          "5,2.6,-1.2\n6,2.5,-1.1\n\n7,2.4,-1.0\n8,2.3,-0.9\n");
    const auto d = fit::read_permittivity_csv(ok);
    REQUIRE(d.size() == 8);
    CHECK(d[7].omega == 8.0);
    CHECK(d[0].eps_imag == -1.0);

    SUBCASE("columns may be reordered") {
        std::istringstream s("eps_imag,omega,eps_real\n-1,1,3\n-1,2,3\n-1,3,3\n-1,4,3\n"
                             "-1,5,3\n-1,6,3\n-1,7,3\n-1,8,3\n");
        CHECK(fit::read_permittivity_csv(s)[2].omega == 3.0);
    }
}

TEST_CASE("CSV errors name the problem") {
    auto message = [](const std::string& text) {
        std::istringstream s(text);
        try {
            fit::read_permittivity_csv(s);
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("omega,eps_real\n1,2\n").find("eps_imag") != std::string::npos);
    CHECK(message("omega,eps_real,eps_imag\n1,2,x\n").find("line 2") != std::string::npos);
    CHECK(message("omega,eps_real,eps_imag\n1,2,3\n1,2,3\n").find("increasing") != std::string::npos);
    CHECK(message("omega,eps_real,eps_imag\n1,2\n").find("fields") != std::string::npos);
    CHECK(message("omega,eps_real,eps_imag\n1,2,3\n2,2,3\n").find("8") != std::string::npos);
    CHECK(message("").find("header") != std::string::npos);
}

TEST_CASE("CSV round trip") {
    const auto d = synthetic(RelaxationModel::debye(1.0), 5.0, 2.0, 10);
    std::stringstream s;
    fit::write_permittivity_csv(s, d);
    const auto back = fit::read_permittivity_csv(s);
    REQUIRE(back.size() == d.size());
    CHECK(back[4].eps_imag == d[4].eps_imag);
    CHECK_FALSE(fit::single_decade(d));
}

TEST_CASE("noiseless fits recover parameters") {
    const auto cc = RelaxationModel::cole_cole(0.6, 2e-3);
    const auto r = fit::fit_permittivity(ModelKind::ColeCole, synthetic(cc, 10.0, 3.0, 24));
    CHECK(r.converged);
    CHECK(r.model.alpha == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(r.model.tau == doctest::Approx(2e-3).epsilon(1e-6));
    CHECK(r.eps0 == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(r.epsinf == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(r.residual_norm < 1e-8);

    const auto ew = RelaxationModel::excess_wing(0.4, 1.0, 0.3);
    const auto e = fit::fit_permittivity(ModelKind::ExcessWing, synthetic(ew, 4.0, 1.0, 30));
    CHECK(e.model.alpha == doctest::Approx(0.4).epsilon(1e-4));
    CHECK(e.model.tau1 == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(e.model.tau2 == doctest::Approx(0.3).epsilon(1e-3));
}

TEST_CASE("fits are deterministic and seed dependent only through the starts") {
    const auto d = synthetic(RelaxationModel::havriliak_negami(0.7, 0.5, 1.0), 4.0, 2.0, 16);
    const auto a = fit::fit_permittivity(ModelKind::HavriliakNegami, d);
    const auto b = fit::fit_permittivity(ModelKind::HavriliakNegami, d);
    CHECK(a.model.alpha == b.model.alpha);
    CHECK(a.model.tau == b.model.tau);
    CHECK(a.iterations == b.iterations);
    nlohmann::json j = a;
    CHECK(j["model"]["kind"] == "hn");
    CHECK(j.contains("residual_norm"));
}

TEST_CASE("fit input validation") {
    auto d = synthetic(RelaxationModel::debye(1.0), 5.0, 2.0, 6);
    CHECK_THROWS_AS(fit::fit_permittivity(ModelKind::Debye, d), InputError);
    d = synthetic(RelaxationModel::debye(1.0), 5.0, 2.0, 10);
    fit::FitOptions opt;
    opt.starts = 0;
    CHECK_THROWS_AS(fit::fit_permittivity(ModelKind::Debye, d, opt), InputError);
}
