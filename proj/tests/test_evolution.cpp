#include <doctest.h>

#include <cmath>

#include "relaxkit/error.hpp"
#include "relaxkit/evolution.hpp"
#include "relaxkit/timedomain.hpp"

using namespace relaxkit;
using namespace relaxkit::evolution;

namespace {

double max_rel_error(const Solution& sol, const RelaxationModel& m, double t_from) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const double t = sol.grid[i];
        if (t < t_from) continue;
        const double ref = timedomain::response(m, t).regular;
        worst = std::max(worst, std::abs(sol.values[i] - ref) / std::abs(ref));
    }
    return worst;
}

std::vector<double> sample(const Grid& g, double (*f)(double)) {
    std::vector<double> v;
    for (double t : g.nodes()) v.push_back(f(t));
    return v;
}

}  // namespace

TEST_CASE("fractional integral and derivatives") {
    const Grid g = Grid::uniform(0.0, 1.0, 1024);
    const auto e = sample(g, [](double t) { return std::exp(-t); });
    CHECK(frac_integral(e, g, 0.3).back() == doctest::Approx(0.53886038645503344141).epsilon(1e-6));

    // t -> I^a t = t^(1+a)/Gamma(2+a); D^a t = t^(1-a)/Gamma(2-a) (both derivatives)
    const auto lin = sample(g, [](double t) { return t; });
    CHECK(frac_integral(lin, g, 0.5).back() == doctest::Approx(1.0 / std::tgamma(2.5)).epsilon(1e-6));
    CHECK(frac_deriv_rl(lin, g, 0.5).back() == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-4));
    CHECK(frac_deriv_caputo(lin, g, 0.5).back() == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-4));
    // constants: Caputo derivative vanishes, RL does not
    const auto one = sample(g, [](double) { return 1.0; });
    CHECK(std::abs(frac_deriv_caputo(one, g, 0.5).back()) < 1e-12);
    CHECK(frac_deriv_rl(one, g, 0.5).back() == doctest::Approx(1.0 / std::tgamma(0.5)).epsilon(1e-4));
}

TEST_CASE("solver settings") {
    SolverSettings cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.grid = Grid::logarithmic(0.1, 5.0, 64);
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.grid = Grid::uniform(0.1, 5.0, 64);
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.grid = Grid::uniform(0.0, 5.0, 2);
    CHECK_THROWS_AS(cfg.validate(), InputError);
    CHECK(parse_scheme("cq2") == Scheme::convolution_quadrature_order2);
    CHECK_THROWS_AS(parse_scheme("rk4"), InputError);
}

TEST_CASE("both equations reproduce closed-form responses") {
    SolverSettings cfg;
    cfg.grid = Grid::uniform(0.0, 5.0, 512);
    for (auto scheme : {Scheme::product_trapezoid, Scheme::convolution_quadrature_order1,
                        Scheme::convolution_quadrature_order2}) {
        cfg.scheme = scheme;
        CAPTURE(to_string(scheme));
        for (const auto& m : {RelaxationModel::debye(1.0), RelaxationModel::cole_cole(0.5, 1.0)}) {
            const double tol = scheme == Scheme::convolution_quadrature_order1 ? 5e-2 : 2e-3;
            const auto a = solve_integral_eq(timedomain::kernel_M(m), m.B, cfg);
            const auto b = solve_integrodiff_eq(timedomain::kernel_k(m), m.B, cfg);
            CHECK(max_rel_error(a, m, 0.05) < tol);
            CHECK(max_rel_error(b, m, 0.05) < tol);
            CHECK(a.relaxation.front() == doctest::Approx(1.0));
            CHECK(b.relaxation.front() == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("product trapezoid converges") {
    const auto m = RelaxationModel::cole_cole(0.5, 1.0);
    double prev = 0.0;
    for (std::size_t n : {128u, 256u, 512u}) {
        SolverSettings cfg;
        cfg.grid = Grid::uniform(0.0, 5.0, n);
        const double err = max_rel_error(solve_integral_eq(timedomain::kernel_M(m), m.B, cfg), m, 0.05);
        if (prev > 0.0) CHECK(err < prev / 2.0);
        prev = err;
    }
}

TEST_CASE("equivalence of the two formulations") {
    SolverSettings cfg;
    cfg.grid = Grid::uniform(0.0, 5.0, 512);
    CHECK(verify_equivalence(RelaxationModel::cole_cole(0.7, 1.0), cfg, 0.05, 1e-3).pass);
}

TEST_CASE("fractional equations") {
    const auto ew = RelaxationModel::excess_wing(0.5, 1.0, 1.0);
    const Grid g = Grid::uniform(0.0, 5.0, 512);
    CHECK(ew_equation_residual(ew, g, 0.1).pass);
    const std::vector<double> wrong(g.size(), 1.0);
    CHECK_FALSE(ew_equation_residual(ew, g, wrong, 0.1).pass);
    CHECK_THROWS_AS(ew_equation_residual(RelaxationModel::debye(1.0), g, 0.1), InputError);

    const auto jws = RelaxationModel::jws(0.5, 0.5, 1.0);
    CHECK(jws_convolution_identity(jws, Grid::logarithmic(0.1, 5.0, 4), 1024).pass);
}
