#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = {}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = relaxkit::cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("eval writes rows") {
    auto r = run({"eval", "--model", "debye", "--tau", "1", "--target", "relaxation", "--t", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "t,value\n1,0.367879441171442\n");

    r = run({"eval", "--model", "hn", "--alpha", "0.5", "--beta", "0.5", "--tau", "1", "--target", "spectral", "--s",
             "1"});
    CHECK(r.out.find("1,0.707106781186548") != std::string::npos);

    r = run({"eval", "--model", "ew", "--alpha", "0.5", "--tau1", "1", "--tau2", "1", "--target", "kernel-M", "--t",
             "4"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("# delta_weight=0\n", 0) == 0);
    CHECK(r.out.find("4,1.28209479177388") != std::string::npos);
}

TEST_CASE("eval grid and json") {
    const auto r = run({"eval", "--model", "cc", "--alpha", "0.5", "--target", "response", "--grid", "0.1:10:5:log",
                        "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["points"].size() == 5);
    CHECK(j["delta_weight"] == 0.0);
    CHECK(j["model"]["kind"] == "cc");

    const auto p = run({"eval", "--model", "debye", "--target", "permittivity", "--grid", "0.1:10:3:lin", "--eps0",
                        "5", "--epsinf", "2"});
    CHECK(p.out.rfind("omega,eps_real,eps_imag\n", 0) == 0);
}

TEST_CASE("input errors exit with code 2") {
    CHECK(run({"eval", "--model", "hn", "--alpha", "1.5", "--target", "relaxation", "--t", "1"}).code == 2);
    CHECK(run({"eval", "--model", "ew", "--alpha", "0.5", "--tau1", "1", "--target", "relaxation", "--t", "1"}).code ==
          2);
    CHECK(run({"eval", "--model", "debye", "--alpha", "0.5", "--target", "relaxation", "--t", "1"}).code == 2);
    CHECK(run({"eval", "--model", "debye", "--target", "nonsense", "--t", "1"}).code == 2);
    CHECK(run({"eval", "--model", "debye", "--target", "relaxation", "--grid", "1:2:x:log"}).code == 2);
    CHECK(run({"eval", "--model", "debye", "--target", "relaxation"}).code == 2);
    CHECK(run({"eval", "--model", "debye", "--target", "relaxation", "--t", "1", "--format", "xml"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    const auto r = run({"fit", "--model", "hn"}, "omega,eps_real\n1,2\n");
    CHECK(r.code == 2);
    CHECK(r.err.find("eps_imag") != std::string::npos);
}

TEST_CASE("check suites report and set the exit code") {
    auto r = run({"check", "--suite", "sonine", "--model", "debye"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    CHECK(j[0]["verdict"] == "pass");
    CHECK(j[0]["max_violation"] == 0.0);

    r = run({"check", "--suite", "url", "--model", "hn", "--alpha", "0.5", "--beta", "0.5"});
    CHECK(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j.size() == 2);

    r = run({"check", "--suite", "equivalence", "--model", "cc", "--alpha", "0.5", "--tol", "1e-4"});
    CHECK(r.code == 0);

    // an impossible tolerance makes the property fail: exit 1, report still written
    r = run({"check", "--suite", "url", "--model", "hn", "--alpha", "0.5", "--beta", "0.5", "--tol", "1e-9"});
    CHECK(r.code == 1);
    CHECK(nlohmann::json::parse(r.out)[0]["verdict"] == "fail");

    CHECK(run({"check", "--suite", "jws-identity", "--model", "debye"}).code == 2);
}

TEST_CASE("fit from stdin and config file") {
    const auto gen = run({"eval", "--model", "hn", "--alpha", "0.7", "--beta", "0.4", "--tau", "1e-3", "--target",
                          "permittivity", "--eps0", "5", "--epsinf", "2", "--grid", "0.1:1e6:25:log"});
    REQUIRE(gen.code == 0);

    const std::string path = "test_cli_fit.cfg";
    {
        std::ofstream f(path);
        f << "# fit settings\nmodel = debye\nformat=csv\n";
    }
    // the command-line model wins over the file
    const auto a = run({"fit", "--config", path, "--model", "hn"}, gen.out);
    const auto b = run({"fit", "--config", path, "--model", "hn"}, gen.out);
    std::remove(path.c_str());
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("model,alpha,beta,tau", 0) == 0);
    std::istringstream rows(a.out);
    std::string header, line;
    std::getline(rows, header);
    std::getline(rows, line);
    CHECK(line.rfind("hn,", 0) == 0);
    CHECK(std::stod(line.substr(3)) == doctest::Approx(0.7).epsilon(1e-6));

    CHECK(run({"fit", "--config", "does-not-exist.cfg", "--model", "hn"}).code == 2);
}
