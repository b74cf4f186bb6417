#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relaxkit/models.hpp"

namespace relaxkit {

void to_json(nlohmann::json& j, const RelaxationModel& m);

}  // namespace relaxkit

namespace relaxkit::fit {

/// Reads "omega,eps_real,eps_imag" CSV (any column order, '#' comments,
/// blank lines ignored). Requires at least 8 rows with omega > 0 strictly
/// increasing. Errors carry the offending line number.
std::vector<PermittivityPoint> read_permittivity_csv(std::istream& in);

void write_permittivity_csv(std::ostream& out, const std::vector<PermittivityPoint>& data);

/// True when the data span less than one decade of frequency.
bool single_decade(const std::vector<PermittivityPoint>& data);

struct FitOptions {
    std::uint64_t seed = 20240917;
    int starts = 5;
    int max_evaluations = 4000;  // per start
    double tolerance = 1e-10;    // relative spread of the simplex values
};

struct FitResult {
    RelaxationModel model;
    double eps0 = 0.0;
    double epsinf = 0.0;
    double residual_norm = 0.0;  // rms over real and imaginary parts
    int iterations = 0;          // summed over starts
    bool converged = false;
};

void to_json(nlohmann::json& j, const FitResult& r);

/// Least-squares fit of the named model to permittivity data. Shape
/// parameters are searched by Nelder-Mead from Latin-hypercube starts in the
/// valid box; eps0 and epsinf enter linearly and are solved for exactly at
/// every evaluation. Points are weighted by their share of the log-frequency
/// span. The starts run concurrently; the best residual wins and ties go to
/// the lower start index, so the result depends only on the data and seed.
FitResult fit_permittivity(ModelKind kind, const std::vector<PermittivityPoint>& data, const FitOptions& opt = {});

}  // namespace relaxkit::fit
