#pragma once

#include <complex>
#include <optional>
#include <string>

namespace relaxkit {

enum class ModelKind { Debye, ColeCole, ColeDavidson, HavriliakNegami, JWS, ExcessWing };

std::string to_string(ModelKind kind);
/// Accepts the CLI spellings: debye, cc, cd, hn, jws, ew (and the long names).
ModelKind parse_model_kind(const std::string& name);

/// Relaxation-model parameter set. `B` is the transition rate in 1/time;
/// the factories default it to 1/tau (1/tau1 for the excess wing).
struct RelaxationModel {
    ModelKind kind = ModelKind::Debye;
    double alpha = 1.0;
    double beta = 1.0;
    double tau = 1.0;
    double tau1 = 1.0;  // excess wing only
    double tau2 = 1.0;  // excess wing only
    double B = 1.0;

    static RelaxationModel debye(double tau, std::optional<double> B = {});
    static RelaxationModel cole_cole(double alpha, double tau, std::optional<double> B = {});
    static RelaxationModel cole_davidson(double beta, double tau, std::optional<double> B = {});
    static RelaxationModel havriliak_negami(double alpha, double beta, double tau, std::optional<double> B = {});
    static RelaxationModel jws(double alpha, double beta, double tau, std::optional<double> B = {});
    static RelaxationModel excess_wing(double alpha, double tau1, double tau2, std::optional<double> B = {});

    /// Throws InputError when an invariant is violated.
    void validate() const;

    bool is_excess_wing() const { return kind == ModelKind::ExcessWing; }
    bool is_jws() const { return kind == ModelKind::JWS; }
    /// Debye, Cole-Cole, Cole-Davidson and Havriliak-Negami share one formula.
    bool is_hn_family() const { return !is_jws() && !is_excess_wing(); }
    /// alpha == beta == 1 in a single-time model.
    bool is_debye_limit() const { return !is_excess_wing() && alpha == 1.0 && beta == 1.0; }
    /// Time unit of the model: tau, or tau1 for the excess wing.
    double time_scale() const { return is_excess_wing() ? tau1 : tau; }
};

/// Jonscher exponents.
struct UrlExponents {
    double a = 0.0;
    double b = 0.0;
};

struct PermittivityPoint {
    double omega = 0.0;
    double eps_real = 0.0;
    double eps_imag = 0.0;
};

namespace models {

using cd = std::complex<double>;

/// Spectral function phi^(s), s > 0.
double spectral(const RelaxationModel& m, double s);
/// Analytic continuation to the cut plane (principal-branch powers).
cd spectral(const RelaxationModel& m, cd s);

/// Psi(s) = B [1 - phi^(s)] / phi^(s), from the closed forms.
double levy_exponent(const RelaxationModel& m, double s);
cd levy_exponent(const RelaxationModel& m, cd s);

/// Phi(s) = s / Psi(s).
double levy_exponent_dual(const RelaxationModel& m, double s);

/// M^(s) = 1 / Psi(s).
double memory_M_hat(const RelaxationModel& m, double s);
cd memory_M_hat(const RelaxationModel& m, cd s);

/// k^(s) = Psi(s) / s.
double memory_k_hat(const RelaxationModel& m, double s);
cd memory_k_hat(const RelaxationModel& m, cd s);

/// eps_inf + (eps0 - eps_inf) phi^(i omega). Loss appears as a negative
/// imaginary part.
PermittivityPoint complex_permittivity(const RelaxationModel& m, double omega, double eps0, double epsinf);

/// (a, b) = (1 - alpha beta, alpha) for the HN family and (1 - alpha,
/// alpha beta) for JWS. The excess wing has no single pair and is rejected.
UrlExponents url_exponents(const RelaxationModel& m);

}  // namespace models
}  // namespace relaxkit
