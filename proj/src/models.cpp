#include "relaxkit/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "relaxkit/error.hpp"

namespace relaxkit {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Debye: return "debye";
        case ModelKind::ColeCole: return "cc";
        case ModelKind::ColeDavidson: return "cd";
        case ModelKind::HavriliakNegami: return "hn";
        case ModelKind::JWS: return "jws";
        case ModelKind::ExcessWing: return "ew";
    }
    return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == "debye" || n == "d") return ModelKind::Debye;
    if (n == "cc" || n == "cole-cole" || n == "colecole") return ModelKind::ColeCole;
    if (n == "cd" || n == "cole-davidson" || n == "coledavidson") return ModelKind::ColeDavidson;
    if (n == "hn" || n == "havriliak-negami" || n == "havriliaknegami") return ModelKind::HavriliakNegami;
    if (n == "jws") return ModelKind::JWS;
    if (n == "ew" || n == "excess-wing" || n == "excesswing") return ModelKind::ExcessWing;
    throw InputError("unknown model '" + name + "' (expected debye, cc, cd, hn, jws or ew)");
}

namespace {

RelaxationModel single_time(ModelKind kind, double alpha, double beta, double tau, std::optional<double> B) {
    RelaxationModel m;
    m.kind = kind;
    m.alpha = alpha;
    m.beta = beta;
    m.tau = tau;
    m.tau1 = tau;
    m.tau2 = tau;
    m.B = B.value_or(1.0 / tau);
    m.validate();
    return m;
}

}  // namespace

RelaxationModel RelaxationModel::debye(double tau, std::optional<double> B) {
    return single_time(ModelKind::Debye, 1.0, 1.0, tau, B);
}
RelaxationModel RelaxationModel::cole_cole(double alpha, double tau, std::optional<double> B) {
    return single_time(ModelKind::ColeCole, alpha, 1.0, tau, B);
}
RelaxationModel RelaxationModel::cole_davidson(double beta, double tau, std::optional<double> B) {
    return single_time(ModelKind::ColeDavidson, 1.0, beta, tau, B);
}
RelaxationModel RelaxationModel::havriliak_negami(double alpha, double beta, double tau, std::optional<double> B) {
    return single_time(ModelKind::HavriliakNegami, alpha, beta, tau, B);
}
RelaxationModel RelaxationModel::jws(double alpha, double beta, double tau, std::optional<double> B) {
    return single_time(ModelKind::JWS, alpha, beta, tau, B);
}
RelaxationModel RelaxationModel::excess_wing(double alpha, double tau1, double tau2, std::optional<double> B) {
    RelaxationModel m;
    m.kind = ModelKind::ExcessWing;
    m.alpha = alpha;
    m.beta = 1.0;
    m.tau = tau1;
    m.tau1 = tau1;
    m.tau2 = tau2;
    m.B = B.value_or(1.0 / tau1);
    m.validate();
    return m;
}

void RelaxationModel::validate() const {
    using detail::require;
    require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    require(std::isfinite(beta) && beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
    require(std::isfinite(B) && B > 0.0, "rate B must be > 0");
    switch (kind) {
        case ModelKind::Debye: require(alpha == 1.0 && beta == 1.0, "Debye forces alpha = beta = 1"); break;
        case ModelKind::ColeCole: require(beta == 1.0, "Cole-Cole forces beta = 1"); break;
        case ModelKind::ColeDavidson: require(alpha == 1.0, "Cole-Davidson forces alpha = 1"); break;
        default: break;
    }
    if (kind == ModelKind::ExcessWing) {
        require(std::isfinite(tau1) && tau1 > 0.0, "tau1 must be > 0");
        require(std::isfinite(tau2) && tau2 > 0.0, "tau2 must be > 0");
        require(alpha < 1.0, "excess wing needs alpha < 1 (alpha = 1 adds a delta to the response)");
    } else {
        require(std::isfinite(tau) && tau > 0.0, "tau must be > 0");
    }
}

namespace models {
namespace {

double log1p_(double x) { return std::log1p(x); }
double expm1_(double x) { return std::expm1(x); }

cd log1p_(cd z) {
    if (std::abs(z) >= 0.1) return std::log(1.0 + z);
    cd term = z, sum = 0.0;
    for (int n = 1; n <= 20; ++n) {
        sum += (n % 2 ? 1.0 : -1.0) * term / static_cast<double>(n);
        term *= z;
    }
    return sum;
}

cd expm1_(cd z) {
    if (std::abs(z) >= 0.1) return std::exp(z) - 1.0;
    cd term = z, sum = 0.0;
    for (int n = 1; n <= 14; ++n) {
        sum += term;
        term *= z / static_cast<double>(n + 1);
    }
    return sum;
}

template <class T>
T power(T base, double e) {
    if constexpr (std::is_same_v<T, double>) {
        return std::pow(base, e);
    } else {
        if (e == 1.0) return base;
        return std::exp(e * std::log(base));
    }
}

template <class T>
void check_arg(const T& s) {
    if constexpr (std::is_same_v<T, double>) {
        detail::require(s > 0.0 && std::isfinite(s), "s must be > 0");
    } else {
        detail::require(std::isfinite(s.real()) && std::isfinite(s.imag()) && s != T(0.0),
                        "complex s must be finite and nonzero");
        detail::require(!(s.imag() == 0.0 && s.real() < 0.0), "s on the branch cut");
    }
}

// Each family returns phi^, Psi, M^ and k^ through the numerically stable
// route for that family.
template <class T>
struct Quantities {
    T spectral, psi, m_hat, k_hat;
};

template <class T>
Quantities<T> evaluate(const RelaxationModel& m, T s) {
    check_arg(s);
    m.validate();
    Quantities<T> q;
    const double B = m.B;
    if (m.is_hn_family()) {
        const T x = power(T(m.tau) * s, m.alpha);
        const T L = log1p_(x);
        const T e = expm1_(m.beta * L);  // [1 + (tau s)^a]^b - 1
        q.spectral = std::exp(-m.beta * L);
        q.psi = B * e;
        q.m_hat = 1.0 / q.psi;
        q.k_hat = q.psi / s;
    } else if (m.is_jws()) {
        const T u = power(T(m.tau) * s, -m.alpha);
        const T L = log1p_(u);
        const T e = expm1_(m.beta * L);  // [1 + (tau s)^-a]^b - 1
        q.spectral = -expm1_(-m.beta * L);
        q.psi = B / e;
        q.m_hat = e / B;
        q.k_hat = q.psi / s;
    } else {
        const T w = power(T(m.tau2) * s, m.alpha);
        const T num = 1.0 + w;
        q.spectral = num / (num + m.tau1 * s);
        q.psi = B * s * m.tau1 / num;
        q.m_hat = num / (B * m.tau1 * s);
        q.k_hat = B * m.tau1 / num;
    }
    return q;
}

}  // namespace

double spectral(const RelaxationModel& m, double s) { return evaluate(m, s).spectral; }
cd spectral(const RelaxationModel& m, cd s) { return evaluate(m, s).spectral; }
double levy_exponent(const RelaxationModel& m, double s) { return evaluate(m, s).psi; }
cd levy_exponent(const RelaxationModel& m, cd s) { return evaluate(m, s).psi; }
double levy_exponent_dual(const RelaxationModel& m, double s) { return s / evaluate(m, s).psi; }
double memory_M_hat(const RelaxationModel& m, double s) { return evaluate(m, s).m_hat; }
cd memory_M_hat(const RelaxationModel& m, cd s) { return evaluate(m, s).m_hat; }
double memory_k_hat(const RelaxationModel& m, double s) { return evaluate(m, s).k_hat; }
cd memory_k_hat(const RelaxationModel& m, cd s) { return evaluate(m, s).k_hat; }

PermittivityPoint complex_permittivity(const RelaxationModel& m, double omega, double eps0, double epsinf) {
    detail::require(omega > 0.0 && std::isfinite(omega), "omega must be > 0");
    detail::require(std::isfinite(eps0) && std::isfinite(epsinf) && eps0 > epsinf, "need eps0 > epsinf");
    const cd phi = spectral(m, cd(0.0, omega));
    const cd eps = epsinf + (eps0 - epsinf) * phi;
    return {omega, eps.real(), eps.imag()};
}

UrlExponents url_exponents(const RelaxationModel& m) {
    m.validate();
    if (m.is_excess_wing()) throw InputError("the excess-wing model has no single pair of URL exponents");
    if (m.is_jws()) return {1.0 - m.alpha, m.alpha * m.beta};
    return {1.0 - m.alpha * m.beta, m.alpha};
}

}  // namespace models
}  // namespace relaxkit
