#include "relaxkit/laplace.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "relaxkit/error.hpp"

namespace relaxkit::laplace {

void TransformSettings::validate() const {
    detail::require(forward_rel_tol > 0.0 && forward_rel_tol < 1.0, "forward_rel_tol must be in (0,1)");
    detail::require(gs_terms >= 8 && gs_terms % 2 == 0, "gs_terms must be even and >= 8");
    detail::require(talbot_nodes >= 16, "talbot_nodes must be >= 16");
}

namespace {

// Integral of exp(-s t) g(t) over [a, b] where g is smooth on the interval.
double gk_panel(const std::function<double(double)>& g, double s, double a, double b, double tol) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double t) { return std::exp(-s * t) * g(t); };
    double err = 0.0;
    return gauss_kronrod<double, 21>::integrate(integrand, a, b, 8, tol, &err);
}

}  // namespace

double forward(const GeneralizedFunction& f, double s, const TransformSettings& cfg) {
    cfg.validate();
    detail::require(s > 0.0 && std::isfinite(s), "forward transform needs s > 0");
    const double g = f.sing_exponent;
    detail::require(g > 0.0 && g <= 1.0, "singular exponent must lie in (0,1]");
    if (!f.regular) return f.delta_weight;

    const double tol = cfg.forward_rel_tol;
    const double eps = std::min(0.1 / s, 0.1);
    const double c = f.sing_coefficient;
    const double gamma_g = std::tgamma(g);

    // Head: closed-form leading power term plus tanh-sinh on the remainder.
    double head = 0.0;
    if (c != 0.0) head = c * std::pow(s, -g) * boost::math::gamma_p(g, s * eps);
    {
        boost::math::quadrature::tanh_sinh<double> ts(12);
        auto remainder = [&](double t) {
            double v = f.regular(t);
            if (c != 0.0) v -= c * std::pow(t, g - 1.0) / gamma_g;
            return std::exp(-s * t) * v;
        };
        double err = 0.0, l1 = 0.0;
        head += ts.integrate(remainder, 0.0, eps, tol * 1e-2, &err, &l1);
    }

    // Tail on doubling panels.
    double tail = 0.0;
    const double t_cut = -std::log(tol * 1e-4) / s;
    double a = eps;
    int quiet = 0;
    for (int panel = 0; panel < 400; ++panel) {
        const double b = 2.0 * a;
        const double part = gk_panel(f.regular, s, a, b, tol * 1e-2);
        if (!std::isfinite(part)) throw NumericalError("forward transform: non-finite panel integral");
        tail += part;
        const double total = std::abs(head + tail) + std::abs(f.delta_weight);
        if (b >= t_cut && std::abs(part) <= tol * 1e-3 * std::max(total, 1e-300)) {
            if (++quiet >= 2) return f.delta_weight + head + tail;
        } else {
            quiet = 0;
        }
        a = b;
    }
    std::ostringstream os;
    os << "forward transform did not converge at s=" << s << " (regular part does not decay against exp(-s t))";
    throw NumericalError(os.str());
}

double invert_talbot(const ComplexImage& F, double t, int nodes) {
    detail::require(t > 0.0 && std::isfinite(t), "inversion needs t > 0");
    detail::require(nodes >= 2, "talbot needs at least two nodes");
    using cd = std::complex<double>;
    const double pi = std::numbers::pi;
    const int M = nodes;
    const double r = 2.0 * M / (5.0 * t);
    double acc = 0.5 * std::real(F(cd(r, 0.0))) * std::exp(r * t);
    for (int k = 1; k < M; ++k) {
        const double theta = k * pi / M;
        const double cot = 1.0 / std::tan(theta);
        const cd sk(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        acc += std::real(std::exp(t * sk) * F(sk) * cd(1.0, sigma));
    }
    const double v = acc * r / M;
    if (!std::isfinite(v)) throw NumericalError("talbot inversion produced a non-finite value");
    return v;
}

namespace {

std::vector<long double> stehfest_weights(int N) {
    std::vector<long double> fact(2 * N + 2, 1.0L);
    for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<long double>(i);
    const int half = N / 2;
    std::vector<long double> V(N + 1, 0.0L);
    for (int k = 1; k <= N; ++k) {
        long double sum = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            sum += std::pow(static_cast<long double>(j), half) * fact[2 * j] /
                   (fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k]);
        }
        V[k] = ((k + half) % 2 == 0 ? 1.0L : -1.0L) * sum;
    }
    return V;
}

long double stehfest_sum(const std::vector<long double>& V, const std::vector<double>& samples, int N) {
    long double acc = 0.0L;
    for (int k = 1; k <= N; ++k) acc += V[k] * static_cast<long double>(samples[k]);
    return acc;
}

}  // namespace

double invert_gaver_stehfest(const RealImage& F, double t, int terms, double consistency_tol) {
    detail::require(t > 0.0 && std::isfinite(t), "inversion needs t > 0");
    detail::require(terms >= 8 && terms % 2 == 0, "gaver-stehfest needs an even number of terms >= 8");
    const double ln2t = std::numbers::ln2 / t;
    std::vector<double> samples(terms + 1, 0.0);
    for (int k = 1; k <= terms; ++k) {
        samples[k] = F(k * ln2t);
        if (!std::isfinite(samples[k])) throw NumericalError("gaver-stehfest: image not finite on the real axis");
    }
    const auto V = stehfest_weights(terms);
    const double main = static_cast<double>(stehfest_sum(V, samples, terms)) * ln2t;

    // Companion estimate with two fewer terms evaluated at its own nodes.
    const int n2 = terms - 2;
    const auto V2 = stehfest_weights(n2);
    const double lower = static_cast<double>(stehfest_sum(V2, samples, n2)) * ln2t;
    double scale = 0.0;
    for (int k = 1; k <= terms; ++k) scale = std::max(scale, std::abs(samples[k]) * ln2t);
    const double diff = std::abs(main - lower);
    if (diff > consistency_tol * std::max(std::abs(main), 1e-3 * scale)) {
        std::ostringstream os;
        os << "gaver-stehfest: acceleration unstable at t=" << t << " (N=" << terms << " gives " << main << ", N="
           << n2 << " gives " << lower << ")";
        throw NumericalError(os.str());
    }
    return main;
}

double invert(const Image& F, double t, const TransformSettings& cfg) {
    cfg.validate();
    if (cfg.invert_method == InvertMethod::talbot) {
        if (!F.complex) throw InputError("talbot inversion needs a complex-capable image");
        return invert_talbot(F.complex, t, cfg.talbot_nodes);
    }
    if (F.real) return invert_gaver_stehfest(F.real, t, cfg.gs_terms);
    if (!F.complex) throw InputError("empty Laplace image");
    auto real_from_complex = [&](double s) { return std::real(F.complex(std::complex<double>(s, 0.0))); };
    return invert_gaver_stehfest(real_from_complex, t, cfg.gs_terms);
}

}  // namespace relaxkit::laplace
