#include "qem/baselines.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "qem/errors.hpp"
#include "qem/physics.hpp"

namespace qem
{
using constants::pi;

char const* to_string(Scheme s)
{
    switch (s)
    {
        case Scheme::in_focus_phase_contrast:
            return "in_focus";
        case Scheme::dark_field:
            return "dark_field";
        case Scheme::diffraction:
            return "diffraction";
        case Scheme::discrete_n_pixel:
            return "discrete";
        case Scheme::scanning_pairwise:
            return "scanning";
    }
    return "?";
}

Scheme scheme_from_string(std::string const& s)
{
    for (Scheme k : {Scheme::in_focus_phase_contrast,
                     Scheme::dark_field,
                     Scheme::diffraction,
                     Scheme::discrete_n_pixel,
                     Scheme::scanning_pairwise})
        if (s == to_string(k))
            return k;
    throw ConfigError("unknown measurement scheme '" + s + "'");
}

double variance_analytic(MeasurementScheme const& scheme, double alpha)
{
    if (scheme.N < 1)
        throw DomainError("variance_analytic: N must be >= 1");
    switch (scheme.kind)
    {
        case Scheme::in_focus_phase_contrast:
        case Scheme::dark_field:
        case Scheme::diffraction:
            if (!(alpha > 0 && alpha < 1))
                throw DomainError("variance_analytic: need 0 < alpha < 1");
            return 1 / (4 * scheme.N * alpha);
        case Scheme::discrete_n_pixel:
        case Scheme::scanning_pairwise:
            if (scheme.n_pixels < 2)
                throw DomainError("variance_analytic: need n >= 2 pixels");
            return (scheme.n_pixels - 1) / (4.0 * scheme.N);
    }
    throw ConfigError("variance_analytic: unsupported scheme");
}

double McResult::mean_std_error() const
{
    return std::sqrt(variance / trials);
}

namespace
{
// Probability of the first nonzero diffraction bin for a cosine specimen
double diffraction_probability(double theta, int n)
{
    double amp = 2 * theta / std::sqrt(static_cast<double>(n));
    std::complex<double> c = 0;
    for (int j = 0; j < n; ++j)
    {
        double ph = amp * std::cos(2 * pi * j / n);
        c += std::polar(1.0, ph) * std::polar(1.0, -2 * pi * j / n);
    }
    c /= static_cast<double>(n);
    return std::norm(c);
}

}  // namespace

McResult variance_monte_carlo(MeasurementScheme const& scheme,
                              double theta_true,
                              double alpha,
                              long trials,
                              Rng& rng)
{
    if (trials < 2)
        throw DomainError("variance_monte_carlo: need at least two trials");
    McResult res;
    res.trials = trials;
    res.analytic = variance_analytic(scheme, alpha);
    double const N = static_cast<double>(scheme.N);

    long draws_N = scheme.N;
    double p = 0;
    std::function<double(double)> estimate;
    switch (scheme.kind)
    {
        case Scheme::in_focus_phase_contrast:
            p = alpha * (1 + 2 * theta_true);
            estimate = [=](double x) { return 0.5 * (x / (N * alpha) - 1); };
            break;
        case Scheme::dark_field:
            p = alpha * theta_true * theta_true;
            estimate = [=](double x) { return std::sqrt(x / (N * alpha)); };
            break;
        case Scheme::diffraction:
        {
            int n = static_cast<int>(std::lround(1 / alpha));
            if (n < 3)
                throw DomainError("diffraction scheme needs alpha <= 1/3");
            double a = 1.0 / n;
            p = diffraction_probability(theta_true, n);
            estimate = [=](double x) { return std::sqrt(x / (N * a)); };
            res.analytic = 1 / (4 * N * a);
            break;
        }
        case Scheme::discrete_n_pixel:
        {
            int n = scheme.n_pixels;
            p = (1 + 2 * theta_true) / n;
            estimate = [=](double x) { return 0.5 * (n * x / N - 1); };
            break;
        }
        case Scheme::scanning_pairwise:
        {
            draws_N = scheme.N / (scheme.n_pixels - 1);
            double Np = static_cast<double>(draws_N);
            p = (1 + 2 * theta_true) / 2;
            estimate = [=](double x) { return 0.5 * (2 * x / Np - 1); };
            break;
        }
    }
    if (!(p >= 0 && p <= 1))
        throw DomainError("variance_monte_carlo: detection probability out of range");

    std::binomial_distribution<long> binom(draws_N, p);
    double mean = 0, m2 = 0;
    for (long t = 0; t < trials; ++t)
    {
        double y = estimate(static_cast<double>(binom(rng.engine())));
        // Welford update
        double d = y - mean;
        mean += d / (t + 1);
        m2 += d * (y - mean);
    }
    res.mean = mean;
    res.variance = m2 / (trials - 1);
    return res;
}

//---------------------------------------------------------------------------//
UpDown eeem_probabilities(int k, double delta)
{
    double s = std::sin(k * delta);
    return {0.5 * (1 + s), 0.5 * (1 - s)};
}

VarianceGain eeem_variance_gain(int k, long N, double delta)
{
    if (k < 1 || N < k)
        throw DomainError("eeem_variance_gain: need 1 <= k <= N");
    // The 1/k^2 group variance is the small-signal slope of sin(k delta)
    if (!(std::abs(k * delta) < 1))
        throw DomainError("eeem_variance_gain: needs k delta << 1");
    VarianceGain g;
    g.quantum_group = 1.0 / (static_cast<double>(k) * k);
    g.classical_group = 1.0 / k;
    double groups = static_cast<double>(N) / k;
    g.quantum_total = g.quantum_group / groups;
    g.classical_total = g.classical_group / groups;
    return g;
}

double background_phase_penalty(double delta_bg)
{
    if (!(std::abs(delta_bg) < 0.5))
        throw DomainError("background phase must satisfy |delta| < 0.5");
    return 1 - 1.5 * delta_bg * delta_bg;
}

double background_phase_penalty_exact(double delta_bg)
{
    if (!(std::abs(delta_bg) < 0.5))
        throw DomainError("background phase must satisfy |delta| < 0.5");
    double c = std::cos(delta_bg);
    double den = 3 - 2 * c;
    double p_plus = 0.5 + std::sin(delta_bg) / den;
    double p_minus = 0.5 - std::sin(delta_bg) / den;
    return (3 * c - 2) / (den * den) / (2 * std::sqrt(p_plus * p_minus));
}

std::vector<HeisenbergRow> heisenberg_fixed_passages(int n, double N)
{
    if (n < 1 || !(N > 0))
        throw DomainError("heisenberg_fixed_passages: need n >= 1 and N > 0");
    return {
        {"classical", n / N},
        {"multi_pixel_quantum", n / (N * N)},
        {"single_pixel_quantum_set", n * static_cast<double>(n) / (N * N)},
    };
}

}  // namespace qem
