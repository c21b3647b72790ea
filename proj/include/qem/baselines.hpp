#pragma once

#include <string>
#include <vector>

#include "qem/rng.hpp"

namespace qem
{
//---------------------------------------------------------------------------//
enum class Scheme
{
    in_focus_phase_contrast,
    dark_field,
    diffraction,
    discrete_n_pixel,
    scanning_pairwise,
};

char const* to_string(Scheme s);
Scheme scheme_from_string(std::string const& s);

struct MeasurementScheme
{
    Scheme kind = Scheme::in_focus_phase_contrast;
    long N = 1000000;  //!< electrons
    int n_pixels = 2;
};

//! Closed-form estimator variance; alpha is the detection-area weight
double variance_analytic(MeasurementScheme const& scheme, double alpha);

struct McResult
{
    double mean = 0;
    double variance = 0;
    double analytic = 0;
    long trials = 0;

    double ratio() const { return variance / analytic; }
    double mean_std_error() const;
};

/*!
 * Sample detector counts from each scheme's probability law and apply its
 * estimator.
 *
 * In-focus: p = alpha (1 + 2 theta), estimate (X/(N alpha) - 1)/2.
 * Dark field: p = alpha theta^2, estimate sqrt(X/(N alpha)).
 * Diffraction: n = round(1/alpha) pixels carrying a cosine phase whose
 * unitary DFT has |Theta_1| = theta; p from the exact exit wave.
 * Discrete: p_s = (1 + 2 theta_s)/n with theta_1 = theta, W = (n Z/N - 1)/2.
 * Scanning: n - 1 two-pixel measurements of N/(n-1) electrons each.
 */
McResult variance_monte_carlo(MeasurementScheme const& scheme,
                              double theta_true,
                              double alpha,
                              long trials,
                              Rng& rng);

//---------------------------------------------------------------------------//
struct UpDown
{
    double p_up = 0.5;
    double p_down = 0.5;
};

//! (1 +- sin k delta)/2
UpDown eeem_probabilities(int k, double delta);

struct VarianceGain
{
    double quantum_group = 0;  //!< 1/k^2
    double classical_group = 0;  //!< 1/k
    double quantum_total = 0;  //!< over N/k groups
    double classical_total = 0;
};

VarianceGain eeem_variance_gain(int k, long N, double delta);

//! 1 - 3 delta^2 / 2
double background_phase_penalty(double delta_bg);
//! Unexpanded form from the three-outcome readout
double background_phase_penalty_exact(double delta_bg);

//---------------------------------------------------------------------------//
struct HeisenbergRow
{
    std::string method;
    double variance_per_pixel = 0;
};

//! Per-pixel variances at a fixed total of N electron passages over n pixels
std::vector<HeisenbergRow> heisenberg_fixed_passages(int n, double N);

}  // namespace qem
