#pragma once

#include <string>
#include <vector>

#include "qem/physics.hpp"

namespace qem
{
//! Stripe partition of the far field around one transmitted beam
struct StripeGeometry
{
    double beta_period = 0;  //!< lambda / sigma
    double cutoff = 0;  //!< theta_c
    double theta_E = 0;

    //! True if the angle x-component falls in the set A stripes
    bool in_set_A(double beta_x) const;
};

struct StripeIntegrals
{
    double set_A = 0;
    double set_S = 0;
    double full_disc = 0;  //!< closed form
};

struct XiSolution
{
    double xi = 0;
    double cos_xi = 0;
    double xi_sq = 0;
    double residual = 0;
};

struct RepetitionPlan
{
    double k1 = 0;
    double k2 = 0;
    double k_opt = 0;
    double k1_tilde = 0;
    double k2_tilde = 0;
    double mu = 0;
    double xi = 0;
    double N_sq = 0;
};

enum class NoiseKind
{
    classical,
    qem,
    qem_isn,
};

char const* to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(std::string const& s);

// 1/(beta^2 + theta_E^2) inside the cutoff disc, zero outside
double dipole_profile(double beta_x, double beta_y, double theta_E, double cutoff);

// Closed form of the profile integrated over the full disc
double dipole_disc_integral(double theta_E, double cutoff);

/*!
 * Integrals of the profile over the A and S stripe sets.
 *
 * Polar midpoint sum. The radial nodes are uniform in log(r^2 + theta_E^2),
 * in which the radial weight r dr / (r^2 + theta_E^2) is constant.
 */
StripeIntegrals stripe_integrals(StripeGeometry const& geo,
                                 int n_radial = 2048,
                                 int n_angular = 2048);

double mu_of_beta(double beta_period, BeamModel const& beam, int resolution = 2048);
double mu_of_stripes(StripeGeometry const& geo, int resolution = 2048);

//! mu on a log-spaced beta grid, linear interpolation in log beta
class MuTable
{
  public:
    MuTable(BeamModel const& beam,
            double beta_lo,
            double beta_hi,
            int n_points = 160,
            int resolution = 512);
    //! Clamped to the end values outside the table
    double operator()(double beta) const;

  private:
    double log_lo_ = 0;
    double step_ = 0;
    std::vector<double> mu_;
};

// Root of tan(xi) = 1/xi in (0, pi/2)
XiSolution solve_xi();

RepetitionPlan plan_repetition(double t_nm,
                               BeamModel const& beam,
                               double sigma_nm,
                               DoseModel const& dose);
//! Plan built from a known mu, skipping the quadrature
RepetitionPlan plan_from_mu(double k1, double mu, double N_sq);

double snr_improvement_no_isn(double k1);

/*!
 * Noise amplitude per reciprocal square at angle beta.
 *
 * The classical spectrum is 1/sqrt(N_sq) evaluated at sigma = lambda/beta.
 */
double noise_spectrum(NoiseKind kind,
                      double beta,
                      RepetitionPlan const& plan,
                      BeamModel const& beam,
                      DoseModel const& dose);
double classical_noise(double beta, BeamModel const& beam, DoseModel const& dose);

/*!
 * Phase noise spectrum with the repetition plan re-derived at every angle:
 * N_sq at sigma = lambda / beta and mu(beta) from a table.
 */
class PhaseNoiseSpectrum
{
  public:
    PhaseNoiseSpectrum(NoiseKind kind,
                       double k1,
                       BeamModel const& beam,
                       DoseModel const& dose,
                       MuTable const* mu);
    double operator()(double beta) const;
    NoiseKind kind() const { return kind_; }

  private:
    NoiseKind kind_;
    double k1_;
    BeamModel beam_;
    DoseModel dose_;
    MuTable const* mu_;
};

struct Figure2Row
{
    double beta = 0;
    std::vector<double> k_opt;  //!< one per lambda/t value
    double N_sq = 0;
    double mu = 0;
};

std::vector<Figure2Row> figure2_curves(std::vector<double> const& beta_grid,
                                       std::vector<double> const& lambda_over_t,
                                       BeamModel const& beam,
                                       DoseModel const& dose);

}  // namespace qem
