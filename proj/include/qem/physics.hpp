#pragma once

namespace qem
{
namespace constants
{
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double electron_rest_energy_eV = 510998.95;
inline constexpr double hc_eV_nm = 1239.84198;
//! hbar c in eV nm
inline constexpr double hbar_c_eV_nm = hc_eV_nm / (2 * pi);
}  // namespace constants

//---------------------------------------------------------------------------//
/*!
 * Relativistic electron beam plus the inelastic loss it is subject to.
 *
 * All lengths in nm, energies in eV, angles in radians.
 */
struct BeamModel
{
    double kinetic_energy_eV = 300e3;
    double energy_loss_eV = 20;
    double mean_free_path_nm = 300;

    double gamma() const;
    double beta_rel() const;
    double wavelength_nm() const;
};

//! Radiation damage constant and the fluence optimisation factor
struct DoseModel
{
    double damage_R_nm4 = 7e-4;
    double zeta = 0.064;
    double area_nm2 = 1;
};

struct DamageState
{
    double fluence_nm2 = 0;
    double B_factor_nm2 = 0;
    double std_displacement_nm = 0;
};

struct ZetaSolution
{
    double beta_opt = 0;
    double zeta = 0;
    double residual = 0;
    double bisection_root = 0;
};

// Intensity factor exp(-R F q^2 / 8 pi^2)
double damage_attenuation(double q_per_nm, double fluence, DoseModel const& model);
DamageState damage_state(double fluence, DoseModel const& model);

// Fluence at which a Fourier amplitude at q = 2 pi / sigma decays by 1/e
double amplitude_decay_F0(double sigma_nm, DoseModel const& model);

// Positive root of exp(b) = 2b + 1 and zeta = b / 2 pi^2
ZetaSolution solve_zeta();

// Variance of the dose-limited amplitude estimator at F = beta_ratio * F0
double estimator_variance(double beta_ratio, int k, double area, double F0);

double fluence_opt(double sigma_nm, DoseModel const& model);

// Electron budget per reciprocal-space square at resolution sigma
double dose_budget_nsq(double sigma_nm, DoseModel const& model);

/*!
 * Budget obtained by integrating the fluence increment over the ring
 * [q, q + dq] and assigning it to one square of side dq, dq^2 A = (2 pi)^2.
 */
double dose_budget_band(double sigma_nm, double area_nm2, DoseModel const& model);

// Characteristic inelastic angle E / (gamma m c^2 beta^2)
double theta_E(BeamModel const& beam);
// Nonrelativistic form E / 2 E_K, for comparison only
double theta_E_nonrelativistic(BeamModel const& beam);
// Cutoff angle sqrt(2 theta_E / gamma)
double bethe_ridge_angle(BeamModel const& beam);

void validate(BeamModel const& beam);
void validate(DoseModel const& model);

}  // namespace qem
