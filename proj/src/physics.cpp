#include "qem/physics.hpp"

#include <cmath>
#include <string>

#include "qem/errors.hpp"
#include "qem/roots.hpp"

namespace qem
{
using constants::pi;

double BeamModel::gamma() const
{
    return 1 + kinetic_energy_eV / constants::electron_rest_energy_eV;
}

double BeamModel::beta_rel() const
{
    double g = this->gamma();
    return std::sqrt(1 - 1 / (g * g));
}

double BeamModel::wavelength_nm() const
{
    double ek = kinetic_energy_eV;
    return constants::hc_eV_nm
           / std::sqrt(ek * (ek + 2 * constants::electron_rest_energy_eV));
}

void validate(BeamModel const& beam)
{
    if (!(beam.kinetic_energy_eV > 0))
        throw ConfigError("kinetic energy must be positive");
    if (!(beam.energy_loss_eV >= 0))
        throw ConfigError("energy loss must be non-negative");
    if (!(beam.mean_free_path_nm > 0))
        throw ConfigError("mean free path must be positive");
}

void validate(DoseModel const& model)
{
    if (!(model.damage_R_nm4 > 0))
        throw ConfigError("damage constant R must be positive");
    if (!(model.zeta > 0))
        throw ConfigError("zeta must be positive");
    if (!(model.area_nm2 > 0))
        throw ConfigError("area must be positive");
}

double damage_attenuation(double q_per_nm, double fluence, DoseModel const& model)
{
    if (q_per_nm < 0 || fluence < 0)
        throw DomainError("damage_attenuation: q and fluence must be >= 0");
    return std::exp(-model.damage_R_nm4 * fluence * q_per_nm * q_per_nm
                    / (8 * pi * pi));
}

DamageState damage_state(double fluence, DoseModel const& model)
{
    if (fluence < 0)
        throw DomainError("damage_state: negative fluence");
    DamageState s;
    s.fluence_nm2 = fluence;
    s.B_factor_nm2 = model.damage_R_nm4 * fluence;
    s.std_displacement_nm = std::sqrt(s.B_factor_nm2 / (8 * pi * pi));
    return s;
}

double amplitude_decay_F0(double sigma_nm, DoseModel const& model)
{
    if (!(sigma_nm > 0))
        throw DomainError("amplitude_decay_F0: sigma must be positive");
    return 4 * sigma_nm * sigma_nm / model.damage_R_nm4;
}

ZetaSolution solve_zeta()
{
    auto f = [](double b) { return std::exp(b) - 2 * b - 1; };
    auto df = [](double b) { return std::exp(b) - 2; };
    RootResult r = bisect_newton(f, df, 0.5, 3.0);
    ZetaSolution s;
    s.beta_opt = r.root;
    s.zeta = r.root / (2 * pi * pi);
    s.residual = r.residual;
    s.bisection_root = r.bisection_root;
    return s;
}

double estimator_variance(double beta_ratio, int k, double area, double F0)
{
    if (!(beta_ratio > 0))
        throw DomainError("estimator_variance: beta must be positive");
    if (k < 1 || !(area > 0) || !(F0 > 0))
        throw DomainError("estimator_variance: k >= 1, A > 0, F0 > 0 required");
    double denom = -std::expm1(-beta_ratio);
    return beta_ratio / (denom * denom) / (k * area * F0);
}

double fluence_opt(double sigma_nm, DoseModel const& model)
{
    if (!(sigma_nm > 0))
        throw DomainError("fluence_opt: sigma must be positive");
    return model.zeta * 8 * pi * pi * sigma_nm * sigma_nm / model.damage_R_nm4;
}

double dose_budget_nsq(double sigma_nm, DoseModel const& model)
{
    if (!(sigma_nm > 0))
        throw DomainError("dose_budget_nsq: sigma must be positive");
    double s2 = sigma_nm * sigma_nm;
    return model.zeta * 8 * pi * s2 * s2 / model.damage_R_nm4;
}

double dose_budget_band(double sigma_nm, double area_nm2, DoseModel const& model)
{
    if (!(sigma_nm > 0) || !(area_nm2 > 0))
        throw DomainError("dose_budget_band: sigma and area must be positive");
    double q = 2 * pi / sigma_nm;
    double dq = 2 * pi / std::sqrt(area_nm2);
    // Fluence increment for the ring, spread over its 2 pi q / dq squares
    double dF = model.zeta * 64 * std::pow(pi, 4) * dq
                / (model.damage_R_nm4 * q * q * q);
    double F_sq = dF / (2 * pi * q / dq);
    return F_sq * area_nm2;
}

double theta_E(BeamModel const& beam)
{
    double b = beam.beta_rel();
    return beam.energy_loss_eV
           / (beam.gamma() * constants::electron_rest_energy_eV * b * b);
}

double theta_E_nonrelativistic(BeamModel const& beam)
{
    return beam.energy_loss_eV / (2 * beam.kinetic_energy_eV);
}

double bethe_ridge_angle(BeamModel const& beam)
{
    return std::sqrt(2 * theta_E(beam) / beam.gamma());
}

}  // namespace qem
