#include "qem/isn_analysis.hpp"

#include <cmath>

#include "qem/errors.hpp"
#include "qem/roots.hpp"

namespace qem
{
using constants::pi;

bool StripeGeometry::in_set_A(double beta_x) const
{
    double u = beta_x / beta_period;
    double frac = u - std::floor(u);
    return frac > 0.25 && frac < 0.75;
}

char const* to_string(NoiseKind kind)
{
    switch (kind)
    {
        case NoiseKind::classical:
            return "classical";
        case NoiseKind::qem:
            return "qem";
        case NoiseKind::qem_isn:
            return "qem_isn";
    }
    return "?";
}

NoiseKind noise_kind_from_string(std::string const& s)
{
    if (s == "classical")
        return NoiseKind::classical;
    if (s == "qem")
        return NoiseKind::qem;
    if (s == "qem_isn")
        return NoiseKind::qem_isn;
    throw ConfigError("unknown noise kind '" + s + "'");
}

double dipole_profile(double beta_x, double beta_y, double theta_E, double cutoff)
{
    double b2 = beta_x * beta_x + beta_y * beta_y;
    if (b2 >= cutoff * cutoff)
        return 0;
    return 1 / (b2 + theta_E * theta_E);
}

double dipole_disc_integral(double theta_E, double cutoff)
{
    return pi * std::log1p(cutoff * cutoff / (theta_E * theta_E));
}

StripeIntegrals stripe_integrals(StripeGeometry const& geo, int n_radial, int n_angular)
{
    if (!(geo.beta_period > 0) || !(geo.cutoff > 0) || !(geo.theta_E > 0))
        throw DomainError("stripe_integrals: period, cutoff and theta_E must be positive");

    double const e2 = geo.theta_E * geo.theta_E;
    double const u_lo = std::log(e2);
    double const u_hi = std::log(e2 + geo.cutoff * geo.cutoff);
    double const du = (u_hi - u_lo) / n_radial;
    double const dphi = 2 * pi / n_angular;
    // r dr / (r^2 + e^2) = du / 2
    double const cell = 0.5 * du * dphi;

    std::vector<double> cos_phi(n_angular);
    for (int j = 0; j < n_angular; ++j)
        cos_phi[j] = std::cos((j + 0.5) * dphi);

    double sum_A = 0;
    long count_A = 0;
    for (int i = 0; i < n_radial; ++i)
    {
        double r = std::sqrt(std::exp(u_lo + (i + 0.5) * du) - e2);
        long row_A = 0;
        for (int j = 0; j < n_angular; ++j)
            row_A += geo.in_set_A(r * cos_phi[j]);
        count_A += row_A;
        sum_A += row_A * cell;
    }
    StripeIntegrals out;
    out.full_disc = dipole_disc_integral(geo.theta_E, geo.cutoff);
    double quad_full = cell * static_cast<double>(n_radial) * n_angular;
    if (std::abs(quad_full - out.full_disc) > 1e-6 * out.full_disc)
        throw NumericError("stripe quadrature failed the full-disc check");
    out.set_A = sum_A;
    out.set_S = cell * (static_cast<double>(n_radial) * n_angular - count_A);
    return out;
}

double mu_of_stripes(StripeGeometry const& geo, int resolution)
{
    StripeIntegrals s = stripe_integrals(geo, resolution, resolution);
    if (!(s.set_S > 0))
        throw NumericError("mu: empty S set");
    return std::sqrt(s.set_A / s.set_S);
}

double mu_of_beta(double beta_period, BeamModel const& beam, int resolution)
{
    if (!(beta_period > 0))
        throw DomainError("mu_of_beta: beta must be positive");
    StripeGeometry geo;
    geo.beta_period = beta_period;
    geo.cutoff = bethe_ridge_angle(beam);
    geo.theta_E = theta_E(beam);
    return mu_of_stripes(geo, resolution);
}

MuTable::MuTable(BeamModel const& beam, double beta_lo, double beta_hi, int n_points, int resolution)
{
    if (!(beta_lo > 0) || !(beta_hi > beta_lo) || n_points < 2)
        throw DomainError("MuTable: need 0 < beta_lo < beta_hi and two points");
    log_lo_ = std::log(beta_lo);
    step_ = (std::log(beta_hi) - log_lo_) / (n_points - 1);
    mu_.resize(n_points);
    for (int i = 0; i < n_points; ++i)
        mu_[i] = mu_of_beta(std::exp(log_lo_ + i * step_), beam, resolution);
}

double MuTable::operator()(double beta) const
{
    if (!(beta > 0))
        return mu_.front();
    double x = (std::log(beta) - log_lo_) / step_;
    if (x <= 0)
        return mu_.front();
    if (x >= mu_.size() - 1)
        return mu_.back();
    auto i = static_cast<std::size_t>(x);
    double w = x - i;
    return (1 - w) * mu_[i] + w * mu_[i + 1];
}

XiSolution solve_xi()
{
    // x sin x - cos x = 0 is tan x = 1/x without the pole
    auto f = [](double x) { return x * std::sin(x) - std::cos(x); };
    auto df = [](double x) { return 2 * std::sin(x) + x * std::cos(x); };
    RootResult r = bisect_newton(f, df, 0.5, 1.5);
    XiSolution s;
    s.xi = r.root;
    s.cos_xi = std::cos(r.root);
    s.xi_sq = r.root * r.root;
    s.residual = std::tan(r.root) - 1 / r.root;
    return s;
}

RepetitionPlan plan_from_mu(double k1, double mu, double N_sq)
{
    XiSolution xs = solve_xi();
    RepetitionPlan p;
    p.k1 = k1;
    p.mu = mu;
    p.xi = xs.xi;
    p.N_sq = N_sq;
    p.k2 = mu > 0 ? xs.xi_sq * k1 / (4 * mu * mu) : INFINITY;
    p.k_opt = std::max(p.k2, p.k1);
    p.k1_tilde = std::max(std::min(p.k1, N_sq), std::exp(1.0));
    p.k2_tilde = std::max(std::min(p.k_opt, N_sq), 1 / (xs.cos_xi * xs.cos_xi));
    return p;
}

RepetitionPlan plan_repetition(double t_nm,
                               BeamModel const& beam,
                               double sigma_nm,
                               DoseModel const& dose)
{
    if (!(t_nm > 0) || !(sigma_nm > 0))
        throw DomainError("plan_repetition: t and sigma must be positive");
    double k1 = beam.mean_free_path_nm / t_nm;
    double mu = mu_of_beta(beam.wavelength_nm() / sigma_nm, beam);
    return plan_from_mu(k1, mu, dose_budget_nsq(sigma_nm, dose));
}

double snr_improvement_no_isn(double k1)
{
    if (!(k1 > 0))
        throw DomainError("snr_improvement_no_isn: k1 must be positive");
    return std::sqrt(k1 / std::exp(1.0));
}

double classical_noise(double beta, BeamModel const& beam, DoseModel const& dose)
{
    if (beta < 0)
        throw DomainError("classical_noise: beta must be >= 0");
    if (beta == 0)
        return 0;
    // q = 2 pi beta / lambda; 1/sqrt(N_sq) = sqrt(R / 128 pi^5 zeta) q^2
    double q = 2 * pi * beta / beam.wavelength_nm();
    return std::sqrt(dose.damage_R_nm4 / (128 * std::pow(pi, 5) * dose.zeta)) * q * q;
}

double noise_spectrum(NoiseKind kind,
                      double beta,
                      RepetitionPlan const& plan,
                      BeamModel const& beam,
                      DoseModel const& dose)
{
    double c = classical_noise(beta, beam, dose);
    switch (kind)
    {
        case NoiseKind::classical:
            return c;
        case NoiseKind::qem:
            return std::sqrt(std::exp(1.0) / plan.k1_tilde) * c;
        case NoiseKind::qem_isn:
            return c / (std::sqrt(plan.k2_tilde) * std::cos(plan.xi));
    }
    return c;
}

PhaseNoiseSpectrum::PhaseNoiseSpectrum(NoiseKind kind,
                                       double k1,
                                       BeamModel const& beam,
                                       DoseModel const& dose,
                                       MuTable const* mu)
    : kind_(kind), k1_(k1), beam_(beam), dose_(dose), mu_(mu)
{
    if (kind != NoiseKind::classical && !(k1 > 0))
        throw ConfigError("noise spectrum: k1 must be positive");
    if (kind == NoiseKind::qem_isn && !mu)
        throw ConfigError("noise spectrum: ISN needs a mu table");
}

double PhaseNoiseSpectrum::operator()(double beta) const
{
    if (kind_ == NoiseKind::classical || beta <= 0)
        return classical_noise(beta, beam_, dose_);
    double sigma = beam_.wavelength_nm() / beta;
    double mu = mu_ ? (*mu_)(beta) : 0;
    RepetitionPlan plan = plan_from_mu(k1_, mu, dose_budget_nsq(sigma, dose_));
    return noise_spectrum(kind_, beta, plan, beam_, dose_);
}

std::vector<Figure2Row> figure2_curves(std::vector<double> const& beta_grid,
                                       std::vector<double> const& lambda_over_t,
                                       BeamModel const& beam,
                                       DoseModel const& dose)
{
    if (beta_grid.empty() || lambda_over_t.empty())
        throw DomainError("figure2_curves: empty grid");
    std::vector<Figure2Row> rows;
    rows.reserve(beta_grid.size());
    double lambda = beam.wavelength_nm();
    for (double beta : beta_grid)
    {
        Figure2Row row;
        row.beta = beta;
        double sigma = lambda / beta;
        row.N_sq = dose_budget_nsq(sigma, dose);
        row.mu = mu_of_beta(beta, beam);
        for (double lt : lambda_over_t)
            row.k_opt.push_back(plan_from_mu(lt, row.mu, row.N_sq).k_opt);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace qem
