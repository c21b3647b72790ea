#include <cmath>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "qem/errors.hpp"
#include "qem/isn_analysis.hpp"

using namespace qem;

namespace
{
// sqrt(A/S) from the x-slice oracle, tolerance 1e-13 per stripe
constexpr double golden_mu_2mrad = 0.6018364658;
constexpr double golden_mu_4mrad = 0.5024815201;
constexpr double golden_mu_8mrad = 0.4017270237;

StripeGeometry geometry(double beta)
{
    BeamModel beam;
    StripeGeometry g;
    g.beta_period = beta;
    g.cutoff = bethe_ridge_angle(beam);
    g.theta_E = theta_E(beam);
    return g;
}
}  // namespace

TEST_CASE("stripe membership")
{
    StripeGeometry g = geometry(4e-3);
    CHECK_FALSE(g.in_set_A(0));
    CHECK(g.in_set_A(2e-3));
    CHECK(g.in_set_A(-2e-3));
    CHECK_FALSE(g.in_set_A(4e-3));
    CHECK(g.in_set_A(1.01e-3));
    CHECK_FALSE(g.in_set_A(0.99e-3));
}

TEST_CASE("dipole profile and disc integral")
{
    double tE = 4e-5, tc = 7e-3;
    CHECK(dipole_profile(0, 0, tE, tc) == doctest::Approx(1 / (tE * tE)));
    CHECK(dipole_profile(tc * 1.01, 0, tE, tc) == 0);
    double closed = oracle::pi * std::log(1 + tc * tc / (tE * tE));
    CHECK(dipole_disc_integral(tE, tc) == doctest::Approx(closed).epsilon(1e-14));
}

TEST_CASE("stripe integrals against the slice oracle")
{
    for (double beta : {2e-3, 4e-3, 8e-3})
    {
        StripeGeometry g = geometry(beta);
        StripeIntegrals s = stripe_integrals(g);
        oracle::StripeSums ref = oracle::dipole_stripes(beta, g.theta_E, g.cutoff);
        CHECK(s.set_A == doctest::Approx(ref.A).epsilon(1e-4));
        CHECK(s.set_S == doctest::Approx(ref.S).epsilon(1e-4));
        CHECK(s.set_A + s.set_S == doctest::Approx(s.full_disc).epsilon(1e-6));
    }
}

TEST_CASE("mu golden values")
{
    BeamModel beam;
    CHECK(mu_of_beta(2e-3, beam) == doctest::Approx(golden_mu_2mrad).epsilon(1e-4));
    CHECK(mu_of_beta(4e-3, beam) == doctest::Approx(golden_mu_4mrad).epsilon(1e-4));
    CHECK(mu_of_beta(8e-3, beam) == doctest::Approx(golden_mu_8mrad).epsilon(1e-4));
    // Finer quadrature converges toward the oracle
    CHECK(std::abs(mu_of_beta(4e-3, beam, 4096) - golden_mu_4mrad)
          < std::abs(mu_of_beta(4e-3, beam, 512) - golden_mu_4mrad));
    CHECK_THROWS_AS(mu_of_beta(0, beam), DomainError);
}

TEST_CASE("mu table interpolates and clamps")
{
    BeamModel beam;
    MuTable table(beam, 1e-3, 16e-3, 80, 1024);
    CHECK(table(4e-3) == doctest::Approx(golden_mu_4mrad).epsilon(2e-3));
    CHECK(table(1e-5) == table(1e-3));
    CHECK(table(1.0) == doctest::Approx(table(16e-3)).epsilon(1e-12));
    CHECK_THROWS_AS(MuTable(beam, 2e-3, 1e-3), DomainError);
}

TEST_CASE("optimal repetition root")
{
    XiSolution xs = solve_xi();
    double ref = oracle::bisect([](double x) { return x * std::sin(x) - std::cos(x); }, 0.5, 1.5);
    CHECK(xs.xi == doctest::Approx(ref).epsilon(1e-13));
    CHECK(xs.xi == doctest::Approx(0.86).epsilon(0.005 / 0.86));
    CHECK(1 / (xs.cos_xi * xs.cos_xi) == doctest::Approx(2.35).epsilon(0.05 / 2.35));
    CHECK(std::abs(xs.residual) < 1e-10);
}

TEST_CASE("repetition plan")
{
    XiSolution xs = solve_xi();
    RepetitionPlan p = plan_from_mu(10, 0.5, 1e4);
    CHECK(p.k2 == doctest::Approx(xs.xi_sq * 10 / (4 * 0.25)));
    CHECK(p.k_opt == doctest::Approx(std::max(p.k1, p.k2)));
    // Budget clamps
    RepetitionPlan tight = plan_from_mu(10, 0.1, 3);
    CHECK(tight.k1_tilde == doctest::Approx(3));
    CHECK(tight.k2_tilde == doctest::Approx(3));
    RepetitionPlan tiny = plan_from_mu(10, 0.1, 1);
    CHECK(tiny.k1_tilde == doctest::Approx(std::exp(1.0)));
    CHECK(tiny.k2_tilde == doctest::Approx(1 / (xs.cos_xi * xs.cos_xi)));
    CHECK(snr_improvement_no_isn(std::exp(1.0)) == doctest::Approx(1));
}

TEST_CASE("noise spectra")
{
    BeamModel beam;
    DoseModel dose;
    double c = classical_noise(1e-3, beam, dose);
    CHECK(1 / c == doctest::Approx(186).epsilon(0.01));
    // Classical noise is 1/sqrt(N_sq) at sigma = lambda / beta
    for (double beta : {0.5e-3, 2e-3, 9e-3})
    {
        double nsq = dose_budget_nsq(beam.wavelength_nm() / beta, dose);
        CHECK(classical_noise(beta, beam, dose) == doctest::Approx(1 / std::sqrt(nsq)).epsilon(1e-12));
    }
    CHECK(classical_noise(0, beam, dose) == 0);

    RepetitionPlan p = plan_from_mu(10, 0.5, 1e6);
    CHECK(noise_spectrum(NoiseKind::qem, 1e-3, p, beam, dose)
          == doctest::Approx(c * std::sqrt(std::exp(1.0) / 10)));
    CHECK(noise_spectrum(NoiseKind::qem_isn, 1e-3, p, beam, dose)
          == doctest::Approx(c / (std::sqrt(p.k2_tilde) * std::cos(p.xi))));

    MuTable table(beam, 1e-4, 4e-2, 40, 256);
    PhaseNoiseSpectrum isn(NoiseKind::qem_isn, 10, beam, dose, &table);
    PhaseNoiseSpectrum cl(NoiseKind::classical, 1, beam, dose, nullptr);
    CHECK(cl(1e-3) == doctest::Approx(c));
    CHECK(isn(3e-3) < cl(3e-3));
    CHECK_THROWS_AS(PhaseNoiseSpectrum(NoiseKind::qem_isn, 10, beam, dose, nullptr), ConfigError);
    CHECK(noise_kind_from_string("qem_isn") == NoiseKind::qem_isn);
    CHECK_THROWS_AS(noise_kind_from_string("bogus"), ConfigError);
}

TEST_CASE("figure 2 curves")
{
    BeamModel beam;
    DoseModel dose;
    std::vector<double> betas;
    for (int i = 1; i <= 16; ++i)
        betas.push_back(i * 1e-3);
    auto rows = figure2_curves(betas, {10, 5}, beam, dose);
    REQUIRE(rows.size() == betas.size());
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        CHECK(rows[i].k_opt[0] >= rows[i - 1].k_opt[0]);
        CHECK(rows[i].N_sq < rows[i - 1].N_sq);
        CHECK(rows[i].mu < rows[i - 1].mu);
    }
    CHECK(rows[3].mu == doctest::Approx(golden_mu_4mrad).epsilon(1e-4));
}
