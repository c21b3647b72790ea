#include <cmath>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "qem/errors.hpp"
#include "qem/physics.hpp"
#include "qem/roots.hpp"

using namespace qem;

TEST_CASE("wavelength at 300 keV")
{
    BeamModel beam;
    CHECK(beam.wavelength_nm() == doctest::Approx(oracle::wavelength_nm(300e3)).epsilon(1e-14));
    // Textbook value 1.969 pm
    CHECK(beam.wavelength_nm() == doctest::Approx(1.9687e-3).epsilon(1e-4));
    CHECK(beam.gamma() == doctest::Approx(1.587086).epsilon(1e-6));
}

TEST_CASE("inelastic angles")
{
    BeamModel beam;
    double g = 1 + 300e3 / 510998.95;
    double b2 = 1 - 1 / (g * g);
    double tE = 20 / (g * 510998.95 * b2);
    CHECK(theta_E(beam) == doctest::Approx(tE).epsilon(1e-14));
    CHECK(theta_E(beam) == doctest::Approx(41e-6).epsilon(1.0 / 41));
    CHECK(bethe_ridge_angle(beam) == doctest::Approx(7.2e-3).epsilon(0.1 / 7.2));
    // gamma m c^2 beta^2 is below 2 E_K at 300 keV
    CHECK(theta_E_nonrelativistic(beam) == doctest::Approx(20 / 600e3));
    CHECK(theta_E_nonrelativistic(beam) < theta_E(beam));
}

TEST_CASE("fluence factor root")
{
    ZetaSolution z = solve_zeta();
    double ref = oracle::bisect([](double b) { return std::exp(b) - 2 * b - 1; }, 0.5, 3.0);
    CHECK(z.beta_opt == doctest::Approx(ref).epsilon(1e-13));
    CHECK(z.zeta == doctest::Approx(ref / (2 * oracle::pi * oracle::pi)).epsilon(1e-13));
    CHECK(z.beta_opt >= 1.255);
    CHECK(z.beta_opt <= 1.265);
    CHECK(std::abs(z.residual) < 1e-12);
}

TEST_CASE("estimator variance is minimal at the fluence root")
{
    double best = 0, best_v = 1e300;
    for (int i = 1; i < 40000; ++i)
    {
        double b = i * 1e-4;
        double v = estimator_variance(b, 1, 1, 1);
        if (v < best_v)
        {
            best_v = v;
            best = b;
        }
    }
    CHECK(best == doctest::Approx(solve_zeta().beta_opt).epsilon(2e-4));
    // Scales as 1/(k A F0)
    CHECK(estimator_variance(1.3, 4, 2, 5) == doctest::Approx(estimator_variance(1.3, 1, 1, 1) / 40));
}

TEST_CASE("damage model")
{
    DoseModel d;
    double sigma = 0.5;
    double F0 = amplitude_decay_F0(sigma, d);
    // Amplitude at q = 2 pi / sigma drops by 1/e, i.e. exp(-RFq^2/8pi^2) = e^-2
    double q = 2 * oracle::pi / sigma;
    CHECK(damage_attenuation(q, F0, d) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    DamageState s = damage_state(1000, d);
    CHECK(s.B_factor_nm2 == doctest::Approx(0.7));
    CHECK(s.std_displacement_nm == doctest::Approx(std::sqrt(0.7 / (8 * oracle::pi * oracle::pi))));
    CHECK_THROWS_AS(damage_state(-1, d), DomainError);
    CHECK_THROWS_AS(amplitude_decay_F0(0, d), DomainError);
}

TEST_CASE("electron budget per reciprocal square")
{
    DoseModel d;
    double nsq = dose_budget_nsq(1.0, d);
    CHECK(nsq == doctest::Approx(2.3e3).epsilon(0.05));
    CHECK(dose_budget_nsq(2.0, d) == doctest::Approx(16 * nsq));
    // The ring construction must agree with the closed form for any area
    for (double area : {10.0, 100.0, 1e4})
        CHECK(dose_budget_band(1.0, area, d) == doctest::Approx(nsq).epsilon(1e-12));
    CHECK_THROWS_AS(dose_budget_nsq(-1, d), DomainError);
}

TEST_CASE("root finder rejects a bracket without sign change")
{
    auto f = [](double x) { return x * x + 1; };
    auto df = [](double x) { return 2 * x; };
    CHECK_THROWS_AS(bisect_newton(f, df, -1, 1), NumericError);
    RootResult r = bisect_newton([](double x) { return std::cos(x) - x; },
                                 [](double x) { return -std::sin(x) - 1; }, 0, 1);
    CHECK(r.root == doctest::Approx(0.7390851332151607).epsilon(1e-14));
}

TEST_CASE("model validation")
{
    BeamModel beam;
    beam.kinetic_energy_eV = 0;
    CHECK_THROWS_AS(validate(beam), ConfigError);
    DoseModel d;
    d.zeta = -1;
    CHECK_THROWS_AS(validate(d), ConfigError);
}
