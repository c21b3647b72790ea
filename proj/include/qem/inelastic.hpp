#pragma once

#include <array>
#include <vector>

#include "qem/physics.hpp"
#include "qem/qsim.hpp"

namespace qem
{
//---------------------------------------------------------------------------//
//! Achiral dipole scattering event at an unknown position in the cell
struct DipoleEvent
{
    std::array<double, 2> r0{0, 0};  //!< nm
    std::array<double, 2> a_dir{1, 0};  //!< unit in-plane direction
    double energy_loss_eV = 20;
};

//! Uniform position in the L x L cell and uniform direction on the circle
DipoleEvent random_event(double cell_nm, double energy_loss_eV, Rng& rng);

//! Tilted dipole amplitude at far-field angle (bx, by), zero beyond theta_c
cplx far_field_dipole(double bx, double by, DipoleEvent const& event, BeamModel const& beam);

struct EnvelopeGrid
{
    CplxGrid e;  //!< centered M x M, e(n + M/2, m + M/2)
    double sigma_nm = 0;
    int lattice_points = 0;  //!< reciprocal points inside the cutoff disc
    double decay_length_nm = 0;  //!< lambda / (2 pi theta_E)

    int M() const { return e.rows; }
    //! The cell is shorter than the envelope decay length
    bool wraps() const { return M() * sigma_nm < decay_length_nm; }
};

/*!
 * Periodized envelope from the far field sampled on the reciprocal lattice.
 *
 * Lattice angles are lambda (r, s) / (M sigma); samples are folded modulo M
 * and inverse transformed, e(n, m) = sum f(r, s) exp(2 pi i (rn + ms)/M).
 */
EnvelopeGrid build_envelope(DipoleEvent const& event,
                            int M,
                            double sigma_nm,
                            BeamModel const& beam);

//! Far-field coefficients of e times the |s> and |a> illumination
struct EGrid
{
    CplxGrid E_s;
    CplxGrid E_a;
};

EGrid egrid_from_envelope(EnvelopeGrid const& env);
void apply_xi(EGrid& grid, RealGrid const& xi);

/*!
 * Largest violation of E(M/4 + a, b) = -conj(E(M/4 - a, -b)) and of the
 * same pairing around -M/4, relative to max |E|.
 */
double symmetry_residual(CplxGrid const& E);

struct SplitAmplitudes
{
    CplxGrid g_s;  //!< M x M after the split inverse transform
    CplxGrid g_a;
};

SplitAmplitudes split_egrid(EGrid const& grid);

//! max |Re g| / max |g| over both branches
double imaginary_residual(SplitAmplitudes const& g);

/*!
 * Largest |Im| of the corrected ancilla ratio over all outcomes with
 * non-negligible probability. Ratios above one in modulus are inverted.
 */
double eta_imaginary_residual(SplitAmplitudes const& g);

//! Multiply both branches by the envelope (Step 4 of a flagged electron)
void inject_event(JointState& state, EnvelopeGrid const& env);

//---------------------------------------------------------------------------//
struct ScheduledEvent
{
    int electron = 0;  //!< index within the round
    DipoleEvent event;
};

//! Poisson(k t / Lambda) events on distinct electrons, or a fixed count
std::vector<ScheduledEvent> schedule_events(int k,
                                            double t_nm,
                                            BeamModel const& beam,
                                            double cell_nm,
                                            Rng& rng,
                                            int fixed_count = -1);

struct IsnRoundResult
{
    Q1State q1;
    std::vector<RoundOutcome> outcomes;
    std::vector<double> eta;  //!< real shift of c_a/c_s per event
    std::vector<double> imag_shift;  //!< imaginary shift per event
};

/*!
 * Protocol round in which scheduled electrons scatter inelastically.
 *
 * The map pitch sets sigma. Flagged electrons use the randomized far-field
 * step; the others the phase plate unless opts.randomize_always.
 */
IsnRoundResult isn_round(PhaseMap const& map,
                         int k,
                         std::vector<ScheduledEvent> const& events,
                         cplx alpha0,
                         RoundOptions const& opts,
                         BeamModel const& beam,
                         Rng& rng);

//! Re of r when |r| <= 1, else Re of 1/r
double folded_eta(cplx ratio);

/*!
 * Single-event disturbances at beam angle beta: a zero specimen, ancilla
 * in |s>, one flagged electron per trial, outcome sampled from the pipeline.
 */
std::vector<double> sample_eta(double beta_period,
                               int M,
                               int trials,
                               BeamModel const& beam,
                               RoundOptions const& opts,
                               Rng& rng);

double rms(std::vector<double> const& v);

//! rms of a w-step walk with steps +-mu
double random_walk_accumulation(int w, double mu, int trials, Rng& rng);
//! rms of sums of w draws (with replacement) from samples
double resampled_walk_rms(std::vector<double> const& samples, int w, int trials, Rng& rng);

//! cos(2 mu sqrt(k t / Lambda))
double signal_attenuation(double k, double t_nm, double Lambda_nm, double mu);
//! k cos^2(2 mu sqrt(k t / Lambda))
double isn_snr_figure(double k, double t_nm, double Lambda_nm, double mu);

}  // namespace qem
