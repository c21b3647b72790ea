#pragma once

#include <functional>
#include <vector>

#include "qem/fft.hpp"
#include "qem/rng.hpp"

namespace qem
{
//---------------------------------------------------------------------------//
//! Ancilla qubit c_s |s> + c_a |a>
struct Q1State
{
    cplx c_s{1, 0};
    cplx c_a{0, 0};

    double norm() const;
    void normalize();
    //! Apply |s> <-> |a>
    void swap() { std::swap(c_s, c_a); }
    //! Ratio c_a / c_s
    cplx ratio() const { return c_a / c_s; }
};

//! Normalized |s> + i alpha |a>
Q1State q1_from_alpha(cplx alpha);

/*!
 * Probability of the up outcome in the basis (|0> +- i|1>)/sqrt2, where
 * |0>, |1> = (|s> +- |a>)/sqrt2.
 */
double prob_up(Q1State const& q1);
bool measure_updown(Q1State const& q1, Rng& rng);

//---------------------------------------------------------------------------//
/*!
 * Joint state of the M x M beam grid and the ancilla.
 *
 * Layout is [q][i][j] with q = 0 for |s>, 1 for |a>, and grid indices
 * i = n + M/2, j = m + M/2 over the centered range [-M/2, M/2).
 *
 * After split_inverse_qft the row index i instead encodes the Q2 bit
 * c = i / (M/2) and the compressed row n~ = i % (M/2) - M/4.
 */
class JointState
{
  public:
    explicit JointState(int M);

    int M() const { return M_; }
    cplx* branch(int q) { return amps_.data() + q * M_ * M_; }
    cplx const* branch(int q) const { return amps_.data() + q * M_ * M_; }
    cplx& at(int q, int n, int m);
    cplx const& at(int q, int n, int m) const;
    std::vector<cplx>& amplitudes() { return amps_; }
    std::vector<cplx> const& amplitudes() const { return amps_; }

    double norm() const;
    void renormalize();

  private:
    int M_;
    std::vector<cplx> amps_;
};

void validate_grid_size(int M);

enum class Incident
{
    s,
    a,
    superposition,  //!< (|s> + |a>)/sqrt2
};

//! Electron amplitudes on the centered grid, row index n + M/2
CplxGrid make_incident(int M, Incident which);
JointState product_state(CplxGrid const& electron, Q1State const& q1);
cplx inner(CplxGrid const& a, CplxGrid const& b);

//! Flip the ancilla on the |a> component of the electron
void entangle_cnot(JointState& state);

//---------------------------------------------------------------------------//
//! Real specimen phase sampled on the beam grid, mean removed
struct PhaseMap
{
    RealGrid theta;
    double pitch_nm = 1;

    static PhaseMap from_grid(RealGrid theta, double pitch_nm, double max_abs = 0.3);
    int M() const { return theta.rows; }
};

enum class SpecimenMode
{
    exact,  //!< exp(i theta)
    linearized,  //!< 1 + i theta, renormalized
};

void apply_specimen(JointState& state, PhaseMap const& map, SpecimenMode mode);

//! Pixelwise multiply both branches by a complex envelope, renormalize
void multiply_envelope(JointState& state, CplxGrid const& envelope);

//! Unitary centered 2-D DFT with kernel exp(+-2 pi i (nr + ms)/M)/M
void qft2d(JointState& state, bool inverse);

//! Multiply i onto the two transmitted-beam pixels (+-M/4, 0)
void phase_plate_step6(JointState& state);

enum class XiConstraint
{
    antisymmetric,  //!< Xi(M/4+a, b) = -Xi(M/4-a, -b)
    symmetric,  //!< Xi(M/4+a, b) = +Xi(M/4-a, -b)
};

//! Random far-field phases honoring M-periodicity and the pairing constraint
RealGrid make_xi_map(int M, Rng& rng, XiConstraint constraint);
void apply_xi(JointState& state, RealGrid const& xi);
RealGrid randomize_step6tilde(JointState& state, Rng& rng, XiConstraint constraint);

//! Independent inverse DFTs over the two far-field half planes
void split_inverse_qft(JointState& state);
//! Same transform on one branch in place
void split_inverse_qft(cplx* branch, int M);

//! Probability that Q2 reads 1 (the r >= 0 half plane)
double prob_q2_one(JointState const& state);
//! Sample Q2, project onto it, renormalize
int measure_q2(JointState& state, Rng& rng);

//! Electron-pixel probabilities within half plane c, row-major (n~, m)
std::vector<double> pixel_probabilities(JointState const& state, int c);
//! Unnormalized ancilla state left by outcome (c, n~, m)
Q1State conditional_q1(JointState const& state, int c, int n_tilde, int m);

struct RoundOutcome
{
    int q2 = 0;
    int n_hat = 0;
    int m_hat = 0;
    bool inelastic = false;
    Q1State q1_after;
};

//! Sample the electron pixel in half c and return the corrected ancilla
RoundOutcome measure_electron(JointState const& state, int c, Rng& rng);

//---------------------------------------------------------------------------//
struct RoundOptions
{
    SpecimenMode mode = SpecimenMode::exact;
    XiConstraint xi_constraint = XiConstraint::antisymmetric;
    //! Use the randomized far-field step on every electron, not only
    //! those flagged as inelastically scattered
    bool randomize_always = false;
};

/*!
 * One electron passage: entangle, pass the specimen (or an inelastic
 * envelope), far-field processing, measurements and correction.
 */
RoundOutcome electron_pass(Q1State const& q1,
                           PhaseMap const& map,
                           CplxGrid const* envelope,
                           RoundOptions const& opts,
                           Rng& rng);

struct RoundResult
{
    Q1State q1;
    std::vector<RoundOutcome> outcomes;
};

RoundResult run_round(PhaseMap const& map,
                      int k,
                      cplx alpha0,
                      RoundOptions const& opts,
                      Rng& rng);

//---------------------------------------------------------------------------//
struct ReferenceFilters
{
    double theta_bar = 0;
    CplxGrid low;  //!< M/2 x M, row n~ + M/4
    CplxGrid high;
};

//! Reciprocal coefficients (1/M) sum theta exp(+2 pi i (rn + ms)/M)
CplxGrid map_spectrum(RealGrid const& theta);
ReferenceFilters reference_filters(PhaseMap const& map);

/*!
 * Predicted ancilla coefficients (C_s, i C_a) for outcome (c, n~, m) with
 * the ancilla entering as |s> + i alpha |a>, after the correction step.
 */
Q1State predicted_conditional(ReferenceFilters const& f, double alpha, int n_tilde, int m);

//---------------------------------------------------------------------------//
struct ShiftedMeasurement
{
    double delta = 0;  //!< array shift as a phase, x = (n + delta/pi) sigma
    bool half_shift = false;  //!< extra half-pitch offset
    double theta_bar = 0;
};

struct AmplitudePhase
{
    double amplitude = 0;
    double phase = 0;
};

//! Least-squares amplitude and phase of the pi/sigma component
AmplitudePhase shifted_array_recovery(std::vector<ShiftedMeasurement> const& data);

//! theta_bar of a 1-D profile sampled on the shifted array
double sample_theta_bar(std::function<double(double)> const& profile,
                        int M,
                        double sigma,
                        double delta,
                        bool half_shift);

//---------------------------------------------------------------------------//
/*!
 * Exact two-region entanglement-enhanced measurement: an electron path
 * qubit entangled with the ancilla via CNOT, phase -+delta/2 on the two
 * regions, path measured in the (|0>+-|1>)/sqrt2 basis with Z correction.
 *
 * Returns p_up after k passages, summed over all path outcomes.
 */
double eeem_statevector_p_up(int k, double delta);

}  // namespace qem
