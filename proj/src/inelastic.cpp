#include "qem/inelastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qem/errors.hpp"

namespace qem
{
using constants::pi;

namespace
{
int wrap_index(int n, int M)
{
    return ((n % M) + M) % M;
}

// Centered storage index of (possibly out-of-range) signed index n
int centered(int n, int M)
{
    return wrap_index(n + M / 2, M);
}

CplxGrid shifted_transform(CplxGrid const& e, int quarter_sign)
{
    int const M = e.rows;
    CplxGrid out(M, M);
    for (int i = 0; i < M; ++i)
    {
        int r = i - M / 2;
        cplx tilt = std::polar(1.0, quarter_sign * pi * r / 2);
        for (int j = 0; j < M; ++j)
            out(i, j) = e(i, j) * tilt;
    }
    fft::centered_dft2d(out.data.data(), M, M, fft::Sign::backward);
    for (auto& v : out.data)
        v /= M;
    return out;
}

}  // namespace

//---------------------------------------------------------------------------//
DipoleEvent random_event(double cell_nm, double energy_loss_eV, Rng& rng)
{
    DipoleEvent ev;
    ev.r0 = {rng.uniform(0, cell_nm), rng.uniform(0, cell_nm)};
    double phi = rng.uniform(0, 2 * pi);
    ev.a_dir = {std::cos(phi), std::sin(phi)};
    ev.energy_loss_eV = energy_loss_eV;
    return ev;
}

cplx far_field_dipole(double bx, double by, DipoleEvent const& event, BeamModel const& beam)
{
    BeamModel b = beam;
    b.energy_loss_eV = event.energy_loss_eV;
    double const tE = theta_E(b);
    double const tc = bethe_ridge_angle(b);
    double theta = std::hypot(bx, by);
    if (theta >= tc || theta == 0)
        return 0;
    double proj = (bx * event.a_dir[0] + by * event.a_dir[1]) / theta;
    double k = 2 * pi / b.wavelength_nm();
    double phase = -k * (bx * event.r0[0] + by * event.r0[1]);
    return std::polar(proj / std::sqrt(theta * theta + tE * tE), phase);
}

EnvelopeGrid build_envelope(DipoleEvent const& event,
                            int M,
                            double sigma_nm,
                            BeamModel const& beam)
{
    validate_grid_size(M);
    if (!(sigma_nm > 0))
        throw ConfigError("build_envelope: sigma must be positive");
    BeamModel b = beam;
    b.energy_loss_eV = event.energy_loss_eV;
    double const lambda = b.wavelength_nm();
    double const L = M * sigma_nm;
    double const tc = bethe_ridge_angle(b);
    int const R = static_cast<int>(std::ceil(tc * L / lambda)) + 1;

    EnvelopeGrid env;
    env.e = CplxGrid(M, M);
    env.sigma_nm = sigma_nm;
    env.decay_length_nm = lambda / (2 * pi * theta_E(b));
    for (int r = -R; r <= R; ++r)
    {
        for (int s = -R; s <= R; ++s)
        {
            cplx v = far_field_dipole(lambda * r / L, lambda * s / L, event, b);
            if (v == cplx{})
                continue;
            env.e(centered(r, M), centered(s, M)) += v;
            ++env.lattice_points;
        }
    }
    fft::centered_dft2d(env.e.data.data(), M, M, fft::Sign::backward);
    return env;
}

EGrid egrid_from_envelope(EnvelopeGrid const& env)
{
    return {shifted_transform(env.e, +1), shifted_transform(env.e, -1)};
}

void apply_xi(EGrid& grid, RealGrid const& xi)
{
    for (CplxGrid* g : {&grid.E_s, &grid.E_a})
        for (std::size_t k = 0; k < g->size(); ++k)
            g->data[k] *= std::polar(1.0, xi.data[k]);
}

double symmetry_residual(CplxGrid const& E)
{
    int const M = E.rows;
    double scale = 0;
    for (auto const& v : E.data)
        scale = std::max(scale, std::abs(v));
    if (scale == 0)
        return 0;
    double worst = 0;
    for (int center : {M / 4, -M / 4})
    {
        for (int a = -M / 2; a < M / 2; ++a)
        {
            for (int b = -M / 2; b < M / 2; ++b)
            {
                cplx lhs = E(centered(center + a, M), centered(b, M));
                cplx rhs = E(centered(center - a, M), centered(-b, M));
                worst = std::max(worst, std::abs(lhs + std::conj(rhs)));
            }
        }
    }
    return worst / scale;
}

SplitAmplitudes split_egrid(EGrid const& grid)
{
    SplitAmplitudes g{grid.E_s, grid.E_a};
    split_inverse_qft(g.g_s.data.data(), g.g_s.rows);
    split_inverse_qft(g.g_a.data.data(), g.g_a.rows);
    return g;
}

double imaginary_residual(SplitAmplitudes const& g)
{
    double scale = 0, worst = 0;
    for (CplxGrid const* grid : {&g.g_s, &g.g_a})
    {
        for (auto const& v : grid->data)
        {
            scale = std::max(scale, std::abs(v));
            worst = std::max(worst, std::abs(v.real()));
        }
    }
    return scale > 0 ? worst / scale : 0;
}

double eta_imaginary_residual(SplitAmplitudes const& g)
{
    int const M = g.g_s.rows;
    std::size_t const n = g.g_s.size();
    double pmax = 0;
    for (std::size_t k = 0; k < n; ++k)
        pmax = std::max(pmax, std::norm(g.g_s.data[k]) + std::norm(g.g_a.data[k]));
    double worst = 0;
    for (std::size_t k = 0; k < n; ++k)
    {
        cplx hs = g.g_s.data[k], ha = g.g_a.data[k];
        if (std::norm(hs) + std::norm(ha) <= 1e-12 * pmax)
            continue;
        // Upper half plane is corrected by the ancilla swap
        if (static_cast<int>(k) >= M * M / 2)
            std::swap(hs, ha);
        cplx ratio = std::abs(ha) <= std::abs(hs) ? ha / hs : hs / ha;
        worst = std::max(worst, std::abs(ratio.imag()));
    }
    return worst;
}

void inject_event(JointState& state, EnvelopeGrid const& env)
{
    multiply_envelope(state, env.e);
}

//---------------------------------------------------------------------------//
std::vector<ScheduledEvent> schedule_events(int k,
                                            double t_nm,
                                            BeamModel const& beam,
                                            double cell_nm,
                                            Rng& rng,
                                            int fixed_count)
{
    if (k < 1)
        throw ConfigError("schedule_events: k must be >= 1");
    int count = fixed_count;
    if (count < 0)
    {
        if (!(t_nm > 0))
            throw ConfigError("schedule_events: thickness must be positive");
        std::poisson_distribution<int> pois(k * t_nm / beam.mean_free_path_nm);
        count = pois(rng.engine());
    }
    count = std::min(count, k);

    // Partial Fisher-Yates over electron indices
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < count; ++i)
    {
        int j = i + static_cast<int>(rng.uniform() * (k - i));
        std::swap(idx[i], idx[std::min(j, k - 1)]);
    }
    std::vector<ScheduledEvent> events(count);
    for (int i = 0; i < count; ++i)
    {
        events[i].electron = idx[i];
        events[i].event = random_event(cell_nm, beam.energy_loss_eV, rng);
    }
    std::sort(events.begin(), events.end(), [](auto const& a, auto const& b) {
        return a.electron < b.electron;
    });
    return events;
}

IsnRoundResult isn_round(PhaseMap const& map,
                         int k,
                         std::vector<ScheduledEvent> const& events,
                         cplx alpha0,
                         RoundOptions const& opts,
                         BeamModel const& beam,
                         Rng& rng)
{
    if (k < 1)
        throw ConfigError("isn_round: k must be >= 1");
    std::vector<ScheduledEvent const*> at(k, nullptr);
    for (auto const& ev : events)
    {
        if (ev.electron < 0 || ev.electron >= k)
            throw ConfigError("isn_round: event scheduled outside the round");
        at[ev.electron] = &ev;
    }

    IsnRoundResult res;
    res.q1 = q1_from_alpha(alpha0);
    res.outcomes.reserve(k);
    for (int e = 0; e < k; ++e)
    {
        RoundOutcome out;
        if (at[e])
        {
            EnvelopeGrid env = build_envelope(at[e]->event, map.M(), map.pitch_nm, beam);
            out = electron_pass(res.q1, map, &env.e, opts, rng);
            cplx before = res.q1.ratio();
            cplx after = out.q1_after.ratio();
            res.eta.push_back(after.real() - before.real());
            res.imag_shift.push_back(after.imag() - before.imag());
        }
        else
        {
            out = electron_pass(res.q1, map, nullptr, opts, rng);
        }
        res.q1 = out.q1_after;
        res.outcomes.push_back(out);
    }
    return res;
}

double folded_eta(cplx ratio)
{
    return std::abs(ratio) <= 1 ? ratio.real() : (1.0 / ratio).real();
}

std::vector<double> sample_eta(double beta_period,
                               int M,
                               int trials,
                               BeamModel const& beam,
                               RoundOptions const& opts,
                               Rng& rng)
{
    if (!(beta_period > 0))
        throw ConfigError("sample_eta: beta must be positive");
    double const sigma = beam.wavelength_nm() / beta_period;
    PhaseMap blank = PhaseMap::from_grid(RealGrid(M, M, 0.0), sigma);
    std::vector<double> eta(trials);
    for (int t = 0; t < trials; ++t)
    {
        Rng child = rng.split(static_cast<std::uint64_t>(t));
        DipoleEvent ev = random_event(M * sigma, beam.energy_loss_eV, child);
        EnvelopeGrid env = build_envelope(ev, M, sigma, beam);
        RoundOutcome out = electron_pass(Q1State{}, blank, &env.e, opts, child);
        eta[t] = folded_eta(out.q1_after.c_a / out.q1_after.c_s);
    }
    return eta;
}

double rms(std::vector<double> const& v)
{
    if (v.empty())
        return 0;
    double s = 0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s / v.size());
}

double random_walk_accumulation(int w, double mu, int trials, Rng& rng)
{
    if (w < 0 || trials < 1)
        throw ConfigError("random_walk_accumulation: need w >= 0 and trials >= 1");
    double s2 = 0;
    for (int t = 0; t < trials; ++t)
    {
        double sum = 0;
        for (int i = 0; i < w; ++i)
            sum += (rng.next_u64() >> 63) ? mu : -mu;
        s2 += sum * sum;
    }
    return std::sqrt(s2 / trials);
}

double resampled_walk_rms(std::vector<double> const& samples, int w, int trials, Rng& rng)
{
    if (samples.empty() || w < 0 || trials < 1)
        throw ConfigError("resampled_walk_rms: bad arguments");
    double s2 = 0;
    std::size_t const n = samples.size();
    for (int t = 0; t < trials; ++t)
    {
        double sum = 0;
        for (int i = 0; i < w; ++i)
            sum += samples[std::min(n - 1, static_cast<std::size_t>(rng.uniform() * n))];
        s2 += sum * sum;
    }
    return std::sqrt(s2 / trials);
}

double signal_attenuation(double k, double t_nm, double Lambda_nm, double mu)
{
    if (k < 0 || !(t_nm > 0) || !(Lambda_nm > 0) || mu < 0)
        throw DomainError("signal_attenuation: inputs must be positive");
    return std::cos(2 * mu * std::sqrt(k * t_nm / Lambda_nm));
}

double isn_snr_figure(double k, double t_nm, double Lambda_nm, double mu)
{
    double c = signal_attenuation(k, t_nm, Lambda_nm, mu);
    return k * c * c;
}

}  // namespace qem
