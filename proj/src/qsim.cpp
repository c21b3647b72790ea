#include "qem/qsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qem/errors.hpp"
#include "qem/physics.hpp"

namespace qem
{
using constants::pi;

namespace
{
constexpr cplx I{0, 1};

int wrap_centered(int n, int M)
{
    int r = ((n + M / 2) % M + M) % M;
    return r - M / 2;
}

}  // namespace

//---------------------------------------------------------------------------//
double Q1State::norm() const
{
    return std::sqrt(std::norm(c_s) + std::norm(c_a));
}

void Q1State::normalize()
{
    double n = this->norm();
    if (!(n > 0))
        throw NumericError("cannot normalize a zero ancilla state");
    c_s /= n;
    c_a /= n;
}

Q1State q1_from_alpha(cplx alpha)
{
    Q1State q{1.0, I * alpha};
    q.normalize();
    return q;
}

double prob_up(Q1State const& q1)
{
    // <up| = (e^{-i pi/4} <s| + e^{+i pi/4} <a|)/sqrt2
    cplx amp = (std::polar(1.0, -pi / 4) * q1.c_s + std::polar(1.0, pi / 4) * q1.c_a)
               / std::sqrt(2.0);
    double total = std::norm(q1.c_s) + std::norm(q1.c_a);
    return std::norm(amp) / total;
}

bool measure_updown(Q1State const& q1, Rng& rng)
{
    return rng.uniform() < prob_up(q1);
}

//---------------------------------------------------------------------------//
void validate_grid_size(int M)
{
    if (M < 4 || (M & (M - 1)) != 0)
        throw ConfigError("grid size M must be a power of two >= 4, got "
                          + std::to_string(M));
}

JointState::JointState(int M) : M_(M)
{
    validate_grid_size(M);
    amps_.assign(2 * static_cast<std::size_t>(M) * M, cplx{});
}

cplx& JointState::at(int q, int n, int m)
{
    return amps_[(q * M_ + n + M_ / 2) * M_ + m + M_ / 2];
}

cplx const& JointState::at(int q, int n, int m) const
{
    return amps_[(q * M_ + n + M_ / 2) * M_ + m + M_ / 2];
}

double JointState::norm() const
{
    double s = 0;
    for (auto const& a : amps_)
        s += std::norm(a);
    return std::sqrt(s);
}

void JointState::renormalize()
{
    double n = this->norm();
    if (!(n > 0))
        throw NumericError("joint state has zero norm");
    for (auto& a : amps_)
        a /= n;
}

CplxGrid make_incident(int M, Incident which)
{
    validate_grid_size(M);
    CplxGrid g(M, M);
    for (int i = 0; i < M; ++i)
    {
        int n = i - M / 2;
        cplx s = std::polar(1.0 / M, pi * n / 2);
        cplx a = std::conj(s);
        cplx v = which == Incident::s   ? s
                 : which == Incident::a ? a
                                        : (s + a) / std::sqrt(2.0);
        for (int j = 0; j < M; ++j)
            g(i, j) = v;
    }
    return g;
}

JointState product_state(CplxGrid const& electron, Q1State const& q1)
{
    JointState st(electron.rows);
    cplx* b0 = st.branch(0);
    cplx* b1 = st.branch(1);
    for (std::size_t k = 0; k < electron.size(); ++k)
    {
        b0[k] = electron.data[k] * q1.c_s;
        b1[k] = electron.data[k] * q1.c_a;
    }
    return st;
}

cplx inner(CplxGrid const& a, CplxGrid const& b)
{
    cplx s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += std::conj(a.data[k]) * b.data[k];
    return s;
}

void entangle_cnot(JointState& state)
{
    int const M = state.M();
    CplxGrid a = make_incident(M, Incident::a);
    std::size_t const n = a.size();
    cplx* b0 = state.branch(0);
    cplx* b1 = state.branch(1);
    cplx c0 = 0, c1 = 0;
    for (std::size_t k = 0; k < n; ++k)
    {
        c0 += std::conj(a.data[k]) * b0[k];
        c1 += std::conj(a.data[k]) * b1[k];
    }
    // Exchange the |a> components of the two ancilla branches
    for (std::size_t k = 0; k < n; ++k)
    {
        b0[k] += (c1 - c0) * a.data[k];
        b1[k] += (c0 - c1) * a.data[k];
    }
}

//---------------------------------------------------------------------------//
PhaseMap PhaseMap::from_grid(RealGrid theta, double pitch_nm, double max_abs)
{
    validate_grid_size(theta.rows);
    if (theta.rows != theta.cols)
        throw ConfigError("phase map must be square");
    if (!(pitch_nm > 0))
        throw ConfigError("phase map pitch must be positive");
    double mean = 0;
    for (double v : theta.data)
        mean += v;
    mean /= theta.size();
    double worst = 0;
    for (double& v : theta.data)
    {
        v -= mean;
        worst = std::max(worst, std::abs(v));
    }
    if (worst >= max_abs)
        throw ConfigError("phase map exceeds the weak-phase guard");
    PhaseMap pm;
    pm.theta = std::move(theta);
    pm.pitch_nm = pitch_nm;
    return pm;
}

void apply_specimen(JointState& state, PhaseMap const& map, SpecimenMode mode)
{
    int const M = state.M();
    if (map.M() != M)
        throw ConfigError("phase map size does not match the beam grid");
    std::size_t const n = static_cast<std::size_t>(M) * M;
    for (int q = 0; q < 2; ++q)
    {
        cplx* b = state.branch(q);
        for (std::size_t k = 0; k < n; ++k)
        {
            double t = map.theta.data[k];
            b[k] *= mode == SpecimenMode::exact ? std::polar(1.0, t) : cplx{1, t};
        }
    }
    if (mode == SpecimenMode::linearized)
        state.renormalize();
}

void multiply_envelope(JointState& state, CplxGrid const& envelope)
{
    int const M = state.M();
    if (envelope.rows != M || envelope.cols != M)
        throw ConfigError("envelope size does not match the beam grid");
    for (int q = 0; q < 2; ++q)
    {
        cplx* b = state.branch(q);
        for (int k = 0; k < M * M; ++k)
            b[k] *= envelope.data[k];
    }
    if (!(state.norm() > 0))
        throw NumericError("inelastic event rejected: envelope vanishes on the beam grid");
    state.renormalize();
}

void qft2d(JointState& state, bool inverse)
{
    int const M = state.M();
    auto sign = inverse ? fft::Sign::forward : fft::Sign::backward;
    for (int q = 0; q < 2; ++q)
    {
        cplx* b = state.branch(q);
        fft::centered_dft2d(b, M, M, sign);
        for (int k = 0; k < M * M; ++k)
            b[k] /= M;
    }
}

void phase_plate_step6(JointState& state)
{
    int const M = state.M();
    for (int q = 0; q < 2; ++q)
    {
        state.at(q, -M / 4, 0) *= I;
        state.at(q, M / 4, 0) *= I;
    }
}

RealGrid make_xi_map(int M, Rng& rng, XiConstraint constraint)
{
    validate_grid_size(M);
    RealGrid xi(M, M, 0.0);
    std::vector<char> set(static_cast<std::size_t>(M) * M, 0);
    for (int i = 0; i < M; ++i)
    {
        for (int j = 0; j < M; ++j)
        {
            if (set[i * M + j])
                continue;
            int n = i - M / 2;
            int m = j - M / 2;
            // Partner of (M/4 + a, b) is (M/4 - a, -b)
            int pi_ = wrap_centered(M / 2 - n, M) + M / 2;
            int pj = wrap_centered(-m, M) + M / 2;
            bool fixed = pi_ == i && pj == j;
            double v = 0;
            if (!fixed || constraint == XiConstraint::symmetric)
                v = rng.uniform(0.0, 2 * pi);
            xi(i, j) = v;
            set[i * M + j] = 1;
            if (!fixed)
            {
                double partner = constraint == XiConstraint::antisymmetric
                                     ? (v == 0 ? 0.0 : 2 * pi - v)
                                     : v;
                xi(pi_, pj) = partner;
                set[pi_ * M + pj] = 1;
            }
        }
    }
    return xi;
}

void apply_xi(JointState& state, RealGrid const& xi)
{
    int const M = state.M();
    for (int q = 0; q < 2; ++q)
    {
        cplx* b = state.branch(q);
        for (int k = 0; k < M * M; ++k)
            b[k] *= std::polar(1.0, xi.data[k]);
    }
}

RealGrid randomize_step6tilde(JointState& state, Rng& rng, XiConstraint constraint)
{
    RealGrid xi = make_xi_map(state.M(), rng, constraint);
    apply_xi(state, xi);
    return xi;
}

void split_inverse_qft(cplx* branch, int M)
{
    double const scale = std::sqrt(2.0) / M;
    int const half = M / 2;
    for (int c = 0; c < 2; ++c)
    {
        cplx* sub = branch + c * half * M;
        // Rows of each half are centered on +-M/4, i.e. offset M/4 within
        // the half, which is exactly the centered layout of an M/2 grid.
        fft::centered_dft2d(sub, half, M, fft::Sign::forward);
        for (int k = 0; k < half * M; ++k)
            sub[k] *= scale;
    }
}

void split_inverse_qft(JointState& state)
{
    for (int q = 0; q < 2; ++q)
        split_inverse_qft(state.branch(q), state.M());
}

double prob_q2_one(JointState const& state)
{
    int const M = state.M();
    int const half = M * M / 2;
    double lower = 0, upper = 0;
    for (int q = 0; q < 2; ++q)
    {
        cplx const* b = state.branch(q);
        for (int k = 0; k < half; ++k)
            lower += std::norm(b[k]);
        for (int k = half; k < M * M; ++k)
            upper += std::norm(b[k]);
    }
    return upper / (lower + upper);
}

int measure_q2(JointState& state, Rng& rng)
{
    int c = rng.uniform() < prob_q2_one(state) ? 1 : 0;
    int const M = state.M();
    int const half = M * M / 2;
    for (int q = 0; q < 2; ++q)
    {
        cplx* b = state.branch(q) + (c == 1 ? 0 : half);
        std::fill(b, b + half, cplx{});
    }
    state.renormalize();
    return c;
}

std::vector<double> pixel_probabilities(JointState const& state, int c)
{
    int const M = state.M();
    int const half = M * M / 2;
    std::vector<double> p(half, 0.0);
    double total = 0;
    for (int q = 0; q < 2; ++q)
    {
        cplx const* b = state.branch(q) + c * half;
        for (int k = 0; k < half; ++k)
            p[k] += std::norm(b[k]);
    }
    for (double v : p)
        total += v;
    if (!(total > 0))
        throw NumericError("requested half plane has zero probability");
    for (double& v : p)
        v /= total;
    return p;
}

Q1State conditional_q1(JointState const& state, int c, int n_tilde, int m)
{
    int const M = state.M();
    int row = c * (M / 2) + n_tilde + M / 4;
    int k = row * M + m + M / 2;
    return Q1State{state.branch(0)[k], state.branch(1)[k]};
}

RoundOutcome measure_electron(JointState const& state, int c, Rng& rng)
{
    int const M = state.M();
    std::vector<double> p = pixel_probabilities(state, c);
    std::size_t k = rng.discrete(p.begin(), p.end());
    RoundOutcome out;
    out.q2 = c;
    out.n_hat = static_cast<int>(k) / M - M / 4;
    out.m_hat = static_cast<int>(k) % M - M / 2;
    out.q1_after = conditional_q1(state, c, out.n_hat, out.m_hat);
    out.q1_after.normalize();
    if (c == 1)
        out.q1_after.swap();
    return out;
}

//---------------------------------------------------------------------------//
RoundOutcome electron_pass(Q1State const& q1,
                           PhaseMap const& map,
                           CplxGrid const* envelope,
                           RoundOptions const& opts,
                           Rng& rng)
{
    int const M = map.M();
    JointState st = product_state(make_incident(M, Incident::superposition), q1);
    entangle_cnot(st);
    if (envelope)
    {
        multiply_envelope(st, *envelope);
    }
    else
    {
        apply_specimen(st, map, opts.mode);
    }
    qft2d(st, false);
    if (envelope || opts.randomize_always)
        randomize_step6tilde(st, rng, opts.xi_constraint);
    else
        phase_plate_step6(st);
    split_inverse_qft(st);
    int c = measure_q2(st, rng);
    RoundOutcome out = measure_electron(st, c, rng);
    out.inelastic = envelope != nullptr;
    return out;
}

RoundResult run_round(PhaseMap const& map,
                      int k,
                      cplx alpha0,
                      RoundOptions const& opts,
                      Rng& rng)
{
    if (k < 1)
        throw ConfigError("repetition number k must be >= 1");
    RoundResult res;
    res.q1 = q1_from_alpha(alpha0);
    res.outcomes.reserve(k);
    for (int e = 0; e < k; ++e)
    {
        RoundOutcome out = electron_pass(res.q1, map, nullptr, opts, rng);
        res.q1 = out.q1_after;
        res.outcomes.push_back(out);
    }
    return res;
}

//---------------------------------------------------------------------------//
CplxGrid map_spectrum(RealGrid const& theta)
{
    int const M = theta.rows;
    CplxGrid g(M, M);
    for (std::size_t k = 0; k < g.size(); ++k)
        g.data[k] = theta.data[k];
    fft::centered_dft2d(g.data.data(), M, M, fft::Sign::backward);
    for (auto& v : g.data)
        v /= M;
    return g;
}

ReferenceFilters reference_filters(PhaseMap const& map)
{
    int const M = map.M();
    int const half = M / 2;
    CplxGrid spec = map_spectrum(map.theta);
    auto spec_at = [&](int r, int s) -> cplx {
        return spec(wrap_centered(r, M) + M / 2, wrap_centered(s, M) + M / 2);
    };

    ReferenceFilters f;
    f.theta_bar = spec_at(-M / 2, 0).real() / M;
    f.low = CplxGrid(half, M);
    f.high = CplxGrid(half, M);
    for (int rr = -M / 4; rr < M / 4; ++rr)
    {
        for (int s = -M / 2; s < M / 2; ++s)
        {
            bool origin = rr == 0 && s == 0;
            f.low(rr + M / 4, s + M / 2) = origin ? cplx{} : spec_at(rr, s);
            f.high(rr + M / 4, s + M / 2) = origin ? cplx{} : spec_at(rr + M / 2, s);
        }
    }
    for (CplxGrid* g : {&f.low, &f.high})
    {
        fft::centered_dft2d(g->data.data(), half, M, fft::Sign::forward);
        for (auto& v : g->data)
            v /= M;
    }
    return f;
}

Q1State predicted_conditional(ReferenceFilters const& f, double alpha, int n_tilde, int m)
{
    int const M = f.low.cols;
    cplx L = f.low(n_tilde + M / 4, m + M / 2);
    cplx H = f.high(n_tilde + M / 4, m + M / 2);
    double tb = f.theta_bar;
    cplx Cs = 1 - alpha * tb + L + I * alpha * H;
    cplx Ca = alpha + tb + alpha * L - I * H;
    return Q1State{Cs, I * Ca};
}

//---------------------------------------------------------------------------//
AmplitudePhase shifted_array_recovery(std::vector<ShiftedMeasurement> const& data)
{
    // theta_bar = a cos(delta) - b sin(delta)    (aligned array)
    //           = -a sin(delta) - b cos(delta)   (half shift)
    // with a = A cos(phi), b = A sin(phi)
    double n11 = 0, n12 = 0, n22 = 0, r1 = 0, r2 = 0;
    for (auto const& d : data)
    {
        double c = std::cos(d.delta), s = std::sin(d.delta);
        double ga = d.half_shift ? -s : c;
        double gb = d.half_shift ? -c : -s;
        n11 += ga * ga;
        n12 += ga * gb;
        n22 += gb * gb;
        r1 += ga * d.theta_bar;
        r2 += gb * d.theta_bar;
    }
    double det = n11 * n22 - n12 * n12;
    if (data.size() < 2 || !(std::abs(det) > 1e-12 * std::max(1.0, n11 * n22)))
        throw NumericError("shifted-array fit is rank deficient");
    double a = (n22 * r1 - n12 * r2) / det;
    double b = (n11 * r2 - n12 * r1) / det;
    return {std::hypot(a, b), std::atan2(b, a)};
}

double sample_theta_bar(std::function<double(double)> const& profile,
                        int M,
                        double sigma,
                        double delta,
                        bool half_shift)
{
    double sum = 0;
    for (int n = -M / 2; n < M / 2; ++n)
    {
        double x = (n + (half_shift ? 0.5 : 0.0) + delta / pi) * sigma;
        sum += ((n & 1) ? -1.0 : 1.0) * profile(x);
    }
    return sum / M;
}

//---------------------------------------------------------------------------//
double eeem_statevector_p_up(int k, double delta)
{
    using Mat2 = std::array<std::array<cplx, 2>, 2>;
    using Mat4 = std::array<std::array<cplx, 4>, 4>;

    // Ancilla starts in (|0> + |1>)/sqrt2
    Mat2 rho{};
    for (auto& row : rho)
        row.fill(0.5);

    double const h = 1 / std::sqrt(2.0);
    for (int pass = 0; pass < k; ++pass)
    {
        // Joint index 2*path + ancilla; electron enters on path 0
        Mat4 joint{};
        for (int q = 0; q < 2; ++q)
            for (int qq = 0; qq < 2; ++qq)
                joint[q][qq] = rho[q][qq];
        // CNOT: path flips iff ancilla is |1>, then path phase -+delta/2
        auto map_index = [](int idx) {
            int p = idx / 2, q = idx % 2;
            return 2 * (p ^ q) + q;
        };
        auto phase = [&](int idx) { return std::polar(1.0, (idx / 2 ? 0.5 : -0.5) * delta); };
        Mat4 evolved{};
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y)
            {
                int xx = map_index(x), yy = map_index(y);
                evolved[xx][yy] = joint[x][y] * phase(xx) * std::conj(phase(yy));
            }
        // Project the path on (|0> +- |1>)/sqrt2; Z on the ancilla for '-'
        Mat2 next{};
        for (int outcome = 0; outcome < 2; ++outcome)
        {
            auto kraus = [&](int q, int idx) -> cplx {
                int p = idx / 2, qq = idx % 2;
                if (qq != q)
                    return 0;
                double path = (outcome == 1 && p == 1) ? -h : h;
                double z = (outcome == 1 && q == 1) ? -1.0 : 1.0;
                return path * z;
            };
            for (int q = 0; q < 2; ++q)
                for (int qq = 0; qq < 2; ++qq)
                    for (int x = 0; x < 4; ++x)
                        for (int y = 0; y < 4; ++y)
                            next[q][qq] += kraus(q, x) * evolved[x][y] * std::conj(kraus(qq, y));
        }
        rho = next;
    }
    // |up> = (|0> + i|1>)/sqrt2
    std::array<cplx, 2> up{h, cplx{0, h}};
    cplx p = 0;
    for (int q = 0; q < 2; ++q)
        for (int qq = 0; qq < 2; ++qq)
            p += std::conj(up[q]) * rho[q][qq] * up[qq];
    return p.real();
}

}  // namespace qem
