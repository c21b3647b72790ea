#include "qem/commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "qem/baselines.hpp"
#include "qem/errors.hpp"
#include "qem/imaging.hpp"
#include "qem/inelastic.hpp"
#include "qem/io.hpp"
#include "qem/isn_analysis.hpp"
#include "qem/qsim.hpp"

namespace qem
{
using constants::pi;

namespace
{
struct ConstantRow
{
    std::string name;
    double value;
    std::string unit;
    std::string reference;
};

std::vector<ConstantRow> constant_rows(Settings const& s)
{
    ZetaSolution z = solve_zeta();
    XiSolution xi = solve_xi();
    double nsq = dose_budget_nsq(1.0, s.dose);
    double noise = classical_noise(1e-3, s.beam, s.dose);
    return {
        {"wavelength", s.beam.wavelength_nm() * 1e3, "pm", "1.97"},
        {"gamma", s.beam.gamma(), "", ""},
        {"beta_rel", s.beam.beta_rel(), "", ""},
        {"theta_E", theta_E(s.beam) * 1e6, "urad", "41"},
        {"theta_c", bethe_ridge_angle(s.beam) * 1e3, "mrad", "7.2"},
        {"beta_opt", z.beta_opt, "", "1.26"},
        {"zeta", z.zeta, "", "0.064"},
        {"xi", xi.xi, "rad", "0.86"},
        {"xi_squared", xi.xi_sq, "", "0.74"},
        {"cos_xi", xi.cos_xi, "", "0.65"},
        {"inv_cos2_xi", 1 / (xi.cos_xi * xi.cos_xi), "", "2.35"},
        {"N_sq_sigma_1nm", nsq, "", "2.3e3"},
        {"classical_noise_1mrad", noise, "rad", "1/186"},
        {"inv_classical_noise_1mrad", 1 / noise, "", "186"},
    };
}

std::vector<double> beta_range(double lo_mrad, double hi_mrad, double step_mrad)
{
    std::vector<double> b;
    int n = static_cast<int>(std::lround((hi_mrad - lo_mrad) / step_mrad));
    for (int i = 0; i <= n; ++i)
        b.push_back((lo_mrad + i * step_mrad) * 1e-3);
    return b;
}

PhaseMap theta_bar_map(int M, double sigma, double theta_bar)
{
    RealGrid th(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            th(i, j) = ((i - M / 2) & 1 ? -1.0 : 1.0) * theta_bar;
    return PhaseMap::from_grid(th, sigma);
}

}  // namespace

//---------------------------------------------------------------------------//
std::vector<std::string> cmd_constants(RunConfig const& run, bool json, std::ostream& out)
{
    Settings s = resolve(run);
    ensure_directory(run.output_dir);
    auto rows = constant_rows(s);
    std::vector<std::string> outputs;

    if (json)
    {
        nlohmann::ordered_json j;
        j["config"]["profile"] = run.profile;
        j["config"]["seed"] = run.seed;
        for (auto const& [k, v] : dump_settings(s))
            j["config"][k] = v;
        for (auto const& r : rows)
            j["constants"][r.name] = {{"value", r.value}, {"unit", r.unit}, {"reference", r.reference}};
        std::string text = j.dump(2);
        out << text << '\n';
        std::string path = join_path(run.output_dir, "constants.json");
        std::ofstream f(path);
        if (!(f << text << '\n'))
            throw IoError("failed writing '" + path + "'");
        outputs.push_back(path);
    }
    else
    {
        CsvWriter csv(join_path(run.output_dir, "constants.csv"), {"name", "value", "unit", "reference"});
        for (auto const& r : rows)
        {
            csv.cell(r.name).cell(r.value).cell(r.unit).cell(r.reference).end_row();
            out << r.name << " = " << format_number(r.value) << (r.unit.empty() ? "" : " ")
                << r.unit;
            if (!r.reference.empty())
                out << "   (reference " << r.reference << ")";
            out << '\n';
        }
        outputs.push_back(csv.path());
    }
    write_manifest(run.output_dir, "constants", run, s, outputs);
    return outputs;
}

std::vector<std::string> cmd_fig2(RunConfig const& run)
{
    Settings s = resolve(run);
    ensure_directory(run.output_dir);
    std::vector<double> lt{10, 5};
    auto rows = figure2_curves(beta_range(0.5, 20, 0.25), lt, s.beam, s.dose);

    CsvWriter csv(join_path(run.output_dir, "fig2.csv"),
                  {"beta_mrad", "k_opt_L10", "k_opt_L5", "n_sq", "sigma_nm", "mu",
                   "within_budget_L10", "within_budget_L5"});
    for (auto const& r : rows)
    {
        csv.cell(r.beta * 1e3);
        for (double k : r.k_opt)
            csv.cell(k);
        csv.cell(r.N_sq).cell(s.beam.wavelength_nm() / r.beta).cell(r.mu);
        for (double k : r.k_opt)
            csv.cell(static_cast<long>(k <= r.N_sq));
        csv.end_row();
    }
    std::vector<std::string> outputs{csv.path()};
    write_manifest(run.output_dir, "fig2", run, s, outputs);
    return outputs;
}

std::vector<std::string> cmd_fig3(RunConfig const& run, std::string const& input)
{
    Settings s = resolve(run);
    ensure_directory(run.output_dir);
    std::vector<std::string> outputs;

    PixelImage map;
    auto ends_with = [&](std::string const& ext) {
        return input.size() >= ext.size()
               && input.compare(input.size() - ext.size(), ext.size(), ext) == 0;
    };
    if (!input.empty() && ends_with(".csv"))
    {
        map.data = read_csv_grid(input);
        map.pixel_nm = s.pixel_nm;
        if (map.data.rows != map.data.cols || map.data.rows % 2 != 0)
            throw ConfigError("phase map must be square with an even size");
    }
    else
    {
        AtomList atoms;
        if (input.empty())
        {
            Rng rng = Rng(run.seed).split("specimen");
            atoms = synthetic_blob(2000, 1.5, rng);
        }
        else
        {
            atoms = load_atoms(input);
        }
        PhaseMapOptions po;
        po.size = s.grid;
        po.pixel_nm = s.pixel_nm;
        map = phase_map_from_atoms(atoms, ElementTable::defaults(), s.beam, po).image;
    }
    std::string map_path = join_path(run.output_dir, "fig3_phase_map.csv");
    write_csv_grid(map_path, map.data);
    outputs.push_back(map_path);

    CsvWriter spec(join_path(run.output_dir, "fig3_spectrum.csv"), {"q_per_nm", "power", "psd"});
    for (auto const& row : radial_power_spectrum(map))
        if (row.count > 0)
            spec.cell(row.q_per_nm).cell(row.power).cell(row.psd).end_row();
    outputs.push_back(spec.path());

    double beta_max = s.beam.wavelength_nm() / map.pixel_nm;
    MuTable mu(s.beam, 1e-4, std::max(beta_max, 1e-3), 160, 512);
    Figure3Options fo;
    fo.beta_L = s.beta_L_mrad * 1e-3;
    fo.beta_H = s.beta_H_mrad * 1e-3;
    fo.seed = Rng(run.seed).split("fig3-noise").next_u64();
    auto panels = render_figure3(map, s.beam, s.dose, mu, fo);
    for (auto const& p : panels)
    {
        PixelImage c = crop_center(p.image, fo.crop_rows, fo.crop_cols);
        std::string base = join_path(run.output_dir, "fig3_" + p.label);
        write_pgm(base + ".pgm", c.data);
        write_csv_grid(base + ".csv", c.data);
        outputs.push_back(base + ".pgm");
        outputs.push_back(base + ".csv");
    }
    write_manifest(run.output_dir, "fig3", run, s, outputs);
    return outputs;
}

std::vector<std::string> cmd_protocol(RunConfig const& run)
{
    Settings s = resolve(run);
    ensure_directory(run.output_dir);
    std::vector<std::string> outputs;
    Rng root(run.seed);

    // p_up recovery, with a zero-specimen control
    CsvWriter summary(join_path(run.output_dir, "protocol.csv"),
                      {"case", "k", "theta_bar", "rounds", "p_up_hat", "p_up_pred",
                       "sin_k_delta_hat", "sin_k_delta_pred", "std_error", "z_score"});
    CsvWriter log(join_path(run.output_dir, "protocol_rounds.csv"),
                  {"case", "round", "up", "q2_ones"});
    // Per-electron outcomes for the first specimen rounds only
    CsvWriter outcomes(join_path(run.output_dir, "protocol_outcomes.csv"),
                       {"round", "electron", "q2", "n_hat", "m_hat"});
    long const logged_rounds = 20;
    for (auto const& [label, tb] : {std::pair{"specimen", s.theta_bar}, std::pair{"control", 0.0}})
    {
        PhaseMap map = theta_bar_map(s.M, s.sigma_nm, tb);
        Rng stream = root.split(std::string("protocol-") + label);
        long ups = 0;
        for (long r = 0; r < s.rounds; ++r)
        {
            Rng rr = stream.split(static_cast<std::uint64_t>(r));
            RoundResult res = run_round(map, s.k, 0.0, RoundOptions{}, rr);
            bool up = measure_updown(res.q1, rr);
            long q2 = 0;
            for (std::size_t e = 0; e < res.outcomes.size(); ++e)
            {
                auto const& o = res.outcomes[e];
                q2 += o.q2;
                if (tb == s.theta_bar && r < logged_rounds)
                    outcomes.cell(r).cell(static_cast<long>(e)).cell(static_cast<long>(o.q2))
                        .cell(static_cast<long>(o.n_hat)).cell(static_cast<long>(o.m_hat)).end_row();
            }
            ups += up;
            log.cell(std::string(label)).cell(r).cell(static_cast<long>(up)).cell(q2).end_row();
        }
        // Readout convention: delta = -2 theta_bar
        double delta = -2 * tb;
        UpDown pred = eeem_probabilities(s.k, delta);
        double p_hat = static_cast<double>(ups) / s.rounds;
        double se = std::sqrt(pred.p_up * pred.p_down / s.rounds);
        summary.cell(std::string(label)).cell(s.k).cell(tb).cell(s.rounds).cell(p_hat).cell(pred.p_up)
            .cell(2 * p_hat - 1).cell(std::sin(s.k * delta)).cell(se)
            .cell(se > 0 ? (p_hat - pred.p_up) / se : 0.0);
        summary.end_row();
    }
    outputs.push_back(summary.path());
    outputs.push_back(log.path());
    outputs.push_back(outcomes.path());

    // Single-event disturbance against the analytic estimate
    CsvWriter isn(join_path(run.output_dir, "protocol_isn.csv"),
                  {"beta_mrad", "mu_analytic", "rms_eta_mc", "ratio", "trials"});
    for (double beta : {2e-3, 4e-3, 8e-3})
    {
        Rng er = root.split("eta-" + format_number(beta));
        auto eta = sample_eta(beta, s.M, s.eta_trials, s.beam, RoundOptions{}, er);
        double mu = mu_of_beta(beta, s.beam);
        double r = rms(eta);
        isn.cell(beta * 1e3).cell(mu).cell(r).cell(r / mu).cell(static_cast<long>(s.eta_trials)).end_row();
    }
    outputs.push_back(isn.path());

    // Rounds with Poisson-scheduled events on a blank specimen
    CsvWriter walk(join_path(run.output_dir, "protocol_isn_rounds.csv"),
                   {"trial", "w", "eta_sum", "q1_fidelity"});
    PhaseMap blank = PhaseMap::from_grid(RealGrid(s.M, s.M, 0.0), s.sigma_nm);
    long walk_trials = std::min<long>(s.rounds, 200);
    for (long t = 0; t < walk_trials; ++t)
    {
        Rng tr = root.split("isn-round").split(static_cast<std::uint64_t>(t));
        auto events = schedule_events(s.k, s.thickness_nm, s.beam, s.M * s.sigma_nm, tr);
        IsnRoundResult res = isn_round(blank, s.k, events, 0.0, RoundOptions{}, s.beam, tr);
        double sum = 0;
        for (double e : res.eta)
            sum += e;
        double fid = std::norm(res.q1.c_s) / (std::norm(res.q1.c_s) + std::norm(res.q1.c_a));
        walk.cell(t).cell(static_cast<long>(events.size())).cell(sum).cell(fid).end_row();
    }
    outputs.push_back(walk.path());
    write_manifest(run.output_dir, "protocol", run, s, outputs);
    return outputs;
}

std::vector<std::string> cmd_baselines(RunConfig const& run)
{
    Settings s = resolve(run);
    ensure_directory(run.output_dir);
    std::vector<std::string> outputs;
    Rng root(run.seed);

    // Small theta keeps the in-focus (1 + 2 theta) factor near one, while
    // N alpha theta^2 = 40 keeps the square-root estimators in their
    // linear regime.
    long const N = 10000000;
    double const alpha = 1e-2;
    double const theta = 0.02;
    long const trials = 4000;

    CsvWriter csv(join_path(run.output_dir, "baselines.csv"),
                  {"scheme", "N", "alpha", "analytic", "mc", "ratio", "n_pixels"});
    std::map<Scheme, double> mc_var;
    struct Case
    {
        Scheme kind;
        int n;
    };
    for (Case c : {Case{Scheme::in_focus_phase_contrast, 2},
                   Case{Scheme::dark_field, 2},
                   Case{Scheme::diffraction, 2},
                   Case{Scheme::discrete_n_pixel, 2},
                   Case{Scheme::discrete_n_pixel, 16},
                   Case{Scheme::scanning_pairwise, 16}})
    {
        MeasurementScheme ms{c.kind, N, c.n};
        Rng rr = root.split(std::string(to_string(c.kind)) + std::to_string(c.n));
        McResult r = variance_monte_carlo(ms, theta, alpha, trials, rr);
        if (!mc_var.count(c.kind))
            mc_var[c.kind] = r.variance;
        bool pixelated = c.kind == Scheme::discrete_n_pixel || c.kind == Scheme::scanning_pairwise;
        csv.cell(std::string(to_string(c.kind))).cell(N).cell(pixelated ? 0.0 : alpha)
            .cell(r.analytic).cell(r.variance).cell(r.ratio()).cell(pixelated ? c.n : 0);
        csv.end_row();
    }
    outputs.push_back(csv.path());

    CsvWriter eq(join_path(run.output_dir, "baselines_equivalence.csv"), {"pair", "variance_ratio"});
    double base = mc_var[Scheme::in_focus_phase_contrast];
    eq.cell(std::string("dark_field/in_focus")).cell(mc_var[Scheme::dark_field] / base).end_row();
    eq.cell(std::string("diffraction/in_focus")).cell(mc_var[Scheme::diffraction] / base).end_row();
    eq.cell(std::string("diffraction/dark_field"))
        .cell(mc_var[Scheme::diffraction] / mc_var[Scheme::dark_field]).end_row();
    outputs.push_back(eq.path());

    CsvWriter ee(join_path(run.output_dir, "baselines_eeem.csv"),
                 {"k", "delta", "p_up_closed_form", "p_up_statevector", "var_quantum_total",
                  "var_classical_total"});
    for (int k : {1, 5, 20})
        for (double d : {0.0, 1e-3, 1e-2})
        {
            VarianceGain g = eeem_variance_gain(k, N, d);
            ee.cell(k).cell(d).cell(eeem_probabilities(k, d).p_up).cell(eeem_statevector_p_up(k, d))
                .cell(g.quantum_total).cell(g.classical_total);
            ee.end_row();
        }
    outputs.push_back(ee.path());

    CsvWriter pen(join_path(run.output_dir, "baselines_background_phase.csv"),
                  {"delta", "penalty_quadratic", "penalty_exact"});
    for (int i = 0; i <= 30; ++i)
    {
        double d = 0.01 * i;
        pen.cell(d).cell(background_phase_penalty(d)).cell(background_phase_penalty_exact(d)).end_row();
    }
    outputs.push_back(pen.path());

    CsvWriter hz(join_path(run.output_dir, "baselines_heisenberg.csv"),
                 {"n_pixels", "N", "method", "variance_per_pixel"});
    for (int n : {4, 16})
        for (auto const& row : heisenberg_fixed_passages(n, 1e4))
            hz.cell(n).cell(1e4).cell(row.method).cell(row.variance_per_pixel).end_row();
    outputs.push_back(hz.path());

    write_manifest(run.output_dir, "baselines", run, s, outputs);
    return outputs;
}

std::vector<std::string> cmd_mu_curve(RunConfig const& run)
{
    Settings s = resolve(run);
    ensure_directory(run.output_dir);
    CsvWriter csv(join_path(run.output_dir, "mu_curve.csv"),
                  {"beta_mrad", "mu", "set_A", "set_S", "full_disc"});
    for (double beta : beta_range(0.5, 20, 0.5))
    {
        StripeGeometry geo;
        geo.beta_period = beta;
        geo.cutoff = bethe_ridge_angle(s.beam);
        geo.theta_E = theta_E(s.beam);
        StripeIntegrals si = stripe_integrals(geo);
        double mu = si.set_S > 0 ? std::sqrt(si.set_A / si.set_S) : 0.0;
        csv.cell(beta * 1e3).cell(mu).cell(si.set_A).cell(si.set_S).cell(si.full_disc).end_row();
    }
    std::vector<std::string> outputs{csv.path()};
    write_manifest(run.output_dir, "mu-curve", run, s, outputs);
    return outputs;
}

}  // namespace qem
