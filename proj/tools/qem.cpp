#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qem/commands.hpp"
#include "qem/config.hpp"
#include "qem/errors.hpp"

namespace
{
int exit_code(qem::ExitCode c)
{
    return static_cast<int>(c);
}

qem::KeyValues parse_overrides(std::vector<std::string> const& sets)
{
    qem::KeyValues kv;
    for (auto const& s : sets)
    {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw qem::ConfigError("--set expects key=value, got '" + s + "'");
        kv.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return kv;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulation suite for resilient quantum electron microscopy"};
    app.require_subcommand(1);

    std::string profile;
    std::string config_file;
    std::string out_dir = ".";
    long long seed = -1;
    std::vector<std::string> sets;
    app.add_option("--profile", profile, "Named settings profile (paper-defaults, quick)");
    app.add_option("--config", config_file, "key=value or JSON settings file");
    app.add_option("--seed", seed, "Random seed")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--set", sets, "Override a setting, key=value (repeatable)");

    bool json = false;
    auto* constants = app.add_subcommand("constants", "Print derived constants");
    constants->add_flag("--json", json, "Emit JSON instead of a table");
    app.add_subcommand("fig2", "Optimal repetition number versus angle");
    std::string input;
    auto* fig3 = app.add_subcommand("fig3", "Noisy image panels from a phase map");
    fig3->add_option("--input", input, "Atom list, PDB file or CSV phase map");
    app.add_subcommand("protocol", "Protocol rounds and inelastic disturbance statistics");
    app.add_subcommand("baselines", "Classical measurement variance tables");
    app.add_subcommand("mu-curve", "Disturbance estimate versus angle");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code(qem::ExitCode::config);
    }

    try
    {
        qem::RunConfig run;
        if (!config_file.empty())
            qem::load_config_file(config_file, run);
        if (!profile.empty())
            run.profile = profile;
        if (seed >= 0)
            run.seed = static_cast<std::uint64_t>(seed);
        run.output_dir = out_dir;
        run.overrides = parse_overrides(sets);

        std::vector<std::string> written;
        auto* sub = app.get_subcommands().front();
        std::string name = sub->get_name();
        if (name == "constants")
            written = qem::cmd_constants(run, json, std::cout);
        else if (name == "fig2")
            written = qem::cmd_fig2(run);
        else if (name == "fig3")
            written = qem::cmd_fig3(run, input);
        else if (name == "protocol")
            written = qem::cmd_protocol(run);
        else if (name == "baselines")
            written = qem::cmd_baselines(run);
        else if (name == "mu-curve")
            written = qem::cmd_mu_curve(run);
        if (name != "constants")
            for (auto const& w : written)
                std::cout << "wrote " << w << '\n';
    }
    catch (qem::ConfigError const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_code(qem::ExitCode::config);
    }
    catch (qem::DomainError const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_code(qem::ExitCode::config);
    }
    catch (qem::NumericError const& e)
    {
        std::cerr << "numeric error: " << e.what() << '\n';
        return exit_code(qem::ExitCode::numeric);
    }
    catch (qem::IoError const& e)
    {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_code(qem::ExitCode::io);
    }
    return exit_code(qem::ExitCode::ok);
}
