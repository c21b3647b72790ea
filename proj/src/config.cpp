#include "qem/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qem/errors.hpp"
#include "qem/io.hpp"

namespace qem
{
namespace
{
std::string trim(std::string const& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double to_double(std::string const& key, std::string const& v)
{
    char* end = nullptr;
    errno = 0;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
        throw ConfigError("setting '" + key + "': '" + v + "' is not a number");
    return x;
}

long to_long(std::string const& key, std::string const& v)
{
    double x = to_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e15)
        throw ConfigError("setting '" + key + "': '" + v + "' is not an integer");
    return static_cast<long>(x);
}

std::string exact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::string> profile_names()
{
    return {"paper-defaults", "quick"};
}

Settings profile_settings(std::string const& name)
{
    Settings s;
    if (name == "paper-defaults")
        return s;
    if (name == "quick")
    {
        s.rounds = 2000;
        s.eta_trials = 400;
        return s;
    }
    throw ConfigError("unknown profile '" + name + "'");
}

void apply_setting(Settings& s, std::string const& key, std::string const& value)
{
    std::string v = trim(value);
    if (key == "E_K")
        s.beam.kinetic_energy_eV = to_double(key, v);
    else if (key == "E")
        s.beam.energy_loss_eV = to_double(key, v);
    else if (key == "Lambda")
        s.beam.mean_free_path_nm = to_double(key, v);
    else if (key == "t")
        s.thickness_nm = to_double(key, v);
    else if (key == "R")
        s.dose.damage_R_nm4 = to_double(key, v);
    else if (key == "zeta")
        s.dose.zeta = to_double(key, v);
    else if (key == "A")
        s.dose.area_nm2 = to_double(key, v);
    else if (key == "M")
        s.M = static_cast<int>(to_long(key, v));
    else if (key == "sigma")
        s.sigma_nm = to_double(key, v);
    else if (key == "beta_L")
        s.beta_L_mrad = to_double(key, v);
    else if (key == "beta_H")
        s.beta_H_mrad = to_double(key, v);
    else if (key == "grid")
        s.grid = static_cast<int>(to_long(key, v));
    else if (key == "pixel")
        s.pixel_nm = to_double(key, v);
    else if (key == "k")
        s.k = static_cast<int>(to_long(key, v));
    else if (key == "rounds")
        s.rounds = to_long(key, v);
    else if (key == "theta_bar")
        s.theta_bar = to_double(key, v);
    else if (key == "eta_trials")
        s.eta_trials = static_cast<int>(to_long(key, v));
    else
        throw ConfigError("unknown setting '" + key + "'");
}

KeyValues dump_settings(Settings const& s)
{
    return {
        {"E_K", exact(s.beam.kinetic_energy_eV)},
        {"E", exact(s.beam.energy_loss_eV)},
        {"Lambda", exact(s.beam.mean_free_path_nm)},
        {"t", exact(s.thickness_nm)},
        {"R", exact(s.dose.damage_R_nm4)},
        {"zeta", exact(s.dose.zeta)},
        {"A", exact(s.dose.area_nm2)},
        {"M", std::to_string(s.M)},
        {"sigma", exact(s.sigma_nm)},
        {"beta_L", exact(s.beta_L_mrad)},
        {"beta_H", exact(s.beta_H_mrad)},
        {"grid", std::to_string(s.grid)},
        {"pixel", exact(s.pixel_nm)},
        {"k", std::to_string(s.k)},
        {"rounds", std::to_string(s.rounds)},
        {"theta_bar", exact(s.theta_bar)},
        {"eta_trials", std::to_string(s.eta_trials)},
    };
}

void validate(Settings const& s)
{
    validate(s.beam);
    validate(s.dose);
    if (!(s.thickness_nm > 0))
        throw ConfigError("thickness t must be positive");
    if (s.M < 4 || (s.M & (s.M - 1)) != 0)
        throw ConfigError("M must be a power of two >= 4");
    if (!(s.sigma_nm > 0))
        throw ConfigError("sigma must be positive");
    if (!(s.beta_L_mrad > 0) || !(s.beta_H_mrad > 0))
        throw ConfigError("band-pass angles must be positive");
    if (s.grid < 2 || s.grid % 2 != 0)
        throw ConfigError("grid must be even and >= 2");
    if (!(s.pixel_nm > 0))
        throw ConfigError("pixel must be positive");
    if (s.k < 1 || s.rounds < 1 || s.eta_trials < 1)
        throw ConfigError("k, rounds and eta_trials must be >= 1");
    if (!(std::abs(s.theta_bar) < 0.3))
        throw ConfigError("theta_bar must be a weak phase (|theta_bar| < 0.3)");
}

KeyValues parse_config_text(std::string const& text)
{
    KeyValues kv;
    std::string t = trim(text);
    if (!t.empty() && t.front() == '{')
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(t);
        }
        catch (nlohmann::json::exception const& e)
        {
            throw ConfigError(std::string("bad JSON config: ") + e.what());
        }
        nlohmann::json const& obj = j.contains("config") ? j["config"] : j;
        if (!obj.is_object())
            throw ConfigError("JSON config must be an object");
        for (auto it = obj.begin(); it != obj.end(); ++it)
        {
            auto const& v = it.value();
            if (v.is_string())
                kv.emplace_back(it.key(), v.get<std::string>());
            else if (v.is_number_integer())
                kv.emplace_back(it.key(), std::to_string(v.get<long long>()));
            else if (v.is_number())
                kv.emplace_back(it.key(), exact(v.get<double>()));
            else
                throw ConfigError("JSON config value for '" + it.key() + "' must be scalar");
        }
        return kv;
    }

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto c = line.find('#'); c != std::string::npos)
            line.erase(c);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

void load_config_file(std::string const& path, RunConfig& run)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    for (auto& [k, v] : parse_config_text(ss.str()))
    {
        if (k == "profile")
            run.profile = v;
        else if (k == "seed")
            run.seed = static_cast<std::uint64_t>(to_long(k, v));
        else
            run.file_values.emplace_back(k, v);
    }
}

Settings resolve(RunConfig const& run)
{
    Settings s = profile_settings(run.profile);
    for (auto const& [k, v] : run.file_values)
        apply_setting(s, k, v);
    for (auto const& [k, v] : run.overrides)
        apply_setting(s, k, v);
    validate(s);
    return s;
}

std::uint64_t config_hash(RunConfig const& run, Settings const& s)
{
    std::string canon = "profile=" + run.profile + "\nseed=" + std::to_string(run.seed) + "\n";
    for (auto const& [k, v] : dump_settings(s))
        canon += k + "=" + v + "\n";
    return fnv1a64(canon);
}

}  // namespace qem
