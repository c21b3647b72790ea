#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qem/physics.hpp"

namespace qem
{
using KeyValues = std::vector<std::pair<std::string, std::string>>;

//! Every tunable of the command-line experiments
struct Settings
{
    BeamModel beam;
    DoseModel dose;
    double thickness_nm = 30;  //!< specimen thickness t
    int M = 16;  //!< beam grid
    double sigma_nm = 1;  //!< beam pitch
    double beta_L_mrad = 2;
    double beta_H_mrad = 3.5;
    int grid = 240;  //!< image pixels per side
    double pixel_nm = 0.05;
    int k = 50;  //!< repetitions per round
    long rounds = 10000;
    double theta_bar = 1e-3;
    int eta_trials = 2000;
};

struct RunConfig
{
    std::string profile = "paper-defaults";
    std::uint64_t seed = 1;
    std::string output_dir = ".";
    KeyValues file_values;  //!< from --config, applied before overrides
    KeyValues overrides;  //!< from --set
};

std::vector<std::string> profile_names();
Settings profile_settings(std::string const& name);

//! Set one key; unknown keys and malformed numbers are config errors
void apply_setting(Settings& s, std::string const& key, std::string const& value);
//! Canonical ordered dump, exact enough to reproduce every value
KeyValues dump_settings(Settings const& s);
void validate(Settings const& s);

/*!
 * Flat key=value lines with '#' comments, or a JSON object. For JSON, a
 * "config" member is used if present, otherwise the top-level object.
 */
KeyValues parse_config_text(std::string const& text);

//! Reads a config file; "profile" and "seed" land in the run config
void load_config_file(std::string const& path, RunConfig& run);

Settings resolve(RunConfig const& run);
std::uint64_t config_hash(RunConfig const& run, Settings const& s);

}  // namespace qem
