#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qem/config.hpp"

namespace qem
{
// Each command resolves the run config, writes its files plus a manifest
// into run.output_dir, and returns the paths it wrote.

std::vector<std::string> cmd_constants(RunConfig const& run, bool json, std::ostream& out);
std::vector<std::string> cmd_fig2(RunConfig const& run);
//! input: atom list (.pdb/.ent or text), a CSV phase map, or empty for a
//! seeded synthetic blob
std::vector<std::string> cmd_fig3(RunConfig const& run, std::string const& input);
std::vector<std::string> cmd_protocol(RunConfig const& run);
std::vector<std::string> cmd_baselines(RunConfig const& run);
std::vector<std::string> cmd_mu_curve(RunConfig const& run);

}  // namespace qem
