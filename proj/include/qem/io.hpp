#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "qem/config.hpp"

namespace qem
{
std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);

//! Nine significant digits
std::string format_number(double v);
std::string hex64(std::uint64_t v);

void ensure_directory(std::string const& path);
std::string join_path(std::string const& dir, std::string const& name);

class CsvWriter
{
  public:
    CsvWriter(std::string path, std::vector<std::string> const& header);
    CsvWriter& cell(double v);
    CsvWriter& cell(long v);
    CsvWriter& cell(int v) { return cell(static_cast<long>(v)); }
    CsvWriter& cell(std::string const& v);
    void end_row();
    std::string const& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    bool first_ = true;
};

inline char const* version_string()
{
    return "qem 1.0.0";
}

//! manifest.txt: comments with provenance, then a loadable config
void write_manifest(std::string const& dir,
                    std::string const& command,
                    RunConfig const& run,
                    Settings const& s,
                    std::vector<std::string> const& outputs);

}  // namespace qem
