#include "qem/io.hpp"

#include <cstdio>
#include <filesystem>

#include "qem/errors.hpp"

namespace qem
{
std::uint64_t fnv1a64(std::string_view data, std::uint64_t h)
{
    for (unsigned char c : data)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void ensure_directory(std::string const& path)
{
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec || !std::filesystem::is_directory(path))
        throw IoError("cannot create output directory '" + path + "'");
}

std::string join_path(std::string const& dir, std::string const& name)
{
    return (std::filesystem::path(dir) / name).string();
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> const& header)
    : path_(std::move(path)), out_(path_)
{
    if (!out_)
        throw IoError("cannot write '" + path_ + "'");
    for (auto const& h : header)
        cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(double v)
{
    return cell(format_number(v));
}

CsvWriter& CsvWriter::cell(long v)
{
    return cell(std::to_string(v));
}

CsvWriter& CsvWriter::cell(std::string const& v)
{
    if (!first_)
        out_ << ',';
    out_ << v;
    first_ = false;
    return *this;
}

void CsvWriter::end_row()
{
    out_ << '\n';
    first_ = true;
    if (!out_)
        throw IoError("failed writing '" + path_ + "'");
}

void write_manifest(std::string const& dir,
                    std::string const& command,
                    RunConfig const& run,
                    Settings const& s,
                    std::vector<std::string> const& outputs)
{
    std::string path = join_path(dir, "manifest.txt");
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << "# command: " << command << '\n';
    out << "# version: " << version_string() << '\n';
    out << "# config_hash: " << hex64(config_hash(run, s)) << '\n';
    // Names relative to the output directory keep the manifest relocatable
    for (auto const& o : outputs)
        out << "# output: " << std::filesystem::path(o).filename().string() << '\n';
    out << "profile=" << run.profile << '\n';
    out << "seed=" << run.seed << '\n';
    for (auto const& [k, v] : dump_settings(s))
        out << k << '=' << v << '\n';
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

}  // namespace qem
