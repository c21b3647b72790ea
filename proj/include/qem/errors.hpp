#pragma once

#include <stdexcept>
#include <string>

namespace qem
{
// Exit codes used by the command-line tool.
enum class ExitCode : int
{
    ok = 0,
    config = 2,
    numeric = 3,
    io = 4,
};

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

//! Invalid argument to a physics formula (negative fluence, sigma <= 0...)
struct DomainError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

}  // namespace qem
